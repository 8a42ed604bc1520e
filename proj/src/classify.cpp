#include "mammo/classify.hpp"

#include "mammo/error.hpp"

namespace mammo {

void RuleSet::validate() const {
  if (min_area > max_area) throw Error(ErrorCode::ConfigError, "min_area > max_area");
  if (!(min_compactness >= 0.0 && min_compactness <= 1.0)) {
    throw Error(ErrorCode::ConfigError, "min_compactness outside [0,1]");
  }
  if (!(d_min < d_max)) throw Error(ErrorCode::ConfigError, "d_min must be < d_max");
}

std::string_view to_string(Label label) { return label == Label::Tumor ? "tumor" : "normal"; }

Detection classify(int region_id, const FeatureVector& features, double dimension,
                   const RuleSet& rules) {
  const bool passed[kRuleNames.size()] = {
      features.area >= rules.min_area,
      features.area <= rules.max_area,
      features.compactness >= rules.min_compactness,
      features.boundary_gradient >= rules.min_boundary_gradient,
      features.intensity_diff >= rules.min_intensity_diff,
      dimension >= rules.d_min,
      dimension <= rules.d_max,
  };
  Detection d;
  d.region_id = region_id;
  d.features = features;
  d.dimension = dimension;
  for (std::size_t i = 0; i < kRuleNames.size(); ++i) {
    if (!passed[i]) d.failed_rules.emplace_back(kRuleNames[i]);
  }
  d.label = d.failed_rules.empty() ? Label::Tumor : Label::Normal;
  return d;
}

}  // namespace mammo
