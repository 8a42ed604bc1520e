#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "mammo/features.hpp"

namespace mammo {

// Engineering defaults, not clinically derived.
struct RuleSet {
  std::size_t min_area = 50;
  std::size_t max_area = 4096;  // a quarter of a 128x128 working image
  double min_compactness = 0.4;
  double min_boundary_gradient = 2.0;
  double min_intensity_diff = 10.0;
  double d_min = 2.4;
  double d_max = 2.75;

  /// Throws ConfigError when the bounds are inconsistent.
  void validate() const;
};

/// Rule names in evaluation order; failed_rules always follows this order.
inline constexpr std::array<std::string_view, 7> kRuleNames = {
    "min_area",           "max_area",           "min_compactness", "min_boundary_gradient",
    "min_intensity_diff", "d_min",              "d_max",
};

enum class Label { Normal, Tumor };

std::string_view to_string(Label label);

struct Detection {
  int region_id = 0;
  FeatureVector features;
  double dimension = 0.0;
  Label label = Label::Normal;
  std::vector<std::string> failed_rules;
};

/// Conjunctive rules: tumor iff every bound holds.
Detection classify(int region_id, const FeatureVector& features, double dimension,
                   const RuleSet& rules);

}  // namespace mammo
