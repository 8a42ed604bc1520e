#include "doctest.h"
#include "mammo/classify.hpp"
#include "mammo/error.hpp"

using namespace mammo;

namespace {

FeatureVector good_features() {
  FeatureVector f;
  f.area = 400;
  f.compactness = 0.8;
  f.mean_gradient = 1.0;
  f.boundary_gradient = 20.0;
  f.gray_std = 5.0;
  f.edge_distance_variance = 0.1;
  f.intensity_diff = 60.0;
  return f;
}

}  // namespace

TEST_CASE("classify passes comfortably inside bounds") {
  const Detection d = classify(4, good_features(), 2.55, RuleSet{});
  CHECK(d.label == Label::Tumor);
  CHECK(d.failed_rules.empty());
  CHECK(d.region_id == 4);
  CHECK(d.dimension == 2.55);
}

TEST_CASE("classify reports single and multiple violations in order") {
  FeatureVector f = good_features();
  f.area = 10;
  Detection d = classify(1, f, 2.5, RuleSet{});
  CHECK(d.label == Label::Normal);
  CHECK(d.failed_rules == std::vector<std::string>{"min_area"});

  f = good_features();
  f.area = 100000;
  f.intensity_diff = -3.0;
  d = classify(1, f, 2.9, RuleSet{});
  CHECK(d.failed_rules == std::vector<std::string>{"max_area", "min_intensity_diff", "d_max"});

  f = good_features();
  f.compactness = 0.1;
  f.boundary_gradient = 0.5;
  d = classify(1, f, 2.1, RuleSet{});
  CHECK(d.failed_rules == std::vector<std::string>{"min_compactness", "min_boundary_gradient", "d_min"});
}

TEST_CASE("relaxing a bound never turns a tumour into normal") {
  const FeatureVector f = good_features();
  const RuleSet strict{};
  REQUIRE(classify(1, f, 2.5, strict).label == Label::Tumor);
  RuleSet relaxed = strict;
  relaxed.min_area = 0;
  relaxed.max_area = 1u << 30;
  relaxed.min_compactness = 0.0;
  relaxed.min_boundary_gradient = -1e9;
  relaxed.min_intensity_diff = -1e9;
  relaxed.d_min = 1.0;
  relaxed.d_max = 4.0;
  CHECK(classify(1, f, 2.5, relaxed).label == Label::Tumor);

  FeatureVector weak = good_features();
  weak.compactness = 0.3;
  CHECK(classify(1, weak, 2.5, strict).label == Label::Normal);
  RuleSet loose = strict;
  loose.min_compactness = 0.3;
  CHECK(classify(1, weak, 2.5, loose).label == Label::Tumor);
}

TEST_CASE("RuleSet validation") {
  RuleSet r;
  CHECK_NOTHROW(r.validate());
  r.min_area = 10;
  r.max_area = 5;
  CHECK_THROWS_AS(r.validate(), Error);
  r = RuleSet{};
  r.min_compactness = 1.5;
  CHECK_THROWS_AS(r.validate(), Error);
  r = RuleSet{};
  r.d_min = 2.8;
  CHECK_THROWS_AS(r.validate(), Error);
}
