// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <string>

#include "mammo/features.hpp"
#include "mammo/fractal.hpp"
#include "mammo/pipeline.hpp"
#include "mammo/segment.hpp"
#include "mammo/threshold.hpp"
#include "oracles.hpp"
#include "pipeline_support.hpp"

using namespace mammo;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = true;
  std::string note;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) note = what;
    pass = pass && ok;
  }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

Outcome pyramid_size() {
  Outcome o;
  std::mt19937_64 g(1);
  const GrayImage img = oracle::random_image(g, 1024, 1024);
  const auto t0 = Clock::now();
  const GrayImage small = haar_downsample(img, 3);
  const double s = seconds_since(t0);
  o.require(small.width() == 128 && small.height() == 128, "output is not 128x128");
  o.require(s < 1.0, "runtime " + fmt("%.3f s", s));
  o.note = o.pass ? "128x128 in " + fmt("%.4f s", s) : o.note;
  return o;
}

Outcome flat_fractal_law() {
  Outcome o;
  double worst = 0.0;
  std::mt19937_64 g(2);
  for (int trial = 0; trial < 50; ++trial) {
    const int w = 8 + static_cast<int>(g() % 40), h = 8 + static_cast<int>(g() % 40);
    const GrayImage img(w, h, static_cast<std::uint8_t>(g() % 256));
    const Region r = trial % 2 == 0
                         ? oracle::full_region(w, h)
                         : oracle::make_region(oracle::random_blob(g, w, h, w / 2, h / 2, 8 + static_cast<int>(g() % 40)), w, h);
    worst = std::max(worst, std::abs(blanket_dimension(img, r).dimension - 2.0));
  }
  o.require(worst <= 1e-9, "constant region D off by " + fmt("%.3g", worst));
  for (double d0 : {2.4, 2.75}) {
    for (int r_max : {8, 16}) {
      std::vector<double> rs, as;
      for (int r = 1; r <= r_max; ++r) {
        rs.push_back(r);
        as.push_back(5.0 * std::pow(r, 2.0 - d0));
      }
      const double d = fit_dimension(rs, as).dimension;
      o.require(std::abs(d - d0) <= 1e-9, "synthetic fit for D0=" + fmt("%.2f", d0) + " gave " + fmt("%.12f", d));
    }
  }
  if (o.pass) o.note = "constant max |D-2| = " + fmt("%.1e", worst) + "; D0 2.4 and 2.75 recovered";
  return o;
}

Outcome fractal_oracle_agreement() {
  Outcome o;
  const auto t0 = Clock::now();
  const Region r = oracle::full_region(64, 64);
  struct Named {
    const char* name;
    GrayImage img;
  };
  const Named textures[] = {
      {"flat", GrayImage(64, 64, 120)},
      {"ramp", oracle::ramp_texture(64)},
      {"ramp+noise", oracle::ramp_noise_texture(64, 3)},
      {"noise", oracle::uniform_noise_texture(64, 5)},
      {"midpoint", oracle::midpoint_texture(64, 1)},
  };
  double blanket[5];
  double worst = 0.0;
  for (int i = 0; i < 5; ++i) {
    blanket[i] = blanket_dimension(textures[i].img, r).dimension;
    const double boxes = box_count_dimension(textures[i].img, r);
    worst = std::max(worst, std::abs(blanket[i] - boxes));
    o.require(std::abs(blanket[i] - boxes) <= 0.3, std::string(textures[i].name) + " blanket " +
                                                       fmt("%.3f", blanket[i]) + " vs box " + fmt("%.3f", boxes));
  }
  o.require(blanket[0] < blanket[2] && blanket[2] < blanket[3], "ordering flat < ramp+noise < noise violated");
  const double s = seconds_since(t0);
  o.require(s < 5.0, "runtime " + fmt("%.3f s", s));
  if (o.pass)
    o.note = "max |diff| " + fmt("%.3f", worst) + "; D flat " + fmt("%.3f", blanket[0]) + " < ramp+noise " +
             fmt("%.3f", blanket[2]) + " < noise " + fmt("%.3f", blanket[3]) + "; " + fmt("%.3f s", s);
  return o;
}

Outcome otsu_equivalence() {
  Outcome o;
  std::mt19937_64 g(4);
  int cases = 0;
  const auto check = [&](const Histogram& h) {
    ++cases;
    o.require(otsu_threshold(h) == oracle::otsu_sweep(h), "mismatch on case " + std::to_string(cases));
  };
  for (int i = 0; i < 200; ++i) {
    Histogram h;
    const int mode = static_cast<int>(i % 4);
    for (int v = 0; v < 256; ++v) {
      std::uint64_t c = 0;
      if (mode == 0) c = g() % 1000;
      if (mode == 1) c = g() % 4 == 0 ? g() % 50 : 0;
      if (mode == 2) c = (g() % 2) * (1 + g() % 3);
      if (mode == 3) c = g() % 100000;
      h.counts[v] = c;
      h.total += c;
    }
    if (h.total == 0) {
      h.counts[g() % 256] = 1;
      h.total = 1;
    }
    check(h);
  }
  for (int i = 0; i < 50; ++i) {
    Histogram h;
    const int a = static_cast<int>(g() % 255);
    const int b = a + 1 + static_cast<int>(g() % (255 - a));
    h.counts[a] = 1 + g() % 1000;
    h.counts[b] = 1 + g() % 1000;
    h.total = h.counts[a] + h.counts[b];
    check(h);
    const int t = otsu_threshold(h);
    o.require(t >= a && t < b, "two-delta threshold outside [a, b)");
  }
  for (int v : {0, 17, 128, 255}) {
    Histogram h;
    h.counts[v] = 4096;
    h.total = 4096;
    check(h);
    o.require(otsu_threshold(h) == v, "constant histogram");
  }
  if (o.pass) o.note = std::to_string(cases) + " histograms match the exhaustive sweep";
  return o;
}

Outcome segmentation_invariants() {
  Outcome o;
  std::mt19937_64 g(5);
  for (int trial = 0; trial < 100; ++trial) {
    auto [img, mask] = oracle::random_scene(g, 8 + static_cast<int>(g() % 40), 8 + static_cast<int>(g() % 40));
    const SegmentParams params{static_cast<int>(g() % 30), static_cast<int>(g() % 30), 1};
    const RegionMap map = segment(img, mask, params);
    o.require(oracle::labels_partition_foreground(map, mask), "partition broken in scene " + std::to_string(trial));
    o.require(oracle::merge_is_maximal(map, img, params.tau_merge), "merge not maximal in scene " + std::to_string(trial));
  }
  GrayImage half(8, 8);
  for (int y = 0; y < 8; ++y)
    for (int x = 4; x < 8; ++x) half.at(x, y) = 255;
  const BinaryMask all{8, 8, std::vector<std::uint8_t>(64, 1), 0};
  const int n = segment(half, all, SegmentParams{}).region_count;
  o.require(n == 2, "half/half gave " + std::to_string(n) + " regions");
  if (o.pass) o.note = "100 scenes partitioned and maximal; half/half -> 2 regions";
  return o;
}

Outcome feature_values() {
  Outcome o;
  std::vector<Point> sq;
  for (int y = 1; y <= 3; ++y)
    for (int x = 1; x <= 3; ++x) sq.push_back({x, y});
  const double edv = edge_distance_variance(oracle::make_region(sq, 5, 5));
  double brute_mean = 0.0, brute_var = 0.0;
  for (const Point& p : sq) {
    if (p.x == 2 && p.y == 2) continue;
    brute_mean += std::hypot(p.x - 2.0, p.y - 2.0) / 8.0;
  }
  for (const Point& p : sq) {
    if (p.x == 2 && p.y == 2) continue;
    brute_var += std::pow(std::hypot(p.x - 2.0, p.y - 2.0) - brute_mean, 2) / 8.0;
  }
  o.require(std::abs(edv - brute_var / brute_mean) <= 1e-6 && std::abs(edv - 0.0355) < 5e-5,
            "Edv " + fmt("%.6f", edv));

  const GrayImage pair(2, 1, std::vector<std::uint8_t>{0, 2});
  const double sd = gray_std(oracle::full_region(2, 1), pair);
  o.require(std::abs(sd - 1.0) <= 1e-6, "gray_std " + fmt("%.6f", sd));

  GrayImage contrast(6, 6, 100);
  const std::vector<Point> ell{{1, 1}, {1, 2}, {1, 3}, {2, 3}, {3, 3}};
  for (const Point& p : ell) contrast.at(p.x, p.y) = 200;
  const double diff = intensity_diff(oracle::make_region(ell, 6, 6), contrast);
  o.require(std::abs(diff - 100.0) <= 1e-6, "Diff " + fmt("%.6f", diff));

  GrayImage ramp(10, 10);
  for (int y = 0; y < 10; ++y)
    for (int x = 0; x < 10; ++x) ramp.at(x, y) = static_cast<std::uint8_t>(x);
  std::vector<Point> inner;
  for (int y = 3; y < 7; ++y)
    for (int x = 3; x < 7; ++x) inner.push_back({x, y});
  const double mwg = mean_region_gradient(oracle::make_region(inner, 10, 10), gradient_map(ramp));
  o.require(std::abs(mwg - 1.0) <= 1e-6, "ramp Mwg " + fmt("%.6f", mwg));

  std::mt19937_64 g(6);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const GrayImage img = oracle::random_image(g, 24, 24);
    const auto px = oracle::random_blob(g, 24, 24, 12, 12, 2 + static_cast<int>(g() % 120));
    const Region r = oracle::make_region(px, 24, 24);
    const oracle::NaiveFeatures n = oracle::features(px, img);
    const FeatureVector f = compute_features(r, img, gradient_map(img));
    for (double d : {f.area - n.area, f.compactness - n.compactness, f.mean_gradient - n.mwg,
                     f.boundary_gradient - n.mg, f.gray_std - n.var, f.edge_distance_variance - n.edv,
                     f.intensity_diff - n.diff})
      worst = std::max(worst, std::abs(d));
  }
  o.require(worst <= 1e-9, "naive oracle max |diff| " + fmt("%.3g", worst));
  if (o.pass)
    o.note = "Edv " + fmt("%.6f", edv) + ", gray_std 1, Diff 100, Mwg 1; oracle max |diff| " + fmt("%.1e", worst);
  return o;
}

Outcome end_to_end_phantoms() {
  Outcome o;
  const auto t0 = Clock::now();
  const PipelineConfig cfg;
  const int scale = 1 << cfg.dwt_levels;
  double min_cover = 1.0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Phantom tumor = generate_phantom(PhantomKind::Tumor, seed, 1024);
    const PipelineResult rt = run_pipeline(tumor.image, cfg);
    o.require(rt.report.tumor_count() == 1, "tumor seed " + std::to_string(seed) + ": " +
                                                std::to_string(rt.report.tumor_count()) + " tumor detections");
    if (rt.report.tumor_count() == 1) {
      const double c = support::coverage(rt, support::single_tumor_id(rt.report), tumor.truth, scale);
      min_cover = std::min(min_cover, c);
      o.require(c >= 0.8, "tumor seed " + std::to_string(seed) + " coverage " + fmt("%.3f", c));
    }

    const Phantom blank = generate_phantom(PhantomKind::Blank, seed, 1024);
    const PipelineResult rb = run_pipeline(blank.image, cfg);
    o.require(rb.report.detections.empty(), "blank seed " + std::to_string(seed) + " has detections");

    const Phantom multi = generate_phantom(PhantomKind::Multi, seed, 1024);
    const PipelineResult rm = run_pipeline(multi.image, cfg);
    bool kept_textured = false, kept_smooth = false;
    for (const Detection& d : rm.report.detections) {
      for (std::size_t b = 0; b < multi.blobs.size(); ++b) {
        if (support::coverage(rm, d.region_id, multi.blob_masks[b], scale) < 0.5) continue;
        (multi.blobs[b].textured ? kept_textured : kept_smooth) = true;
      }
    }
    o.require(kept_textured && !kept_smooth, "multi seed " + std::to_string(seed) + " gate outcome wrong");
    o.require(rm.report.tumor_count() == 1, "multi seed " + std::to_string(seed) + " tumor count");
  }
  const double s = seconds_since(t0);
  o.require(s < 30.0, "runtime " + fmt("%.2f s", s));
  if (o.pass) o.note = "5 seeds x 3 kinds; min tumor coverage " + fmt("%.3f", min_cover) + "; " + fmt("%.2f s", s);
  return o;
}

Outcome batch_determinism() {
  Outcome o;
  const fs::path root = fs::temp_directory_path() / "mammo_acceptance_determinism";
  fs::remove_all(root);
  fs::create_directories(root / "in");
  std::vector<fs::path> inputs;
  const PhantomKind kinds[] = {PhantomKind::Tumor, PhantomKind::Blank, PhantomKind::Multi};
  for (int i = 0; i < 6; ++i) {
    const fs::path p = root / "in" / ("case" + std::to_string(i) + ".pgm");
    write_pgm(generate_phantom(kinds[i % 3], 10 + i, 512).image, p);
    inputs.push_back(p);
  }
  PipelineConfig cfg;
  cfg.output_dir = root / "a";
  run_batch(inputs, cfg, 4);
  cfg.output_dir = root / "b";
  run_batch(inputs, cfg, 4);
  int files = 0;
  for (const auto& entry : fs::directory_iterator(root / "a")) {
    const fs::path twin = root / "b" / entry.path().filename();
    ++files;
    if (!fs::exists(twin)) {
      o.require(false, "missing " + twin.filename().string());
      continue;
    }
    const bool same = entry.path().extension() == ".json"
                          ? support::report_without_timings(entry.path()) == support::report_without_timings(twin)
                          : support::slurp(entry.path()) == support::slurp(twin);
    o.require(same, entry.path().filename().string() + " differs");
  }
  o.require(files == 36, std::to_string(files) + " artifacts instead of 36");
  if (o.pass) o.note = std::to_string(files) + " artifacts byte-identical across two batch runs";
  return o;
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"1 pyramid size law", pyramid_size},
      {"2 flat-surface fractal law", flat_fractal_law},
      {"3 fractal oracle agreement", fractal_oracle_agreement},
      {"4 otsu exhaustive equivalence", otsu_equivalence},
      {"5 segmentation invariants", segmentation_invariants},
      {"6 feature hand values", feature_values},
      {"7 end-to-end phantoms", end_to_end_phantoms},
      {"8 batch determinism", batch_determinism},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.note = std::string("exception: ") + e.what();
    }
    std::printf("[%s] %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.note.c_str());
    failed += o.pass ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(std::size(criteria)) - failed, std::size(criteria));
  return failed == 0 ? 0 : 1;
}
