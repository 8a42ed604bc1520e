#include "mammo/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <thread>

#include "json.hpp"

#include "mammo/error.hpp"
#include "mammo/features.hpp"

namespace mammo {

namespace {

class StageClock {
 public:
  explicit StageClock(DetectionReport& report) : report_(report) {}

  template <typename F>
  auto run(const char* stage, F&& body) {
    const auto start = std::chrono::steady_clock::now();
    try {
      if constexpr (std::is_void_v<decltype(body())>) {
        body();
        record(stage, start);
      } else {
        auto out = body();
        record(stage, start);
        return out;
      }
    } catch (const Error& e) {
      throw Error(e.code(), std::string("stage '") + stage + "': " + e.detail());
    }
  }

 private:
  void record(const char* stage, std::chrono::steady_clock::time_point start) {
    const std::chrono::duration<double, std::milli> ms = std::chrono::steady_clock::now() - start;
    report_.timings.emplace_back(stage, ms.count());
  }

  DetectionReport& report_;
};

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw Error(ErrorCode::IoFailure, "write failed for " + path.string());
}

}  // namespace

std::size_t DetectionReport::tumor_count() const {
  return static_cast<std::size_t>(std::count_if(detections.begin(), detections.end(),
                                                [](const Detection& d) { return d.label == Label::Tumor; }));
}

PipelineResult run_pipeline(const GrayImage& img, const PipelineConfig& cfg, const std::string& source) {
  cfg.validate();
  DetectionReport report;
  report.source = source;
  StageClock clock(report);

  GrayImage working = img;
  GrayImage inverted = img;
  if (cfg.dwt_first) {
    working = clock.run("dwt", [&] { return haar_downsample(img, cfg.dwt_levels); });
    inverted = clock.run("negate", [&] { return negate(working); });
  } else {
    const GrayImage full_inverted = clock.run("negate", [&] { return negate(img); });
    inverted = clock.run("dwt", [&] { return haar_downsample(full_inverted, cfg.dwt_levels); });
    working = negate(inverted);
  }
  report.image_width = inverted.width();
  report.image_height = inverted.height();

  BinaryMask mask = clock.run("threshold", [&] {
    const int t = cfg.manual_threshold ? *cfg.manual_threshold : otsu_threshold(histogram(inverted));
    return apply_threshold(inverted, t);
  });
  report.threshold_used = mask.threshold;

  RegionMap map = clock.run("segment", [&] { return segment(inverted, mask, cfg.segment); });
  std::vector<Region> regions = clock.run("regions", [&] { return extract_regions(map, inverted); });
  report.region_count_pre_gate = map.region_count;

  std::vector<RegionFit> fits = clock.run("fractal", [&] {
    std::vector<RegionFit> out;
    for (const Region& r : regions) {
      if (r.pixels.size() < kMinFractalPixels) continue;
      out.push_back({r.id, blanket_dimension(inverted, r, cfg.r_max)});
    }
    return out;
  });
  const std::vector<int> kept = clock.run("gate", [&] { return roughness_gate(fits, cfg.d_min, cfg.d_max); });

  const RuleSet rules = cfg.effective_rules(inverted.width(), inverted.height());
  clock.run("classify", [&] {
    if (kept.empty()) return;
    const RealImage grad = gradient_map(inverted);
    std::size_t f = 0;
    for (int id : kept) {
      while (fits[f].region_id != id) ++f;
      const Region& region = regions[static_cast<std::size_t>(id - 1)];
      const FeatureVector features = compute_features(region, inverted, grad);
      report.detections.push_back(classify(id, features, fits[f].fit.dimension, rules));
      report.fits.push_back(fits[f].fit);
    }
  });
  report.region_count_post_gate = static_cast<int>(report.detections.size());

  return PipelineResult{std::move(working), std::move(inverted), std::move(mask), std::move(map),
                        std::move(regions), std::move(report)};
}

std::string report_to_json(const DetectionReport& report, bool include_timings) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["source"] = report.source;
  j["image_size"] = {{"width", report.image_width}, {"height", report.image_height}};
  j["threshold_used"] = report.threshold_used;
  j["region_count_pre_gate"] = report.region_count_pre_gate;
  j["region_count_post_gate"] = report.region_count_post_gate;
  ordered_json dets = ordered_json::array();
  for (std::size_t i = 0; i < report.detections.size(); ++i) {
    const Detection& d = report.detections[i];
    const FeatureVector& f = d.features;
    ordered_json item;
    item["region_id"] = d.region_id;
    item["features"] = {
        {"area", f.area},
        {"compactness", f.compactness},
        {"mean_gradient", f.mean_gradient},
        {"boundary_gradient", f.boundary_gradient},
        {"gray_std", f.gray_std},
        {"edge_distance_variance", f.edge_distance_variance},
        {"intensity_diff", f.intensity_diff},
    };
    item["dimension"] = d.dimension;
    item["label"] = std::string(to_string(d.label));
    item["failed_rules"] = d.failed_rules;
    if (i < report.fits.size()) {
      const BlanketFit& fit = report.fits[i];
      item["fit"] = {
          {"scales", fit.scales},       {"areas", fit.areas},
          {"dimension", fit.dimension}, {"intercept", fit.intercept},
          {"residual", fit.residual},
      };
    }
    dets.push_back(std::move(item));
  }
  j["detections"] = std::move(dets);
  if (include_timings) {
    ordered_json t = ordered_json::object();
    for (const auto& [stage, ms] : report.timings) t[stage] = ms;
    j["timings"] = std::move(t);
  }
  return j.dump(2) + "\n";
}

std::string features_to_csv(const DetectionReport& report) {
  std::string out = "id,area,cmp,mwg,mg,var,edv,diff,D,label\n";
  char line[512];
  for (const Detection& d : report.detections) {
    const FeatureVector& f = d.features;
    std::snprintf(line, sizeof line, "%d,%zu,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%s\n", d.region_id,
                  f.area, f.compactness, f.mean_gradient, f.boundary_gradient, f.gray_std,
                  f.edge_distance_variance, f.intensity_diff, d.dimension,
                  std::string(to_string(d.label)).c_str());
    out += line;
  }
  return out;
}

void write_artifacts(const PipelineResult& result, const PipelineConfig& cfg, const std::string& stem) {
  if (cfg.output_dir.empty()) return;
  std::error_code ec;
  std::filesystem::create_directories(cfg.output_dir, ec);
  if (ec) throw Error(ErrorCode::IoFailure, "cannot create " + cfg.output_dir.string());
  const auto file = [&](const char* suffix) { return cfg.output_dir / (stem + suffix); };

  if (cfg.emit.inverted) write_pgm(result.inverted, file(".inverted.pgm"));
  if (cfg.emit.mask) write_pgm(result.mask.to_image(), file(".mask.pgm"));
  if (cfg.emit.labels) {
    write_label_pgm(result.regions.labels, result.regions.width, result.regions.height,
                    result.regions.region_count, file(".labels.pgm"));
  }
  if (cfg.emit.overlay) write_pgm(boundary_overlay(result.working, result.region_list), file(".overlay.pgm"));
  if (cfg.emit.features) write_text(file(".features.csv"), features_to_csv(result.report));
  if (cfg.emit.report) write_text(file(".report.json"), report_to_json(result.report));
}

std::vector<BatchItem> run_batch(const std::vector<std::filesystem::path>& paths,
                                 const PipelineConfig& cfg, unsigned workers) {
  std::vector<BatchItem> items(paths.size());
  if (paths.empty()) return items;
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(paths.size()));

  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < paths.size(); i = next++) {
      BatchItem& item = items[i];
      item.source = paths[i].string();
      try {
        const GrayImage img = read_pgm(paths[i]);
        PipelineResult result = run_pipeline(img, cfg, item.source);
        write_artifacts(result, cfg, paths[i].stem().string());
        item.report = std::move(result.report);
      } catch (const std::exception& e) {
        item.error = e.what();
      }
    }
  };
  std::vector<std::jthread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  return items;
}

}  // namespace mammo
