// mammo: batch tumour-candidate detection on PGM mammograms.
//
//   mammo detect <inputs...> [--config FILE] [--dwt-levels N] [--threshold auto|T] ...
//   mammo phantom --kind blank|tumor|multi --seed S --size N --out DIR
//
// Exit status: 0 success, 1 when any input failed, 2 on configuration errors.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mammo/error.hpp"
#include "mammo/pipeline.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFileError = 1;
constexpr int kExitConfigError = 2;

struct DetectArgs {
  std::vector<std::string> inputs;
  std::string config;
  std::optional<int> dwt_levels;
  std::optional<bool> dwt_first;
  std::optional<std::string> threshold;
  std::optional<int> tau_split;
  std::optional<int> tau_merge;
  std::optional<int> min_block;
  std::optional<int> r_max;
  std::optional<double> d_min;
  std::optional<double> d_max;
  std::optional<std::string> out;
  std::optional<std::string> emit;
  unsigned jobs = 0;
};

struct PhantomArgs {
  std::string kind = "tumor";
  std::uint64_t seed = 1;
  int size = 1024;
  std::string out = ".";
};

int run_detect(const DetectArgs& args) {
  mammo::PipelineConfig cfg;
  try {
    if (!args.config.empty()) mammo::load_config_file(cfg, args.config);
    const auto set = [&](const char* key, const auto& opt) {
      if (opt) mammo::apply_setting(cfg, key, std::string(*opt));
    };
    if (args.dwt_levels) mammo::apply_setting(cfg, "dwt_levels", std::to_string(*args.dwt_levels));
    if (args.dwt_first) cfg.dwt_first = *args.dwt_first;
    set("threshold", args.threshold);
    if (args.tau_split) cfg.segment.tau_split = *args.tau_split;
    if (args.tau_merge) cfg.segment.tau_merge = *args.tau_merge;
    if (args.min_block) cfg.segment.min_block = *args.min_block;
    if (args.r_max) cfg.r_max = *args.r_max;
    if (args.d_min) cfg.d_min = *args.d_min;
    if (args.d_max) cfg.d_max = *args.d_max;
    set("output_dir", args.out);
    set("emit", args.emit);
    cfg.validate();
  } catch (const mammo::Error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfigError;
  }

  std::vector<std::filesystem::path> paths(args.inputs.begin(), args.inputs.end());
  const auto items = mammo::run_batch(paths, cfg, args.jobs);
  int status = kExitOk;
  for (const auto& item : items) {
    if (!item.error.empty()) {
      std::cerr << item.source << ": " << item.error << '\n';
      status = kExitFileError;
      continue;
    }
    const auto& r = *item.report;
    std::cout << item.source << ": " << r.image_width << "x" << r.image_height
              << " t=" << r.threshold_used << " regions=" << r.region_count_pre_gate
              << " gated=" << r.region_count_post_gate << " tumor=" << r.tumor_count() << '\n';
  }
  return status;
}

int run_phantom(const PhantomArgs& args) {
  try {
    const auto kind = mammo::parse_phantom_kind(args.kind);
    const auto ph = mammo::generate_phantom(kind, args.seed, args.size);
    std::filesystem::create_directories(args.out);
    const std::string stem = args.kind + "_" + std::to_string(args.seed);
    const auto dir = std::filesystem::path(args.out);
    mammo::write_pgm(ph.image, dir / (stem + ".pgm"));
    mammo::write_pgm(ph.truth.to_image(), dir / (stem + ".truth.pgm"));
    std::cout << (dir / (stem + ".pgm")).string() << '\n';
  } catch (const mammo::Error& e) {
    std::cerr << e.what() << '\n';
    return e.code() == mammo::ErrorCode::IoFailure ? kExitFileError : kExitConfigError;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << e.what() << '\n';
    return kExitFileError;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mammogram tumour-candidate detection"};
  app.require_subcommand(1);

  DetectArgs detect;
  auto* det = app.add_subcommand("detect", "Run the detection pipeline on PGM images");
  det->add_option("inputs", detect.inputs, "Input PGM files")->required();
  det->add_option("--config", detect.config, "key=value configuration file");
  det->add_option("--dwt-levels", detect.dwt_levels, "Haar pyramid levels (0 disables)");
  det->add_option("--dwt-first", detect.dwt_first, "Downsample before negating (default true)");
  det->add_option("--threshold", detect.threshold, "auto or a gray level 0..255");
  det->add_option("--tau-split", detect.tau_split, "Split homogeneity limit (max-min)");
  det->add_option("--tau-merge", detect.tau_merge, "Merge limit on mean difference");
  det->add_option("--min-block", detect.min_block, "Smallest block side to split");
  det->add_option("--r-max", detect.r_max, "Largest blanket radius");
  det->add_option("--d-min", detect.d_min, "Lower bound of the fractal gate");
  det->add_option("--d-max", detect.d_max, "Upper bound of the fractal gate");
  det->add_option("--out", detect.out, "Output directory for artifacts");
  det->add_option("--emit", detect.emit, "Artifacts: inverted,mask,labels,overlay,features,report");
  det->add_option("--jobs", detect.jobs, "Worker threads (0 = hardware concurrency)");

  PhantomArgs phantom;
  auto* ph = app.add_subcommand("phantom", "Generate a synthetic phantom and its ground truth");
  ph->add_option("--kind", phantom.kind, "blank, tumor or multi");
  ph->add_option("--seed", phantom.seed, "Random seed");
  ph->add_option("--size", phantom.size, "Side length in pixels (>= 64)");
  ph->add_option("--out", phantom.out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfigError;
  }
  if (*det) return run_detect(detect);
  return run_phantom(phantom);
}
