#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mammo/classify.hpp"
#include "mammo/fractal.hpp"
#include "mammo/image.hpp"
#include "mammo/segment.hpp"
#include "mammo/threshold.hpp"

namespace mammo {

struct EmitFlags {
  bool inverted = true;
  bool mask = true;
  bool labels = true;
  bool overlay = true;
  bool features = true;
  bool report = true;
};

struct PipelineConfig {
  int dwt_levels = 3;
  bool dwt_first = true;
  std::optional<int> manual_threshold;  // nullopt: Otsu on the inverted image
  SegmentParams segment;
  int r_max = kDefaultBlanketRadius;
  double d_min = 2.4;
  double d_max = 2.75;
  RuleSet rules;
  bool auto_max_area = true;  // max_area = a quarter of the working image
  std::filesystem::path output_dir;
  EmitFlags emit;

  /// Throws ConfigError naming the offending field.
  void validate() const;

  /// rules with the D band copied in and max_area resolved for the working size.
  RuleSet effective_rules(int working_width, int working_height) const;
};

/// Applies one key=value setting. Throws ConfigError on unknown keys or bad values.
void apply_setting(PipelineConfig& cfg, const std::string& key, const std::string& value);

/// Flat key=value file; '#' starts a comment, blank lines ignored.
void load_config_file(PipelineConfig& cfg, const std::filesystem::path& path);

/// Comma list drawn from inverted,mask,labels,overlay,features,report.
EmitFlags parse_emit_list(const std::string& list);

struct DetectionReport {
  std::string source;
  int image_width = 0;  // working size after the optional pyramid
  int image_height = 0;
  int threshold_used = 0;
  int region_count_pre_gate = 0;
  int region_count_post_gate = 0;
  std::vector<Detection> detections;  // ascending region_id
  std::vector<BlanketFit> fits;       // fits[i] belongs to detections[i]
  std::vector<std::pair<std::string, double>> timings;  // stage -> milliseconds

  std::size_t tumor_count() const;
};

/// Every intermediate of one run, in working coordinates.
struct PipelineResult {
  GrayImage working;
  GrayImage inverted;
  BinaryMask mask;
  RegionMap regions;
  std::vector<Region> region_list;
  DetectionReport report;
};

/**
 * Runs pyramid -> negate -> threshold -> split/merge -> fractal gate ->
 * features -> classify. With dwt_first = false the negation is applied to the
 * full-resolution input before the pyramid. Module errors are rethrown with
 * the failing stage named in the message.
 */
PipelineResult run_pipeline(const GrayImage& img, const PipelineConfig& cfg,
                            const std::string& source = "");

/// Writes the artifacts selected in cfg.emit into cfg.output_dir using stem as the file prefix.
void write_artifacts(const PipelineResult& result, const PipelineConfig& cfg,
                     const std::string& stem);

std::string report_to_json(const DetectionReport& report, bool include_timings = true);
std::string features_to_csv(const DetectionReport& report);

struct BatchItem {
  std::string source;
  std::optional<DetectionReport> report;
  std::string error;  // empty on success
};

/**
 * One item per path, in input order. A failure on one file is recorded in its
 * item and the rest of the batch continues. Files may be processed on up to
 * `workers` threads; 0 picks the hardware concurrency.
 */
std::vector<BatchItem> run_batch(const std::vector<std::filesystem::path>& paths,
                                 const PipelineConfig& cfg, unsigned workers = 0);

enum class PhantomKind { Blank, Tumor, Multi };

PhantomKind parse_phantom_kind(const std::string& name);

struct PhantomBlob {
  double center_x = 0.0;
  double center_y = 0.0;
  double radius = 0.0;
  bool textured = false;
};

struct Phantom {
  GrayImage image;   // raw film; its negative shows bright blobs on a dark background
  BinaryMask truth;  // union of all blob footprints
  std::vector<PhantomBlob> blobs;
  std::vector<BinaryMask> blob_masks;  // blob_masks[i] is the footprint of blobs[i]
};

/**
 * Synthetic mammogram surrogate, deterministic per seed.
 *
 * In the inverted domain: blank is a smooth low-intensity background with mild
 * per-pixel noise; tumor adds one bright flat-topped blob whose plateau carries
 * a noise texture with grain size / 128 px; multi adds one smooth and one
 * textured blob side by side. The returned image is the complement of that
 * scene so that the pipeline's negation recovers it. size >= 64.
 */
Phantom generate_phantom(PhantomKind kind, std::uint64_t seed, int size);

}  // namespace mammo
