#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "mammo/error.hpp"
#include "mammo/pipeline.hpp"

namespace mammo {

namespace {

// Portable uniform draws: mt19937_64 output is fully specified, the std
// distributions are not.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::mt19937_64 engine_;
};

constexpr double kBackgroundLevel = 35.0;
constexpr double kBackgroundSwing = 15.0;
constexpr double kBackgroundNoise = 3.0;
constexpr double kBlobAmplitude = 120.0;
constexpr double kBlobRadius = 0.1;  // fraction of the phantom side
constexpr double kTextureAmplitude = 8.0;
constexpr int kTextureCells = 128;  // texture grain = size / 128

// Flat-topped super-Gaussian exp(-(d/R)^64); the rim is about R/20 wide.
double plateau(double dx, double dy, double radius) {
  const double q = (dx * dx + dy * dy) / (radius * radius);
  return std::exp(-std::pow(q, 32.0));
}

}  // namespace

PhantomKind parse_phantom_kind(const std::string& name) {
  if (name == "blank") return PhantomKind::Blank;
  if (name == "tumor") return PhantomKind::Tumor;
  if (name == "multi") return PhantomKind::Multi;
  throw Error(ErrorCode::ConfigError, "unknown phantom kind '" + name + "'");
}

Phantom generate_phantom(PhantomKind kind, std::uint64_t seed, int size) {
  if (size < 64) throw Error(ErrorCode::InvalidArgument, "phantom size must be >= 64");
  Rng rng(seed);
  const double s = static_cast<double>(size);
  const double radius = kBlobRadius * s;

  std::vector<PhantomBlob> blobs;
  if (kind == PhantomKind::Tumor) {
    blobs.push_back({s * rng.uniform(0.35, 0.65), s * rng.uniform(0.35, 0.65), radius, true});
  } else if (kind == PhantomKind::Multi) {
    blobs.push_back({s * rng.uniform(0.25, 0.32), s * rng.uniform(0.4, 0.6), radius, false});
    blobs.push_back({s * rng.uniform(0.68, 0.75), s * rng.uniform(0.4, 0.6), radius, true});
  }

  const int grain = std::max(1, size / kTextureCells);
  const int cells = (size + grain - 1) / grain;
  std::vector<double> texture(static_cast<std::size_t>(cells) * cells);
  for (double& t : texture) t = rng.uniform(-kTextureAmplitude, kTextureAmplitude);

  Phantom out{GrayImage(size, size), BinaryMask{}, blobs, {}};
  out.truth = BinaryMask{size, size, std::vector<std::uint8_t>(static_cast<std::size_t>(size) * size, 0), 0};
  out.blob_masks.assign(blobs.size(), out.truth);

  for (int y = 0; y < size; ++y) {
    for (int x = 0; x < size; ++x) {
      const double phase_x = std::sin(std::numbers::pi * (x + 0.5) / s);
      const double phase_y = std::sin(std::numbers::pi * (y + 0.5) / s);
      double scene = kBackgroundLevel + kBackgroundSwing * phase_x * phase_y +
                     rng.uniform(-kBackgroundNoise, kBackgroundNoise);
      const std::size_t i = static_cast<std::size_t>(y) * size + x;
      for (std::size_t b = 0; b < blobs.size(); ++b) {
        const PhantomBlob& blob = blobs[b];
        const double p = plateau(x + 0.5 - blob.center_x, y + 0.5 - blob.center_y, blob.radius);
        double lift = kBlobAmplitude;
        if (blob.textured) {
          lift += texture[static_cast<std::size_t>(y / grain) * cells + x / grain];
        }
        scene += p * lift;
        if (p >= 0.5) {
          out.truth.bits[i] = 1;
          out.blob_masks[b].bits[i] = 1;
        }
      }
      const double v = std::clamp(std::round(scene), 0.0, 255.0);
      out.image.pixels()[i] = static_cast<std::uint8_t>(kMaxGray - static_cast<int>(v));
    }
  }
  return out;
}

}  // namespace mammo
