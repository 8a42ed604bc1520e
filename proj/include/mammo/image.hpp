#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace mammo {

inline constexpr int kGrayLevels = 256;
inline constexpr std::uint8_t kMaxGray = 255;

/**
 * 8-bit grayscale raster stored row-major.
 *
 * The pixel at column x, row y lives at index y * width + x. Width and height
 * are always at least 1; the constructor rejects empty shapes.
 */
class GrayImage {
 public:
  GrayImage(int width, int height, std::uint8_t fill = 0);
  GrayImage(int width, int height, std::vector<std::uint8_t> pixels);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return pixels_.size(); }

  std::uint8_t at(int x, int y) const { return pixels_[index(x, y)]; }
  std::uint8_t& at(int x, int y) { return pixels_[index(x, y)]; }

  bool contains(int x, int y) const noexcept {
    return x >= 0 && y >= 0 && x < width_ && y < height_;
  }

  std::span<const std::uint8_t> pixels() const noexcept { return pixels_; }
  std::span<std::uint8_t> pixels() noexcept { return pixels_; }

  bool operator==(const GrayImage&) const = default;

 private:
  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_;
  int height_;
  std::vector<std::uint8_t> pixels_;
};

/// Real-valued raster with the same layout as GrayImage (gradient fields).
class RealImage {
 public:
  RealImage(int width, int height, double fill = 0.0)
      : width_(width), height_(height),
        values_(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill) {}

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  double at(int x, int y) const { return values_[static_cast<std::size_t>(y) * width_ + x]; }
  double& at(int x, int y) { return values_[static_cast<std::size_t>(y) * width_ + x]; }
  std::span<const double> values() const noexcept { return values_; }

 private:
  int width_;
  int height_;
  std::vector<double> values_;
};

enum class PgmMode { Ascii, Binary };

/// Reads a P2 or P5 graymap with maxval <= 255. Comment lines are skipped.
GrayImage read_pgm(const std::filesystem::path& path);

/// Writes P2 or P5. Binary output is exactly "P5\n<w> <h>\n255\n" + raw bytes.
void write_pgm(const GrayImage& img, const std::filesystem::path& path,
               PgmMode mode = PgmMode::Binary);

/// Writes a label raster as P5 with maxval = max(1, max_label). Samples are
/// one byte when maxval < 256 and two bytes big-endian otherwise.
void write_label_pgm(std::span<const int> labels, int width, int height, int max_label,
                     const std::filesystem::path& path);

/// Reads a P5 label raster written by write_label_pgm.
std::vector<int> read_label_pgm(const std::filesystem::path& path, int& width, int& height,
                                int& maxval);

/// O(x,y) = 255 - I(x,y).
GrayImage negate(const GrayImage& img);

/**
 * Haar LL-band pyramid. Each level replaces every disjoint 2x2 block with the
 * block mean rounded half up, so the result has size (w >> levels, h >> levels).
 * Throws NotDivisible if either side is not a multiple of 2^levels.
 */
GrayImage haar_downsample(const GrayImage& img, int levels);

}  // namespace mammo
