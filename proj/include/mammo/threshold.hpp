#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "mammo/image.hpp"

namespace mammo {

struct Histogram {
  std::array<std::uint64_t, kGrayLevels> counts{};
  std::uint64_t total = 0;
};

/// Foreground flags, set where the source pixel is strictly greater than threshold.
struct BinaryMask {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> bits;  // 0 or 1, row-major
  int threshold = 0;

  bool at(int x, int y) const { return bits[static_cast<std::size_t>(y) * width + x] != 0; }
  std::size_t foreground_count() const;

  /// Foreground 255, background 0.
  GrayImage to_image() const;
};

Histogram histogram(const GrayImage& img);

/**
 * Otsu's threshold: the smallest t in [0, 254] maximising the between-class
 * variance w0 * w1 * (mu0 - mu1)^2 with class 0 = {v <= t}. A histogram with a
 * single occupied bin returns that bin. Comparisons are carried out in exact
 * integer arithmetic, so ties are resolved deterministically toward low t.
 */
int otsu_threshold(const Histogram& hist);

BinaryMask apply_threshold(const GrayImage& img, int t);

}  // namespace mammo
