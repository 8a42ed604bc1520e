#pragma once

#include <span>
#include <vector>

#include "mammo/image.hpp"
#include "mammo/segment.hpp"

namespace mammo {

inline constexpr int kDefaultBlanketRadius = 8;
inline constexpr std::size_t kMinFractalPixels = 8;

struct BlanketAreas {
  std::vector<double> scales;  // r = 1..r_max
  std::vector<double> areas;   // A(r) = V(r) / (2r)
};

/// Least-squares fit of log A(r) = (2 - D) log r + k'.
struct BlanketFit {
  std::vector<double> scales;
  std::vector<double> areas;
  double dimension = 2.0;
  double intercept = 0.0;  // k'
  double residual = 0.0;   // sum of squared log-domain residuals
};

struct RegionFit {
  int region_id = 0;
  BlanketFit fit;
};

/**
 * Blanket surface areas over a region's gray-level surface.
 *
 * Upper and lower blankets start at the pixel values and grow one gray level
 * per step, each also taking the extreme of the previous blanket over the
 * pixel's 4-neighbours that belong to the region:
 *
 *   u_r(p) = max(u_{r-1}(p) + 1, max_q u_{r-1}(q))
 *   b_r(p) = min(b_{r-1}(p) - 1, min_q b_{r-1}(q))
 *
 * The blanket volume V(r) = sum_p (u_r(p) - b_r(p)) gives A(r) = V(r) / (2r).
 * Throws RegionTooSmall for fewer than 2 pixels, InvalidArgument for r_max < 2.
 */
BlanketAreas blanket_areas(const GrayImage& img, const Region& region,
                           int r_max = kDefaultBlanketRadius);

/// D = 2 - slope of log A on log r. Throws DegenerateFit for unusable input.
BlanketFit fit_dimension(std::span<const double> scales, std::span<const double> areas);

/// blanket_areas + fit_dimension.
BlanketFit blanket_dimension(const GrayImage& img, const Region& region,
                             int r_max = kDefaultBlanketRadius);

/**
 * Differential box-counting dimension over the region's bounding box, used as
 * an independent cross-check of the blanket estimate. Grid sides s = 2, 4, ...
 * up to M/2 (M = shorter bbox side), box height h = s * 256 / M, and each full
 * s x s cell contributes floor(max/h) - floor(min/h) + 1 boxes. D is the slope
 * of log N(s) against log(1/s). The bbox must be at least 8 x 8.
 */
double box_count_dimension(const GrayImage& img, const Region& region);

/// Ids of fits with d_min <= D <= d_max, in input order.
std::vector<int> roughness_gate(std::span<const RegionFit> fits, double d_min, double d_max);

}  // namespace mammo
