#pragma once

#include <cstddef>
#include <span>

#include "mammo/image.hpp"
#include "mammo/segment.hpp"

namespace mammo {

/// The seven per-region descriptors used for classification.
struct FeatureVector {
  std::size_t area = 0;
  double compactness = 0.0;
  double mean_gradient = 0.0;           // Mwg
  double boundary_gradient = 0.0;       // Mg
  double gray_std = 0.0;                // Var (a standard deviation)
  double edge_distance_variance = 0.0;  // Edv
  double intensity_diff = 0.0;          // Diff
};

/// Sobel magnitude with kernels scaled by 1/8 and replicated borders. Needs 3x3 or larger.
RealImage gradient_map(const GrayImage& img);

std::size_t area(const Region& region);

/// |pixels| / bbox area.
double compactness(const Region& region);

double mean_region_gradient(const Region& region, const RealImage& grad);
double mean_boundary_gradient(const Region& region, const RealImage& grad);

/// Population standard deviation of the region's gray values.
double gray_std(const Region& region, const GrayImage& img);

/**
 * Variance of boundary-to-centroid distances divided by their mean.
 * Throws DegenerateRegion when the mean distance is zero.
 */
double edge_distance_variance(const Region& region);
double edge_distance_variance(std::span<const Point> boundary, double cx, double cy);

/// Mean inside the region minus mean over bbox \ region; just the inside mean if the region fills its bbox.
double intensity_diff(const Region& region, const GrayImage& img);

FeatureVector compute_features(const Region& region, const GrayImage& img, const RealImage& grad);

}  // namespace mammo
