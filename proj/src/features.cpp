#include "mammo/features.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "mammo/error.hpp"

namespace mammo {

RealImage gradient_map(const GrayImage& img) {
  if (img.width() < 3 || img.height() < 3) {
    throw Error(ErrorCode::ImageTooSmall, "gradient needs at least a 3x3 image");
  }
  const int w = img.width();
  const int h = img.height();
  const auto px = [&](int x, int y) {
    return static_cast<double>(img.at(std::clamp(x, 0, w - 1), std::clamp(y, 0, h - 1)));
  };
  RealImage grad(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double gx = (px(x + 1, y - 1) + 2.0 * px(x + 1, y) + px(x + 1, y + 1) -
                         px(x - 1, y - 1) - 2.0 * px(x - 1, y) - px(x - 1, y + 1)) / 8.0;
      const double gy = (px(x - 1, y + 1) + 2.0 * px(x, y + 1) + px(x + 1, y + 1) -
                         px(x - 1, y - 1) - 2.0 * px(x, y - 1) - px(x + 1, y - 1)) / 8.0;
      grad.at(x, y) = std::sqrt(gx * gx + gy * gy);
    }
  }
  return grad;
}

std::size_t area(const Region& region) { return region.pixels.size(); }

double compactness(const Region& region) {
  if (region.pixels.empty()) throw Error(ErrorCode::InvalidArgument, "empty region");
  return static_cast<double>(region.pixels.size()) /
         (static_cast<double>(region.bbox.width) * region.bbox.height);
}

double mean_region_gradient(const Region& region, const RealImage& grad) {
  if (region.pixels.empty()) throw Error(ErrorCode::InvalidArgument, "empty region");
  double sum = 0.0;
  for (const Point& p : region.pixels) sum += grad.at(p.x, p.y);
  return sum / static_cast<double>(region.pixels.size());
}

double mean_boundary_gradient(const Region& region, const RealImage& grad) {
  if (region.boundary.empty()) throw Error(ErrorCode::InvalidArgument, "empty boundary");
  double sum = 0.0;
  for (const Point& p : region.boundary) sum += grad.at(p.x, p.y);
  return sum / static_cast<double>(region.boundary.size());
}

double gray_std(const Region& region, const GrayImage& img) {
  if (region.pixels.empty()) throw Error(ErrorCode::InvalidArgument, "empty region");
  const double n = static_cast<double>(region.pixels.size());
  double mean = 0.0;
  for (const Point& p : region.pixels) mean += img.at(p.x, p.y);
  mean /= n;
  double ss = 0.0;
  for (const Point& p : region.pixels) {
    const double d = img.at(p.x, p.y) - mean;
    ss += d * d;
  }
  return std::sqrt(ss / n);
}

double edge_distance_variance(std::span<const Point> boundary, double cx, double cy) {
  if (boundary.empty()) throw Error(ErrorCode::DegenerateRegion, "empty boundary");
  std::vector<double> d;
  d.reserve(boundary.size());
  for (const Point& p : boundary) d.push_back(std::hypot(p.x - cx, p.y - cy));
  double mean = 0.0;
  for (double v : d) mean += v;
  mean /= static_cast<double>(d.size());
  if (!(mean > 0.0)) throw Error(ErrorCode::DegenerateRegion, "mean edge distance is zero");
  double ss = 0.0;
  for (double v : d) ss += (v - mean) * (v - mean);
  return ss / static_cast<double>(d.size()) / mean;
}

double edge_distance_variance(const Region& region) {
  return edge_distance_variance(region.boundary, region.centroid_x, region.centroid_y);
}

double intensity_diff(const Region& region, const GrayImage& img) {
  if (region.pixels.empty()) throw Error(ErrorCode::InvalidArgument, "empty region");
  const Rect& bb = region.bbox;
  std::vector<std::uint8_t> inside(static_cast<std::size_t>(bb.width) * bb.height, 0);
  double sum_in = 0.0;
  for (const Point& p : region.pixels) {
    inside[static_cast<std::size_t>(p.y - bb.y) * bb.width + (p.x - bb.x)] = 1;
    sum_in += img.at(p.x, p.y);
  }
  double sum_out = 0.0;
  std::size_t n_out = 0;
  for (int y = bb.y; y < bb.y + bb.height; ++y) {
    for (int x = bb.x; x < bb.x + bb.width; ++x) {
      if (inside[static_cast<std::size_t>(y - bb.y) * bb.width + (x - bb.x)]) continue;
      sum_out += img.at(x, y);
      ++n_out;
    }
  }
  const double mean_in = sum_in / static_cast<double>(region.pixels.size());
  return n_out == 0 ? mean_in : mean_in - sum_out / static_cast<double>(n_out);
}

FeatureVector compute_features(const Region& region, const GrayImage& img, const RealImage& grad) {
  FeatureVector f;
  f.area = area(region);
  f.compactness = compactness(region);
  f.mean_gradient = mean_region_gradient(region, grad);
  f.boundary_gradient = mean_boundary_gradient(region, grad);
  f.gray_std = gray_std(region, img);
  f.edge_distance_variance = edge_distance_variance(region);
  f.intensity_diff = intensity_diff(region, img);
  return f;
}

}  // namespace mammo
