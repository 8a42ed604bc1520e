#include "mammo/fractal.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "mammo/error.hpp"

namespace mammo {

namespace {

struct LineFit {
  double slope;
  double intercept;
  double residual;
};

LineFit least_squares(std::span<const double> xs, std::span<const double> ys) {
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx <= 0.0) throw Error(ErrorCode::DegenerateFit, "all abscissae are equal");
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  double rss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double e = ys[i] - (intercept + slope * xs[i]);
    rss += e * e;
  }
  return {slope, intercept, rss};
}

}  // namespace

BlanketAreas blanket_areas(const GrayImage& img, const Region& region, int r_max) {
  if (region.pixels.size() < 2) {
    throw Error(ErrorCode::RegionTooSmall, "blanket method needs at least 2 pixels");
  }
  if (r_max < 2) throw Error(ErrorCode::InvalidArgument, "r_max must be >= 2");

  const Rect& bb = region.bbox;
  const auto local = [&bb](int x, int y) {
    return static_cast<std::size_t>(y - bb.y) * bb.width + (x - bb.x);
  };
  std::vector<int> slot(static_cast<std::size_t>(bb.width) * bb.height, -1);
  for (std::size_t i = 0; i < region.pixels.size(); ++i) {
    const Point p = region.pixels[i];
    if (!bb.contains(p) || !img.contains(p.x, p.y)) {
      throw Error(ErrorCode::InvalidArgument, "region pixel outside bbox or image");
    }
    slot[local(p.x, p.y)] = static_cast<int>(i);
  }

  const std::size_t n = region.pixels.size();
  std::vector<std::array<int, 4>> nbr(n);
  std::vector<int> upper(n), lower(n);
  constexpr int dx[4] = {1, -1, 0, 0};
  constexpr int dy[4] = {0, 0, 1, -1};
  for (std::size_t i = 0; i < n; ++i) {
    const Point p = region.pixels[i];
    upper[i] = lower[i] = img.at(p.x, p.y);
    for (int k = 0; k < 4; ++k) {
      const Point q{p.x + dx[k], p.y + dy[k]};
      nbr[i][k] = bb.contains(q) ? slot[local(q.x, q.y)] : -1;
    }
  }

  BlanketAreas out;
  std::vector<int> next_upper(n), next_lower(n);
  for (int r = 1; r <= r_max; ++r) {
    long long volume = 0;
    for (std::size_t i = 0; i < n; ++i) {
      int u = upper[i] + 1;
      int b = lower[i] - 1;
      for (int q : nbr[i]) {
        if (q < 0) continue;
        u = std::max(u, upper[q]);
        b = std::min(b, lower[q]);
      }
      next_upper[i] = u;
      next_lower[i] = b;
      volume += u - b;
    }
    upper.swap(next_upper);
    lower.swap(next_lower);
    out.scales.push_back(static_cast<double>(r));
    out.areas.push_back(static_cast<double>(volume) / (2.0 * r));
  }
  return out;
}

BlanketFit fit_dimension(std::span<const double> scales, std::span<const double> areas) {
  if (scales.size() != areas.size() || scales.size() < 2) {
    throw Error(ErrorCode::DegenerateFit, "need at least two (scale, area) pairs");
  }
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < scales.size(); ++i) {
    if (!(scales[i] > 0.0) || !(areas[i] > 0.0)) {
      throw Error(ErrorCode::DegenerateFit, "scales and areas must be positive");
    }
    xs.push_back(std::log(scales[i]));
    ys.push_back(std::log(areas[i]));
  }
  const LineFit line = least_squares(xs, ys);
  BlanketFit fit;
  fit.scales.assign(scales.begin(), scales.end());
  fit.areas.assign(areas.begin(), areas.end());
  fit.dimension = 2.0 - line.slope;
  fit.intercept = line.intercept;
  fit.residual = line.residual;
  return fit;
}

BlanketFit blanket_dimension(const GrayImage& img, const Region& region, int r_max) {
  const BlanketAreas a = blanket_areas(img, region, r_max);
  return fit_dimension(a.scales, a.areas);
}

double box_count_dimension(const GrayImage& img, const Region& region) {
  const Rect& bb = region.bbox;
  if (bb.width < 8 || bb.height < 8) {
    throw Error(ErrorCode::RegionTooSmall, "box counting needs an 8x8 bounding box");
  }
  const int m = std::min(bb.width, bb.height);
  std::vector<double> xs, ys;
  for (int s = 2; s <= m / 2; s *= 2) {
    const double h = static_cast<double>(s) * kGrayLevels / m;
    double boxes = 0.0;
    for (int cy = 0; cy + s <= bb.height; cy += s) {
      for (int cx = 0; cx + s <= bb.width; cx += s) {
        int lo = kMaxGray, hi = 0;
        for (int y = bb.y + cy; y < bb.y + cy + s; ++y) {
          for (int x = bb.x + cx; x < bb.x + cx + s; ++x) {
            lo = std::min<int>(lo, img.at(x, y));
            hi = std::max<int>(hi, img.at(x, y));
          }
        }
        boxes += std::floor(hi / h) - std::floor(lo / h) + 1.0;
      }
    }
    xs.push_back(std::log(1.0 / s));
    ys.push_back(std::log(boxes));
  }
  return least_squares(xs, ys).slope;
}

std::vector<int> roughness_gate(std::span<const RegionFit> fits, double d_min, double d_max) {
  if (!(d_min < d_max)) throw Error(ErrorCode::InvalidArgument, "d_min must be < d_max");
  std::vector<int> kept;
  for (const RegionFit& f : fits) {
    if (f.fit.dimension >= d_min && f.fit.dimension <= d_max) kept.push_back(f.region_id);
  }
  return kept;
}

}  // namespace mammo
