#include "mammo/segment.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <set>

#include "mammo/error.hpp"

namespace mammo {

namespace {

constexpr int kDx[4] = {1, -1, 0, 0};
constexpr int kDy[4] = {0, 0, 1, -1};

void check_same_shape(const GrayImage& img, const BinaryMask& mask) {
  if (img.width() != mask.width || img.height() != mask.height) {
    throw Error(ErrorCode::InvalidArgument, "image and mask dimensions differ");
  }
}

void split_block(const GrayImage& img, const BinaryMask& mask, Block b, int tau_split,
                 int min_block, std::vector<Block>& leaves) {
  int lo = std::numeric_limits<int>::max();
  int hi = std::numeric_limits<int>::min();
  for (int y = b.y; y < b.y + b.height; ++y) {
    for (int x = b.x; x < b.x + b.width; ++x) {
      if (!mask.at(x, y)) continue;
      const int v = img.at(x, y);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  const bool has_foreground = hi >= lo;
  if (!has_foreground || hi - lo <= tau_split || std::max(b.width, b.height) <= min_block) {
    leaves.push_back(b);
    return;
  }
  const int w0 = (b.width + 1) / 2;
  const int h0 = (b.height + 1) / 2;
  const Block quads[4] = {
      {b.x, b.y, w0, h0},
      {b.x + w0, b.y, b.width - w0, h0},
      {b.x, b.y + h0, w0, b.height - h0},
      {b.x + w0, b.y + h0, b.width - w0, b.height - h0},
  };
  for (const Block& q : quads) {
    if (q.width > 0 && q.height > 0) split_block(img, mask, q, tau_split, min_block, leaves);
  }
}

struct Accumulator {
  std::int64_t sum = 0;
  std::int64_t count = 0;
  bool alive = true;
  std::set<int> neighbours;
};

// |sum_a/count_a - sum_b/count_b| <= tau, evaluated exactly.
bool similar(const Accumulator& a, const Accumulator& b, int tau) {
  const std::int64_t lhs = std::llabs(a.sum * b.count - b.sum * a.count);
  return lhs <= static_cast<std::int64_t>(tau) * a.count * b.count;
}

}  // namespace

std::vector<Block> split(const GrayImage& img, const BinaryMask& mask, int tau_split,
                         int min_block) {
  check_same_shape(img, mask);
  if (tau_split < 0) throw Error(ErrorCode::InvalidArgument, "tau_split must be >= 0");
  if (min_block < 1) throw Error(ErrorCode::InvalidArgument, "min_block must be >= 1");
  std::vector<Block> leaves;
  split_block(img, mask, {0, 0, img.width(), img.height()}, tau_split, min_block, leaves);
  return leaves;
}

RegionMap merge(const GrayImage& img, const BinaryMask& mask, const std::vector<Block>& blocks,
                int tau_merge) {
  check_same_shape(img, mask);
  if (tau_merge < 0) throw Error(ErrorCode::InvalidArgument, "tau_merge must be >= 0");
  const int w = img.width();
  const int h = img.height();
  const auto idx = [w](int x, int y) { return static_cast<std::size_t>(y) * w + x; };

  std::vector<int> block_of(static_cast<std::size_t>(w) * h, -1);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const Block& blk = blocks[b];
    for (int y = blk.y; y < blk.y + blk.height; ++y) {
      for (int x = blk.x; x < blk.x + blk.width; ++x) {
        if (!img.contains(x, y) || block_of[idx(x, y)] != -1) {
          throw Error(ErrorCode::InvalidArgument, "blocks do not partition the image");
        }
        block_of[idx(x, y)] = static_cast<int>(b);
      }
    }
  }
  if (std::find(block_of.begin(), block_of.end(), -1) != block_of.end()) {
    throw Error(ErrorCode::InvalidArgument, "blocks do not cover the image");
  }

  // Initial units: 4-connected foreground components within a single leaf.
  std::vector<int> unit(static_cast<std::size_t>(w) * h, -1);
  std::vector<Accumulator> acc;
  std::vector<Point> stack;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!mask.at(x, y) || unit[idx(x, y)] != -1) continue;
      const int id = static_cast<int>(acc.size());
      acc.emplace_back();
      const int blk = block_of[idx(x, y)];
      unit[idx(x, y)] = id;
      stack.push_back({x, y});
      while (!stack.empty()) {
        const Point p = stack.back();
        stack.pop_back();
        acc[id].sum += img.at(p.x, p.y);
        ++acc[id].count;
        for (int k = 0; k < 4; ++k) {
          const int nx = p.x + kDx[k];
          const int ny = p.y + kDy[k];
          if (!img.contains(nx, ny) || !mask.at(nx, ny)) continue;
          if (unit[idx(nx, ny)] != -1 || block_of[idx(nx, ny)] != blk) continue;
          unit[idx(nx, ny)] = id;
          stack.push_back({nx, ny});
        }
      }
    }
  }

  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const int a = unit[idx(x, y)];
      if (a < 0) continue;
      if (x + 1 < w) {
        const int b = unit[idx(x + 1, y)];
        if (b >= 0 && b != a) {
          acc[a].neighbours.insert(b);
          acc[b].neighbours.insert(a);
        }
      }
      if (y + 1 < h) {
        const int b = unit[idx(x, y + 1)];
        if (b >= 0 && b != a) {
          acc[a].neighbours.insert(b);
          acc[b].neighbours.insert(a);
        }
      }
    }
  }

  // parent[] records which survivor each unit was absorbed into.
  std::vector<int> parent(acc.size());
  for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = static_cast<int>(i);

  const auto absorb = [&](int keep, int gone) {
    acc[keep].sum += acc[gone].sum;
    acc[keep].count += acc[gone].count;
    acc[gone].alive = false;
    parent[gone] = keep;
    for (int n : acc[gone].neighbours) {
      if (n == keep) continue;
      acc[n].neighbours.erase(gone);
      acc[n].neighbours.insert(keep);
      acc[keep].neighbours.insert(n);
    }
    acc[keep].neighbours.erase(gone);
    acc[gone].neighbours.clear();
  };

  bool merged_any = true;
  while (merged_any) {
    merged_any = false;
    for (int i = 0; i < static_cast<int>(acc.size()); ++i) {
      while (acc[i].alive) {
        int partner = -1;
        for (int n : acc[i].neighbours) {
          if (similar(acc[i], acc[n], tau_merge)) {
            partner = n;
            break;
          }
        }
        if (partner < 0) break;
        absorb(std::min(i, partner), std::max(i, partner));
        merged_any = true;
      }
    }
  }

  const auto find = [&](int u) {
    while (parent[u] != u) u = parent[u];
    return u;
  };
  std::vector<int> dense(acc.size(), 0);
  int next = 0;
  for (std::size_t i = 0; i < acc.size(); ++i) {
    if (acc[i].alive) dense[i] = ++next;
  }

  RegionMap map;
  map.width = w;
  map.height = h;
  map.region_count = next;
  map.labels.assign(static_cast<std::size_t>(w) * h, 0);
  for (std::size_t p = 0; p < unit.size(); ++p) {
    if (unit[p] >= 0) map.labels[p] = dense[find(unit[p])];
  }
  return map;
}

RegionMap segment(const GrayImage& img, const BinaryMask& mask, const SegmentParams& params) {
  return merge(img, mask, split(img, mask, params.tau_split, params.min_block), params.tau_merge);
}

std::vector<Region> extract_regions(const RegionMap& map, const GrayImage& img) {
  if (map.width != img.width() || map.height != img.height()) {
    throw Error(ErrorCode::InvalidArgument, "region map and image dimensions differ");
  }
  std::vector<Region> regions(static_cast<std::size_t>(map.region_count));
  for (int i = 0; i < map.region_count; ++i) regions[i].id = i + 1;

  for (int y = 0; y < map.height; ++y) {
    for (int x = 0; x < map.width; ++x) {
      const int id = map.at(x, y);
      if (id == 0) continue;
      if (id < 0 || id > map.region_count) {
        throw Error(ErrorCode::InvalidArgument, "label outside 0..region_count");
      }
      Region& r = regions[id - 1];
      r.pixels.push_back({x, y});
      bool edge = false;
      for (int k = 0; k < 4 && !edge; ++k) {
        const int nx = x + kDx[k];
        const int ny = y + kDy[k];
        edge = nx < 0 || ny < 0 || nx >= map.width || ny >= map.height || map.at(nx, ny) != id;
      }
      if (edge) r.boundary.push_back({x, y});
    }
  }

  for (Region& r : regions) {
    if (r.pixels.empty()) throw Error(ErrorCode::InvalidArgument, "region ids are not dense");
    int x0 = r.pixels.front().x, x1 = x0, y0 = r.pixels.front().y, y1 = y0;
    double sx = 0.0, sy = 0.0;
    for (const Point& p : r.pixels) {
      x0 = std::min(x0, p.x);
      x1 = std::max(x1, p.x);
      y0 = std::min(y0, p.y);
      y1 = std::max(y1, p.y);
      sx += p.x;
      sy += p.y;
    }
    r.bbox = {x0, y0, x1 - x0 + 1, y1 - y0 + 1};
    r.centroid_x = sx / static_cast<double>(r.pixels.size());
    r.centroid_y = sy / static_cast<double>(r.pixels.size());
  }
  return regions;
}

GrayImage boundary_overlay(const GrayImage& img, const std::vector<Region>& regions) {
  GrayImage out = img;
  for (const Region& r : regions) {
    for (const Point& p : r.boundary) out.at(p.x, p.y) = kMaxGray;
  }
  return out;
}

}  // namespace mammo
