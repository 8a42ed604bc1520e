#pragma once

#include <vector>

#include "mammo/image.hpp"
#include "mammo/threshold.hpp"

namespace mammo {

struct Point {
  int x = 0;
  int y = 0;
  bool operator==(const Point&) const = default;
};

struct Rect {
  int x = 0;
  int y = 0;
  int width = 0;
  int height = 0;
  bool operator==(const Rect&) const = default;
  bool contains(Point p) const {
    return p.x >= x && p.y >= y && p.x < x + width && p.y < y + height;
  }
};

/// A leaf of the split quadtree. Same representation as Rect.
using Block = Rect;

/// Labels: 0 = background, 1..region_count = regions. Row-major.
struct RegionMap {
  int width = 0;
  int height = 0;
  std::vector<int> labels;
  int region_count = 0;

  int at(int x, int y) const { return labels[static_cast<std::size_t>(y) * width + x]; }
};

struct Region {
  int id = 0;
  std::vector<Point> pixels;    // raster order
  std::vector<Point> boundary;  // pixels with a non-region 4-neighbour or on the image border
  Rect bbox;
  double centroid_x = 0.0;
  double centroid_y = 0.0;
};

struct SegmentParams {
  int tau_split = 10;
  int tau_merge = 10;
  int min_block = 1;
};

/**
 * Quadtree split over the foreground. A block is divided into (up to) four
 * quadrants, ceil halves first, while the spread (max - min) of its foreground
 * gray values exceeds tau_split and its longer side exceeds min_block. Blocks
 * without foreground are never split. The leaves tile the image.
 */
std::vector<Block> split(const GrayImage& img, const BinaryMask& mask, int tau_split,
                         int min_block);

/**
 * Region merging on the split leaves.
 *
 * The starting regions are the 4-connected foreground components of each leaf,
 * numbered in raster order of their first pixel. A pass visits live regions in
 * ascending id order and repeatedly absorbs the lowest-id 4-adjacent region
 * whose mean gray value is within tau_merge (the survivor keeps the lower id).
 * Passes repeat until one completes without a merge; ids are then compacted
 * to 1..region_count preserving order.
 */
RegionMap merge(const GrayImage& img, const BinaryMask& mask, const std::vector<Block>& blocks,
                int tau_merge);

/// split followed by merge.
RegionMap segment(const GrayImage& img, const BinaryMask& mask, const SegmentParams& params);

std::vector<Region> extract_regions(const RegionMap& map, const GrayImage& img);

/// Source image with every region boundary pixel painted 255.
GrayImage boundary_overlay(const GrayImage& img, const std::vector<Region>& regions);

}  // namespace mammo
