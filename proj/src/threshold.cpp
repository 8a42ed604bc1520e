#include "mammo/threshold.hpp"

#include <algorithm>
#include <numeric>

#include "mammo/error.hpp"

namespace mammo {

namespace {

__extension__ typedef unsigned __int128 u128;

// Between-class variance scaled by total^2 reduces to
//   (s0 * n - s * n0)^2 / (n0 * n1)
// up to a factor common to every t. It is held as numerator / denominator.
struct Score {
  u128 num;
  u128 den;
};

// Exact a.num / a.den < b.num / b.den without overflowing 128 bits: compare the
// integer quotients first, then the remainders' fractions (both < 2^64 products).
bool less_than(const Score& a, const Score& b) {
  const u128 qa = a.num / a.den;
  const u128 qb = b.num / b.den;
  if (qa != qb) return qa < qb;
  const u128 ra = a.num % a.den;
  const u128 rb = b.num % b.den;
  return ra * b.den < rb * a.den;
}

}  // namespace

std::size_t BinaryMask::foreground_count() const {
  return static_cast<std::size_t>(std::count(bits.begin(), bits.end(), std::uint8_t{1}));
}

GrayImage BinaryMask::to_image() const {
  GrayImage img(width, height);
  auto px = img.pixels();
  for (std::size_t i = 0; i < bits.size(); ++i) px[i] = bits[i] ? kMaxGray : 0;
  return img;
}

Histogram histogram(const GrayImage& img) {
  Histogram h;
  for (auto v : img.pixels()) ++h.counts[v];
  h.total = img.size();
  return h;
}

int otsu_threshold(const Histogram& hist) {
  const std::uint64_t n = std::accumulate(hist.counts.begin(), hist.counts.end(), std::uint64_t{0});
  if (n == 0) throw Error(ErrorCode::EmptyHistogram, "histogram has no samples");
  // (255 n^2)^2 must fit in 128 bits.
  if (n > 200'000'000) throw Error(ErrorCode::InvalidArgument, "histogram total too large");

  const auto occupied = std::count_if(hist.counts.begin(), hist.counts.end(),
                                      [](std::uint64_t c) { return c > 0; });
  if (occupied == 1) {
    return static_cast<int>(std::find_if(hist.counts.begin(), hist.counts.end(),
                                         [](std::uint64_t c) { return c > 0; }) -
                            hist.counts.begin());
  }

  std::uint64_t s = 0;
  for (int v = 0; v < kGrayLevels; ++v) s += hist.counts[v] * static_cast<std::uint64_t>(v);

  int best_t = 0;
  Score best{0, 1};
  bool have_best = false;
  std::uint64_t n0 = 0;
  std::uint64_t s0 = 0;
  for (int t = 0; t < kGrayLevels - 1; ++t) {
    n0 += hist.counts[t];
    s0 += hist.counts[t] * static_cast<std::uint64_t>(t);
    const std::uint64_t n1 = n - n0;
    Score score{0, 1};
    if (n0 != 0 && n1 != 0) {
      const u128 a = static_cast<u128>(s0) * n;
      const u128 b = static_cast<u128>(s) * n0;
      const u128 diff = a > b ? a - b : b - a;
      score = {diff * diff, static_cast<u128>(n0) * n1};
    }
    if (!have_best || less_than(best, score)) {
      best = score;
      best_t = t;
      have_best = true;
    }
  }
  return best_t;
}

BinaryMask apply_threshold(const GrayImage& img, int t) {
  if (t < 0 || t > kMaxGray) throw Error(ErrorCode::InvalidArgument, "threshold out of [0,255]");
  BinaryMask mask;
  mask.width = img.width();
  mask.height = img.height();
  mask.threshold = t;
  mask.bits.resize(img.size());
  const auto px = img.pixels();
  for (std::size_t i = 0; i < px.size(); ++i) mask.bits[i] = px[i] > t ? 1 : 0;
  return mask;
}

}  // namespace mammo
