#include "mammo/image.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iterator>
#include <optional>
#include <string>

#include "mammo/error.hpp"

namespace mammo {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedHeader: return "MalformedHeader";
    case ErrorCode::UnsupportedMaxval: return "UnsupportedMaxval";
    case ErrorCode::TruncatedData: return "TruncatedData";
    case ErrorCode::IoFailure: return "IoFailure";
    case ErrorCode::NotDivisible: return "NotDivisible";
    case ErrorCode::EmptyHistogram: return "EmptyHistogram";
    case ErrorCode::RegionTooSmall: return "RegionTooSmall";
    case ErrorCode::DegenerateFit: return "DegenerateFit";
    case ErrorCode::DegenerateRegion: return "DegenerateRegion";
    case ErrorCode::ImageTooSmall: return "ImageTooSmall";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

GrayImage::GrayImage(int width, int height, std::uint8_t fill) : width_(width), height_(height) {
  if (width < 1 || height < 1) {
    throw Error(ErrorCode::InvalidArgument, "image dimensions must be positive");
  }
  pixels_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
}

GrayImage::GrayImage(int width, int height, std::vector<std::uint8_t> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  if (width < 1 || height < 1) {
    throw Error(ErrorCode::InvalidArgument, "image dimensions must be positive");
  }
  if (pixels_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw Error(ErrorCode::InvalidArgument, "pixel count does not match dimensions");
  }
}

namespace {

std::vector<unsigned char> slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Tokenizer over a netpbm byte stream. '#' starts a comment running to end of line.
class PnmCursor {
 public:
  explicit PnmCursor(const std::vector<unsigned char>& bytes) : bytes_(bytes) {}

  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  std::optional<long> next_uint() {
    skip_space_and_comments();
    if (pos_ >= bytes_.size() || !std::isdigit(bytes_[pos_])) return std::nullopt;
    long value = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      value = value * 10 + (bytes_[pos_] - '0');
      if (value > 1'000'000'000L) return std::nullopt;
      ++pos_;
    }
    return value;
  }

  std::string magic() {
    skip_space_and_comments();
    if (pos_ + 2 > bytes_.size()) return {};
    std::string m(bytes_.begin() + static_cast<long>(pos_), bytes_.begin() + static_cast<long>(pos_) + 2);
    pos_ += 2;
    return m;
  }

  // After maxval exactly one whitespace byte separates the header from raster data.
  bool consume_single_whitespace() {
    if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) return false;
    ++pos_;
    return true;
  }

  bool at_end() {
    skip_space_and_comments();
    return pos_ >= bytes_.size();
  }

  std::size_t position() const { return pos_; }
  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  const std::vector<unsigned char>& bytes_;
  std::size_t pos_ = 0;
};

struct PnmHeader {
  bool binary;
  int width;
  int height;
  long maxval;
};

PnmHeader read_header(PnmCursor& cur, const std::filesystem::path& path) {
  const std::string magic = cur.magic();
  if (magic != "P2" && magic != "P5") {
    throw Error(ErrorCode::MalformedHeader, path.string() + ": not a P2/P5 graymap");
  }
  auto w = cur.next_uint();
  auto h = cur.next_uint();
  auto maxval = cur.next_uint();
  if (!w || !h || !maxval || *w < 1 || *h < 1 || *maxval < 1 || *w > 65535 || *h > 65535) {
    throw Error(ErrorCode::MalformedHeader, path.string() + ": bad width/height/maxval");
  }
  if (!cur.consume_single_whitespace()) {
    throw Error(ErrorCode::MalformedHeader, path.string() + ": missing whitespace after maxval");
  }
  return {magic == "P5", static_cast<int>(*w), static_cast<int>(*h), *maxval};
}

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot open " + path.string() + " for writing");
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw Error(ErrorCode::IoFailure, "write failed for " + path.string());
}

}  // namespace

GrayImage read_pgm(const std::filesystem::path& path) {
  const auto bytes = slurp(path);
  PnmCursor cur(bytes);
  const PnmHeader hdr = read_header(cur, path);
  if (hdr.maxval > kMaxGray) {
    throw Error(ErrorCode::UnsupportedMaxval,
                path.string() + ": maxval " + std::to_string(hdr.maxval) + " > 255");
  }
  const std::size_t count = static_cast<std::size_t>(hdr.width) * static_cast<std::size_t>(hdr.height);
  std::vector<std::uint8_t> pixels(count);

  if (hdr.binary) {
    if (cur.remaining() < count) {
      throw Error(ErrorCode::TruncatedData, path.string() + ": raster shorter than header");
    }
    std::copy_n(bytes.begin() + static_cast<long>(cur.position()), count, pixels.begin());
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      auto v = cur.next_uint();
      if (!v) {
        if (cur.at_end()) {
          throw Error(ErrorCode::TruncatedData, path.string() + ": raster shorter than header");
        }
        throw Error(ErrorCode::MalformedHeader, path.string() + ": non-numeric raster token");
      }
      if (*v > hdr.maxval) {
        throw Error(ErrorCode::MalformedHeader, path.string() + ": sample exceeds maxval");
      }
      pixels[i] = static_cast<std::uint8_t>(*v);
    }
  }
  return GrayImage(hdr.width, hdr.height, std::move(pixels));
}

void write_pgm(const GrayImage& img, const std::filesystem::path& path, PgmMode mode) {
  auto out = open_for_write(path);
  if (mode == PgmMode::Binary) {
    out << "P5\n" << img.width() << ' ' << img.height() << "\n255\n";
    const auto px = img.pixels();
    out.write(reinterpret_cast<const char*>(px.data()), static_cast<std::streamsize>(px.size()));
  } else {
    out << "P2\n" << img.width() << ' ' << img.height() << "\n255\n";
    for (int y = 0; y < img.height(); ++y) {
      for (int x = 0; x < img.width(); ++x) {
        if (x > 0) out << ' ';
        out << static_cast<int>(img.at(x, y));
      }
      out << '\n';
    }
  }
  finish(out, path);
}

void write_label_pgm(std::span<const int> labels, int width, int height, int max_label,
                     const std::filesystem::path& path) {
  if (labels.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw Error(ErrorCode::InvalidArgument, "label raster size mismatch");
  }
  const int maxval = std::max(1, max_label);
  if (maxval > 65535) throw Error(ErrorCode::InvalidArgument, "too many labels for PGM");
  auto out = open_for_write(path);
  out << "P5\n" << width << ' ' << height << '\n' << maxval << '\n';
  std::vector<char> raster;
  raster.reserve(labels.size() * (maxval < 256 ? 1 : 2));
  for (int v : labels) {
    if (maxval < 256) {
      raster.push_back(static_cast<char>(v));
    } else {
      raster.push_back(static_cast<char>((v >> 8) & 0xFF));
      raster.push_back(static_cast<char>(v & 0xFF));
    }
  }
  out.write(raster.data(), static_cast<std::streamsize>(raster.size()));
  finish(out, path);
}

std::vector<int> read_label_pgm(const std::filesystem::path& path, int& width, int& height,
                                int& maxval) {
  const auto bytes = slurp(path);
  PnmCursor cur(bytes);
  const PnmHeader hdr = read_header(cur, path);
  if (!hdr.binary || hdr.maxval > 65535) {
    throw Error(ErrorCode::MalformedHeader, path.string() + ": not a P5 label raster");
  }
  width = hdr.width;
  height = hdr.height;
  maxval = static_cast<int>(hdr.maxval);
  const std::size_t count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  const std::size_t stride = maxval < 256 ? 1 : 2;
  if (cur.remaining() < count * stride) {
    throw Error(ErrorCode::TruncatedData, path.string() + ": raster shorter than header");
  }
  std::vector<int> labels(count);
  std::size_t p = cur.position();
  for (std::size_t i = 0; i < count; ++i) {
    labels[i] = stride == 1 ? bytes[p] : (bytes[p] << 8) | bytes[p + 1];
    p += stride;
  }
  return labels;
}

GrayImage negate(const GrayImage& img) {
  GrayImage out = img;
  for (auto& v : out.pixels()) v = static_cast<std::uint8_t>(kMaxGray - v);
  return out;
}

GrayImage haar_downsample(const GrayImage& img, int levels) {
  if (levels < 0) throw Error(ErrorCode::InvalidArgument, "levels must be >= 0");
  if (levels >= 31 || img.width() % (1 << levels) != 0 || img.height() % (1 << levels) != 0) {
    throw Error(ErrorCode::NotDivisible,
                std::to_string(img.width()) + "x" + std::to_string(img.height()) +
                    " is not divisible by 2^" + std::to_string(levels));
  }
  GrayImage cur = img;
  for (int level = 0; level < levels; ++level) {
    GrayImage next(cur.width() / 2, cur.height() / 2);
    for (int y = 0; y < next.height(); ++y) {
      for (int x = 0; x < next.width(); ++x) {
        const int sum = cur.at(2 * x, 2 * y) + cur.at(2 * x + 1, 2 * y) +
                        cur.at(2 * x, 2 * y + 1) + cur.at(2 * x + 1, 2 * y + 1);
        next.at(x, y) = static_cast<std::uint8_t>((sum + 2) / 4);  // round half up
      }
    }
    cur = std::move(next);
  }
  return cur;
}

}  // namespace mammo
