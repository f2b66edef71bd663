#include "fastme/frame.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace fastme {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDimension: return "dimension error";
    case ErrorCode::kFormat: return "format error";
    case ErrorCode::kTruncation: return "truncation error";
    case ErrorCode::kUnsupportedFormat: return "unsupported format";
    case ErrorCode::kValidation: return "validation error";
    case ErrorCode::kConfig: return "config error";
    case ErrorCode::kDomain: return "domain error";
    case ErrorCode::kPrecondition: return "precondition error";
    case ErrorCode::kDegenerateData: return "degenerate data";
    case ErrorCode::kNumeric: return "numeric error";
    case ErrorCode::kIo: return "I/O error";
  }
  return "error";
}

LumaPlane::LumaPlane(int width, int height, std::vector<std::uint8_t> samples)
    : width_(width), height_(height), samples_(std::move(samples)) {
  if (width <= 0 || height <= 0) {
    throw Error(ErrorCode::kDimension,
                "plane dimensions must be positive, got " +
                    std::to_string(width) + "x" + std::to_string(height));
  }
  if (samples_.size() != static_cast<std::size_t>(width) * height) {
    throw Error(ErrorCode::kDimension,
                "plane of " + std::to_string(width) + "x" +
                    std::to_string(height) + " needs " +
                    std::to_string(static_cast<std::size_t>(width) * height) +
                    " samples, got " + std::to_string(samples_.size()));
  }
}

LumaPlane::LumaPlane(int width, int height, std::uint8_t fill)
    : LumaPlane(width, height,
                std::vector<std::uint8_t>(
                    static_cast<std::size_t>(std::max(width, 0)) *
                        static_cast<std::size_t>(std::max(height, 0)),
                    fill)) {}

bool is_supported_block_size(int block_size) {
  return block_size == 8 || block_size == 16 || block_size == 32;
}

BlockGrid::BlockGrid(int frame_width, int frame_height, int block_size)
    : frame_width_(frame_width), frame_height_(frame_height),
      block_size_(block_size) {
  if (block_size <= 0) {
    throw Error(ErrorCode::kConfig,
                "block size must be positive, got " + std::to_string(block_size));
  }
  if (frame_width < block_size || frame_height < block_size) {
    throw Error(ErrorCode::kDimension,
                "frame " + std::to_string(frame_width) + "x" +
                    std::to_string(frame_height) +
                    " is smaller than one " + std::to_string(block_size) +
                    "x" + std::to_string(block_size) + " block");
  }
  cols_ = frame_width / block_size;
  rows_ = frame_height / block_size;
}

PixelPos BlockGrid::origin_of(std::size_t index) const {
  const auto cols = static_cast<std::size_t>(cols_);
  return {block_size_ * static_cast<int>(index % cols),
          block_size_ * static_cast<int>(index / cols)};
}

std::size_t BlockGrid::index_of(PixelPos origin) const {
  return static_cast<std::size_t>(origin.y / block_size_) * cols_ +
         static_cast<std::size_t>(origin.x / block_size_);
}

BlockGrid partition_into_blocks(const LumaPlane& frame, int block_size) {
  if (!is_supported_block_size(block_size)) {
    throw Error(ErrorCode::kConfig, "block size must be one of 8, 16, 32; got " +
                                        std::to_string(block_size));
  }
  return BlockGrid(frame.width(), frame.height(), block_size);
}

void SearchParams::validate() const {
  if (!is_supported_block_size(block_size)) {
    throw Error(ErrorCode::kConfig, "block size must be one of 8, 16, 32; got " +
                                        std::to_string(block_size));
  }
  if (search_range < 1) {
    throw Error(ErrorCode::kConfig, "search range must be >= 1, got " +
                                        std::to_string(search_range));
  }
}

WindowBounds window_bounds(PixelPos block_origin, const SearchParams& params,
                           int frame_width, int frame_height) {
  const int p = params.search_range;
  const int b = params.block_size;
  return {std::max(-p, -block_origin.x),
          std::min(p, frame_width - b - block_origin.x),
          std::max(-p, -block_origin.y),
          std::min(p, frame_height - b - block_origin.y)};
}

std::vector<MotionVector> candidate_window(PixelPos block_origin,
                                           const SearchParams& params,
                                           int frame_width, int frame_height) {
  const WindowBounds w =
      window_bounds(block_origin, params, frame_width, frame_height);
  std::vector<MotionVector> out;
  out.reserve(w.count());
  for (int dy = w.min_dy; dy <= w.max_dy; ++dy) {
    for (int dx = w.min_dx; dx <= w.max_dx; ++dx) out.push_back({dx, dy});
  }
  return out;
}

std::vector<MotionVector> center_outward_order(std::vector<MotionVector> window) {
  // Input is raster ordered, so a stable sort on L1 keeps raster tie-breaks.
  std::stable_sort(window.begin(), window.end(),
                   [](MotionVector a, MotionVector b) { return a.l1() < b.l1(); });
  return window;
}

std::uint64_t MotionField::total_sad() const {
  return std::accumulate(stats.begin(), stats.end(), std::uint64_t{0},
                         [](std::uint64_t acc, const BlockStats& s) {
                           return acc + s.min_sad;
                         });
}

std::uint64_t MotionField::total_comparisons() const {
  return std::accumulate(stats.begin(), stats.end(), std::uint64_t{0},
                         [](std::uint64_t acc, const BlockStats& s) {
                           return acc + s.comparisons;
                         });
}

}  // namespace fastme
