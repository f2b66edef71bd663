#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "fastme/error.hpp"

namespace fastme {

// 8-bit luma raster, row-major, no padding between rows.
class LumaPlane {
 public:
  LumaPlane() = default;
  LumaPlane(int width, int height, std::vector<std::uint8_t> samples);
  // Constant-filled plane.
  LumaPlane(int width, int height, std::uint8_t fill = 0);

  int width() const { return width_; }
  int height() const { return height_; }
  bool empty() const { return samples_.empty(); }

  std::uint8_t at(int x, int y) const {
    return samples_[static_cast<std::size_t>(y) * width_ + x];
  }
  std::span<const std::uint8_t> row(int y) const {
    return {samples_.data() + static_cast<std::size_t>(y) * width_,
            static_cast<std::size_t>(width_)};
  }
  std::span<const std::uint8_t> samples() const { return samples_; }

  friend bool operator==(const LumaPlane&, const LumaPlane&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> samples_;
};

struct PixelPos {
  int x = 0;
  int y = 0;
  friend bool operator==(const PixelPos&, const PixelPos&) = default;
};

struct MotionVector {
  int dx = 0;
  int dy = 0;

  bool is_zero() const { return dx == 0 && dy == 0; }
  int l1() const { return (dx < 0 ? -dx : dx) + (dy < 0 ? -dy : dy); }
  friend bool operator==(const MotionVector&, const MotionVector&) = default;
};

// Non-overlapping b x b tiling. Remainder pixels on the right and bottom are
// not part of the grid.
class BlockGrid {
 public:
  BlockGrid() = default;
  BlockGrid(int frame_width, int frame_height, int block_size);

  int block_size() const { return block_size_; }
  int cols() const { return cols_; }
  int rows() const { return rows_; }
  int frame_width() const { return frame_width_; }
  int frame_height() const { return frame_height_; }
  std::size_t size() const { return static_cast<std::size_t>(cols_) * rows_; }

  PixelPos origin_of(std::size_t index) const;
  // Inverse of origin_of; the position must be a block origin.
  std::size_t index_of(PixelPos origin) const;

  bool same_layout(const BlockGrid& other) const {
    return cols_ == other.cols_ && rows_ == other.rows_ &&
           block_size_ == other.block_size_;
  }
  friend bool operator==(const BlockGrid&, const BlockGrid&) = default;

 private:
  int frame_width_ = 0;
  int frame_height_ = 0;
  int block_size_ = 0;
  int cols_ = 0;
  int rows_ = 0;
};

bool is_supported_block_size(int block_size);

// Throws kConfig for block sizes other than 8/16/32 and kDimension when the
// frame cannot hold a single block.
BlockGrid partition_into_blocks(const LumaPlane& frame, int block_size);

enum class BorderPolicy { kClamp };

struct SearchParams {
  int block_size = 16;
  int search_range = 7;
  BorderPolicy border_policy = BorderPolicy::kClamp;

  void validate() const;
};

// All displacements with |dx|,|dy| <= p whose displaced block lies inside the
// frame, in raster order (dy outer, dx inner, ascending).
std::vector<MotionVector> candidate_window(PixelPos block_origin,
                                           const SearchParams& params,
                                           int frame_width, int frame_height);

// Same set, reordered by increasing |dx|+|dy| with raster order breaking ties.
std::vector<MotionVector> center_outward_order(std::vector<MotionVector> window);

// Inclusive displacement bounds of the clamped window for one block.
struct WindowBounds {
  int min_dx, max_dx, min_dy, max_dy;
  bool contains(MotionVector v) const {
    return v.dx >= min_dx && v.dx <= max_dx && v.dy >= min_dy && v.dy <= max_dy;
  }
  std::size_t count() const {
    return static_cast<std::size_t>(max_dx - min_dx + 1) *
           static_cast<std::size_t>(max_dy - min_dy + 1);
  }
};

WindowBounds window_bounds(PixelPos block_origin, const SearchParams& params,
                           int frame_width, int frame_height);

struct BlockStats {
  std::uint64_t min_sad = 0;
  std::uint64_t comparisons = 0;
  std::optional<std::uint64_t> stopping_step;

  friend bool operator==(const BlockStats&, const BlockStats&) = default;
};

struct MotionField {
  BlockGrid grid;
  std::vector<MotionVector> vectors;
  std::vector<BlockStats> stats;
  // Stopping statistic observed at every evaluated candidate, concatenated in
  // block order. Filled by the early-stopping engines only; used to refit the
  // exponential rate for the next frame pair.
  std::vector<double> observed_costs;

  std::uint64_t total_sad() const;
  std::uint64_t total_comparisons() const;
};

}  // namespace fastme
