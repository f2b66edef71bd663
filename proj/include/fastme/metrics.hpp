#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>

#include "fastme/attention.hpp"
#include "fastme/frame.hpp"

namespace fastme {

// Sum of absolute differences over two equally sized planes.
std::uint64_t sad(const LumaPlane& a, const LumaPlane& b);

// SAD between the b x b block of `current` at `origin` and the block of
// `reference` at origin + disp. The displaced block must lie inside the frame.
std::uint64_t block_sad(const LumaPlane& current, const LumaPlane& reference,
                        PixelPos origin, MotionVector disp, int block_size);

double mae(const LumaPlane& a, const LumaPlane& b);
double mse(const LumaPlane& a, const LumaPlane& b);

// Squared error summed over the plane; lets callers pool MSE across frames.
std::uint64_t sum_squared_error(const LumaPlane& a, const LumaPlane& b);

inline constexpr double kPsnrInfinite = std::numeric_limits<double>::infinity();

double psnr_from_mse(double mse_value);
// 10 log10(255^2 / MSE); kPsnrInfinite for identical planes.
double psnr(const LumaPlane& original, const LumaPlane& predicted);

// Block-wise prediction from `reference`; margins outside the grid are copied.
LumaPlane motion_compensate(const LumaPlane& reference, const MotionField& field);

enum class ScsDenominator {
  kNonzeroVectors,  // blocks that moved
  kAllBlocks,
};

struct CoverageCounts {
  std::size_t hits = 0;         // counted blocks inside the top mask
  std::size_t denominator = 0;  // counted blocks

  double percent() const {
    return denominator == 0 ? 0.0 : 100.0 * static_cast<double>(hits) /
                                        static_cast<double>(denominator);
  }
};

CoverageCounts coverage_counts(const MotionField& field, const AttentionMap& attention,
                               double fraction = 0.2,
                               ScsDenominator mode = ScsDenominator::kNonzeroVectors);

struct CoverageScore {
  double percent = 0.0;
  bool no_motion = false;  // empty denominator; percent is 0 by convention
};

// Percentage of counted motion vectors that land in the top `fraction` of
// blocks by attention.
CoverageScore semantic_coverage_score(
    const MotionField& field, const AttentionMap& attention,
    double fraction = 0.2, ScsDenominator mode = ScsDenominator::kNonzeroVectors);

}  // namespace fastme
