#include "fastme/metrics.hpp"

#include <cmath>
#include <cstdlib>
#include <vector>

namespace fastme {
namespace {

void require_same_dims(const LumaPlane& a, const LumaPlane& b, const char* what) {
  if (a.width() != b.width() || a.height() != b.height()) {
    throw Error(ErrorCode::kDimension,
                std::string(what) + ": plane sizes differ (" +
                    std::to_string(a.width()) + "x" + std::to_string(a.height()) +
                    " vs " + std::to_string(b.width()) + "x" +
                    std::to_string(b.height()) + ")");
  }
}

}  // namespace

std::uint64_t sad(const LumaPlane& a, const LumaPlane& b) {
  require_same_dims(a, b, "sad");
  const auto sa = a.samples();
  const auto sb = b.samples();
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < sa.size(); ++i) {
    total += static_cast<std::uint64_t>(std::abs(int{sa[i]} - int{sb[i]}));
  }
  return total;
}

std::uint64_t block_sad(const LumaPlane& current, const LumaPlane& reference,
                        PixelPos origin, MotionVector disp, int block_size) {
  std::uint64_t total = 0;
  for (int j = 0; j < block_size; ++j) {
    const auto cur = current.row(origin.y + j).subspan(
        static_cast<std::size_t>(origin.x), static_cast<std::size_t>(block_size));
    const auto ref = reference.row(origin.y + disp.dy + j)
                         .subspan(static_cast<std::size_t>(origin.x + disp.dx),
                                  static_cast<std::size_t>(block_size));
    std::uint32_t line = 0;
    for (int i = 0; i < block_size; ++i) {
      line += static_cast<std::uint32_t>(std::abs(int{cur[i]} - int{ref[i]}));
    }
    total += line;
  }
  return total;
}

std::uint64_t sum_squared_error(const LumaPlane& a, const LumaPlane& b) {
  require_same_dims(a, b, "mse");
  const auto sa = a.samples();
  const auto sb = b.samples();
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < sa.size(); ++i) {
    const int d = int{sa[i]} - int{sb[i]};
    total += static_cast<std::uint64_t>(d * d);
  }
  return total;
}

double mae(const LumaPlane& a, const LumaPlane& b) {
  return static_cast<double>(sad(a, b)) / static_cast<double>(a.samples().size());
}

double mse(const LumaPlane& a, const LumaPlane& b) {
  return static_cast<double>(sum_squared_error(a, b)) /
         static_cast<double>(a.samples().size());
}

double psnr_from_mse(double mse_value) {
  if (mse_value <= 0.0) return kPsnrInfinite;
  return 10.0 * std::log10(255.0 * 255.0 / mse_value);
}

double psnr(const LumaPlane& original, const LumaPlane& predicted) {
  return psnr_from_mse(mse(original, predicted));
}

LumaPlane motion_compensate(const LumaPlane& reference, const MotionField& field) {
  const BlockGrid& grid = field.grid;
  if (grid.frame_width() != reference.width() ||
      grid.frame_height() != reference.height()) {
    throw Error(ErrorCode::kDimension,
                "motion field grid does not match the reference frame");
  }
  std::vector<std::uint8_t> out(reference.samples().begin(),
                                reference.samples().end());
  const int b = grid.block_size();
  const int w = reference.width();
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const PixelPos o = grid.origin_of(k);
    const MotionVector v = field.vectors[k];
    for (int j = 0; j < b; ++j) {
      const auto src = reference.row(o.y + v.dy + j);
      for (int i = 0; i < b; ++i) {
        out[static_cast<std::size_t>(o.y + j) * w + (o.x + i)] = src[o.x + v.dx + i];
      }
    }
  }
  return LumaPlane(reference.width(), reference.height(), std::move(out));
}

CoverageCounts coverage_counts(const MotionField& field,
                               const AttentionMap& attention, double fraction,
                               ScsDenominator mode) {
  if (!attention.matches(field.grid) || field.vectors.size() != attention.size()) {
    throw Error(ErrorCode::kDimension,
                "attention grid " + std::to_string(attention.cols()) + "x" +
                    std::to_string(attention.rows()) +
                    " does not match the motion field grid " +
                    std::to_string(field.grid.cols()) + "x" +
                    std::to_string(field.grid.rows()));
  }
  std::vector<bool> in_top(attention.size(), false);
  for (std::size_t k : top_fraction_mask(attention, fraction)) in_top[k] = true;

  CoverageCounts counts;
  for (std::size_t k = 0; k < field.vectors.size(); ++k) {
    const bool moving = !field.vectors[k].is_zero();
    if (moving || mode == ScsDenominator::kAllBlocks) ++counts.denominator;
    if (moving && in_top[k]) ++counts.hits;
  }
  return counts;
}

CoverageScore semantic_coverage_score(const MotionField& field,
                                      const AttentionMap& attention,
                                      double fraction, ScsDenominator mode) {
  const CoverageCounts c = coverage_counts(field, attention, fraction, mode);
  return {c.percent(), c.denominator == 0};
}

}  // namespace fastme
