#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "fastme/frame.hpp"

namespace fastme {

// Per-block semantic scores A_k in [0,1], row-major over a block grid.
class AttentionMap {
 public:
  AttentionMap() = default;
  // Throws kFormat on a length mismatch and kValidation on out-of-range scores.
  AttentionMap(int cols, int rows, int block_size, std::vector<double> scores,
               std::string source, std::size_t frame_index = 0);

  int cols() const { return cols_; }
  int rows() const { return rows_; }
  int block_size() const { return block_size_; }
  std::size_t size() const { return scores_.size(); }
  const std::vector<double>& scores() const { return scores_; }
  double score(std::size_t block_index) const { return scores_[block_index]; }
  double score(int col, int row) const {
    return scores_[static_cast<std::size_t>(row) * cols_ + col];
  }
  const std::string& source() const { return source_; }
  std::size_t frame_index() const { return frame_index_; }

  bool matches(const BlockGrid& grid) const {
    return cols_ == grid.cols() && rows_ == grid.rows() &&
           block_size_ == grid.block_size();
  }

 private:
  int cols_ = 0;
  int rows_ = 0;
  int block_size_ = 0;
  std::vector<double> scores_;
  std::string source_;
  std::size_t frame_index_ = 0;
};

AttentionMap parse_attention_json(const std::string& text);
AttentionMap load_attention_map(const std::filesystem::path& path);
std::string to_attention_json(const AttentionMap& map);
void save_attention_map(const AttentionMap& map, const std::filesystem::path& path);

// "frame_000042.attn.json"
std::string attention_filename(std::size_t frame_index);

struct PixelSaliency {
  int width = 0;
  int height = 0;
  std::vector<double> values;  // row-major, each in [0,1]
};

// Block score = arithmetic mean of the saliency over the block footprint.
AttentionMap aggregate_to_blocks(const PixelSaliency& saliency, int block_size,
                                 std::string source = "aggregated");

struct SyntheticAttentionSpec {
  enum class Kind { kUniform, kGaussianBlob, kCheckerboard, kRandom };
  Kind kind = Kind::kUniform;
  double level = 0.0;  // uniform
  // Gaussian blob centre and width in block units. A negative centre means
  // the grid centre; a non-positive sigma means max(cols, rows) / 6.
  double center_col = -1.0;
  double center_row = -1.0;
  double sigma = 0.0;
};

// Parses "uniform:<c>", "gaussian", "gaussian:<cx>,<cy>,<sigma>",
// "checkerboard" or "random". Throws kConfig for anything else.
SyntheticAttentionSpec parse_synthetic_kind(const std::string& text);
std::string to_string(const SyntheticAttentionSpec& spec);

AttentionMap synthetic_attention(const SyntheticAttentionSpec& spec, int cols,
                                 int rows, int block_size, std::uint64_t seed,
                                 std::size_t frame_index = 0);

// The ceil(fraction * n) highest-scoring block indices, ties to the lower
// index, returned in ascending index order.
std::vector<std::size_t> top_fraction_mask(const AttentionMap& map,
                                           double fraction = 0.2);

}  // namespace fastme
