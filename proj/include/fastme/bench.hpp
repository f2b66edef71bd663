#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "fastme/attention.hpp"
#include "fastme/metrics.hpp"
#include "fastme/search.hpp"
#include "fastme/stopping.hpp"
#include "fastme/video_io.hpp"

namespace fastme {

struct AttentionSource {
  enum class Kind { kNone, kSynthetic, kFiles, kProvider };
  Kind kind = Kind::kNone;
  SyntheticAttentionSpec synthetic;
  // kFiles: a directory of frame_NNNNNN.attn.json files, or a single file
  // when static_map is set.
  std::filesystem::path path;
  bool static_map = false;
  // kProvider: library callers supply maps directly.
  std::function<AttentionMap(std::size_t frame_index, const BlockGrid& grid)> provider;

  bool available() const { return kind != Kind::kNone; }
};

struct BenchConfig {
  std::string sequence_name = "sequence";
  // Either a video file...
  std::filesystem::path input;
  VideoFormat format = VideoFormat::kY4m;
  int width = 0;   // raw formats only
  int height = 0;
  // ...or frames supplied in memory (used when non-empty).
  std::vector<LumaPlane> frames;

  std::size_t frame_count = 30;  // frames read; pairs = frames - 1
  std::vector<EngineKind> engines;
  std::vector<int> block_sizes{16};
  std::vector<int> search_ranges{7};
  StoppingPolicy policy;
  AttentionSource attention;
  int repetitions = 1;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
  double scs_fraction = 0.2;
  ScsDenominator scs_mode = ScsDenominator::kNonzeroVectors;

  // Throws kConfig. FAST-ME without an attention source is rejected.
  void validate() const;
};

struct BenchRow {
  std::string sequence;
  int width = 0;
  int height = 0;
  std::string engine;
  int block_size = 0;
  int search_range = 0;
  double mean_time_s = 0.0;
  // Per frame pair totals, averaged over pairs and repetitions.
  double mean_sad = 0.0;
  double mean_comparisons = 0.0;
  // From the MSE pooled over all pairs; kPsnrInfinite when it is zero.
  double psnr_db = 0.0;
  // Pooled over pairs; nullopt without attention.
  std::optional<double> scs_pct;
  bool scs_no_motion = false;
  std::size_t frame_pairs = 0;
  // Share of blocks whose search stopped early (early-stopping engines).
  double early_stop_fraction = 0.0;

  std::string resolution() const;
};

std::vector<BenchRow> run_benchmark(const BenchConfig& config);

inline constexpr const char* kCsvHeader =
    "sequence,resolution,engine,block_size,search_range,mean_time_s,mean_sad,"
    "mean_comparisons,psnr_db,scs_pct";

void write_csv(std::ostream& out, std::span<const BenchRow> rows);
std::string format_csv(std::span<const BenchRow> rows);

struct CdfPoint {
  double y;
  double F;
};

struct QuantileMark {
  double quantile;
  double threshold;  // smallest sample y with F(y) >= quantile
};

struct CdfTable {
  std::vector<CdfPoint> points;  // one per distinct sample value
  std::vector<QuantileMark> marks;
};

// Step CDF over the sample range plus order-statistic thresholds.
CdfTable export_cdf_data(const SadSampleSet& set, std::span<const double> quantiles);

// Two-column "y<TAB>F" with a header line.
void write_cdf_tsv(std::ostream& out, const CdfTable& table);

}  // namespace fastme
