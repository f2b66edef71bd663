#include "fastme/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <memory>
#include <sstream>

namespace fastme {
namespace {

struct RunState {
  RunState(EngineKind e, int b, int p, SequenceEstimator est)
      : engine(e), block_size(b), search_range(p), estimator(std::move(est)) {}

  EngineKind engine;
  int block_size;
  int search_range;
  SequenceEstimator estimator;
  double seconds = 0.0;
  double sad = 0.0;
  double comparisons = 0.0;
  std::uint64_t squared_error = 0;
  std::uint64_t pixels = 0;
  CoverageCounts coverage;
  std::uint64_t blocks = 0;
  std::uint64_t early_stops = 0;
  std::size_t pairs = 0;
};

class FrameFeed {
 public:
  explicit FrameFeed(const BenchConfig& config) : config_(config) {
    if (config.frames.empty()) {
      file_ = std::make_unique<VideoFile>(config.input.string(), config.format,
                                          config.width, config.height);
    }
  }

  std::optional<LumaPlane> next() {
    if (served_ >= config_.frame_count) return std::nullopt;
    std::optional<LumaPlane> frame;
    if (file_) {
      try {
        frame = file_->reader().next();
      } catch (const Error& e) {
        throw Error(e.code(), config_.input.string() + ": " + e.what());
      }
    } else if (served_ < config_.frames.size()) {
      frame = config_.frames[served_];
    }
    if (frame) ++served_;
    return frame;
  }

 private:
  const BenchConfig& config_;
  std::unique_ptr<VideoFile> file_;
  std::size_t served_ = 0;
};

class AttentionCache {
 public:
  AttentionCache(const AttentionSource& source, std::uint64_t seed)
      : source_(source), seed_(seed) {}

  const AttentionMap* get(std::size_t frame_index, const BlockGrid& grid) {
    if (!source_.available()) return nullptr;
    const std::size_t key_frame = source_.static_map ? 0 : frame_index;
    const auto key = std::make_pair(key_frame, grid.block_size());
    auto it = maps_.find(key);
    if (it == maps_.end()) {
      it = maps_.emplace(key, make(key_frame, grid)).first;
      if (!it->second.matches(grid)) {
        throw Error(ErrorCode::kDimension,
                    "attention map for frame " + std::to_string(frame_index) +
                        " is " + std::to_string(it->second.cols()) + "x" +
                        std::to_string(it->second.rows()) + " (b=" +
                        std::to_string(it->second.block_size()) +
                        ") but the frame grid is " + std::to_string(grid.cols()) +
                        "x" + std::to_string(grid.rows()) + " (b=" +
                        std::to_string(grid.block_size()) + ")");
      }
    }
    return &it->second;
  }

  // Keep only maps that later frames may still need.
  void release_before(std::size_t frame_index) {
    if (source_.static_map) return;
    for (auto it = maps_.begin(); it != maps_.end();) {
      it = it->first.first < frame_index ? maps_.erase(it) : std::next(it);
    }
  }

 private:
  AttentionMap make(std::size_t frame_index, const BlockGrid& grid) const {
    switch (source_.kind) {
      case AttentionSource::Kind::kSynthetic:
        return synthetic_attention(source_.synthetic, grid.cols(), grid.rows(),
                                   grid.block_size(), seed_, frame_index);
      case AttentionSource::Kind::kFiles:
        return load_attention_map(source_.static_map
                                      ? source_.path
                                      : source_.path / attention_filename(frame_index));
      case AttentionSource::Kind::kProvider:
        return source_.provider(frame_index, grid);
      case AttentionSource::Kind::kNone:
        break;
    }
    throw Error(ErrorCode::kConfig, "no attention source configured");
  }

  const AttentionSource& source_;
  std::uint64_t seed_;
  std::map<std::pair<std::size_t, int>, AttentionMap> maps_;
};

std::string format_number(double v, int decimals) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  return buf;
}

}  // namespace

void BenchConfig::validate() const {
  if (engines.empty()) {
    throw Error(ErrorCode::kConfig, "at least one engine is required");
  }
  if (repetitions < 1) {
    throw Error(ErrorCode::kConfig, "repetitions must be >= 1");
  }
  if (frame_count < 2) {
    throw Error(ErrorCode::kConfig, "at least two frames are needed for one frame pair");
  }
  if (block_sizes.empty() || search_ranges.empty()) {
    throw Error(ErrorCode::kConfig, "block size and search range lists must be non-empty");
  }
  for (int b : block_sizes) SearchParams{b, 1}.validate();
  for (int p : search_ranges) SearchParams{16, p}.validate();
  policy.validate();
  for (EngineKind e : engines) {
    if (e == EngineKind::kFastMe && !attention.available()) {
      throw Error(ErrorCode::kConfig, "engine fastme needs an attention source (--attn)");
    }
  }
  if (attention.kind == AttentionSource::Kind::kProvider && !attention.provider) {
    throw Error(ErrorCode::kConfig, "attention provider is empty");
  }
  if (frames.empty() && input.empty()) {
    throw Error(ErrorCode::kConfig, "no input sequence given");
  }
}

std::string BenchRow::resolution() const {
  return std::to_string(width) + "x" + std::to_string(height);
}

std::vector<BenchRow> run_benchmark(const BenchConfig& config) {
  config.validate();

  std::vector<RunState> runs;
  for (int b : config.block_sizes) {
    for (int p : config.search_ranges) {
      for (EngineKind e : config.engines) {
        EngineConfig engine{e, config.policy};
        if (e == EngineKind::kFastMe) engine.policy.rule = StoppingRule::kFastMe;
        for (int rep = 0; rep < config.repetitions; ++rep) {
          runs.emplace_back(e, b, p,
                                  SequenceEstimator(engine, SearchParams{b, p},
                                                    EstimateOptions{config.jobs}));
        }
      }
    }
  }

  FrameFeed feed(config);
  AttentionCache attention(config.attention, config.seed);
  std::optional<LumaPlane> reference = feed.next();
  if (!reference) {
    throw Error(ErrorCode::kIo, "input sequence has no frames");
  }
  int width = reference->width(), height = reference->height();
  std::size_t frame_index = 0;
  while (auto current = feed.next()) {
    ++frame_index;
    for (RunState& run : runs) {
      const BlockGrid grid(width, height, run.block_size);
      const AttentionMap* attn = attention.get(frame_index, grid);
      const auto t0 = std::chrono::steady_clock::now();
      const MotionField field = run.estimator.estimate(
          *current, *reference, run.engine == EngineKind::kFastMe ? attn : nullptr);
      run.seconds += std::chrono::duration<double>(
                         std::chrono::steady_clock::now() - t0).count();

      run.sad += static_cast<double>(field.total_sad());
      run.comparisons += static_cast<double>(field.total_comparisons());
      const LumaPlane predicted = motion_compensate(*reference, field);
      run.squared_error += sum_squared_error(*current, predicted);
      run.pixels += current->samples().size();
      if (attn) {
        const CoverageCounts c =
            coverage_counts(field, *attn, config.scs_fraction, config.scs_mode);
        run.coverage.hits += c.hits;
        run.coverage.denominator += c.denominator;
      }
      run.blocks += field.stats.size();
      for (const auto& s : field.stats) run.early_stops += s.stopping_step ? 1 : 0;
      ++run.pairs;
    }
    attention.release_before(frame_index + 1);
    reference = std::move(current);
  }
  if (frame_index == 0) {
    throw Error(ErrorCode::kIo, "input sequence has a single frame; need a pair");
  }

  // Repetitions collapse into one row per engine/parameter combination.
  std::vector<BenchRow> rows;
  for (std::size_t i = 0; i < runs.size(); i += static_cast<std::size_t>(config.repetitions)) {
    BenchRow row;
    row.sequence = config.sequence_name;
    row.width = width;
    row.height = height;
    row.engine = engine_name(runs[i].engine);
    row.block_size = runs[i].block_size;
    row.search_range = runs[i].search_range;
    double seconds = 0, sad_sum = 0, cmp = 0;
    std::uint64_t sq = 0, px = 0, blocks = 0, early = 0;
    CoverageCounts cov;
    std::size_t pairs = 0;
    for (int r = 0; r < config.repetitions; ++r) {
      const RunState& run = runs[i + static_cast<std::size_t>(r)];
      seconds += run.seconds;
      sad_sum += run.sad;
      cmp += run.comparisons;
      sq += run.squared_error;
      px += run.pixels;
      cov.hits += run.coverage.hits;
      cov.denominator += run.coverage.denominator;
      blocks += run.blocks;
      early += run.early_stops;
      pairs += run.pairs;
    }
    const double n = static_cast<double>(pairs);
    row.frame_pairs = runs[i].pairs;
    row.mean_time_s = seconds / n;
    row.mean_sad = sad_sum / n;
    row.mean_comparisons = cmp / n;
    row.psnr_db = psnr_from_mse(static_cast<double>(sq) / static_cast<double>(px));
    if (config.attention.available()) {
      row.scs_pct = cov.percent();
      row.scs_no_motion = cov.denominator == 0;
    }
    row.early_stop_fraction =
        blocks == 0 ? 0.0 : static_cast<double>(early) / static_cast<double>(blocks);
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_csv(std::ostream& out, std::span<const BenchRow> rows) {
  out << kCsvHeader << '\n';
  for (const BenchRow& r : rows) {
    out << r.sequence << ',' << r.resolution() << ',' << r.engine << ','
        << r.block_size << ',' << r.search_range << ','
        << format_number(r.mean_time_s, 6) << ',' << format_number(r.mean_sad, 3)
        << ',' << format_number(r.mean_comparisons, 3) << ','
        << format_number(r.psnr_db, 4) << ','
        << (r.scs_pct ? format_number(*r.scs_pct, 3) : std::string("nan")) << '\n';
  }
}

std::string format_csv(std::span<const BenchRow> rows) {
  std::ostringstream out;
  write_csv(out, rows);
  return out.str();
}

CdfTable export_cdf_data(const SadSampleSet& set, std::span<const double> quantiles) {
  if (set.empty()) {
    throw Error(ErrorCode::kPrecondition, "CDF export needs at least one sample");
  }
  CdfTable table;
  const auto& sorted = set.sorted();
  const double n = static_cast<double>(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    // Emit at the last copy of each value so F includes all ties.
    if (i + 1 < sorted.size() && sorted[i + 1] == sorted[i]) continue;
    table.points.push_back({sorted[i], static_cast<double>(i + 1) / n});
  }
  for (double q : quantiles) {
    if (!(q > 0.0 && q <= 1.0)) {
      throw Error(ErrorCode::kPrecondition, "quantiles must be in (0,1]");
    }
    // Order statistic of rank ceil(q n); the tolerance absorbs 0.1 * 100
    // rounding up to 10.000000000000002.
    auto rank = static_cast<std::size_t>(std::ceil(q * n - 1e-9));
    rank = std::clamp<std::size_t>(rank, 1, sorted.size());
    table.marks.push_back({q, sorted[rank - 1]});
  }
  return table;
}

void write_cdf_tsv(std::ostream& out, const CdfTable& table) {
  out << "y\tF\n";
  char buf[96];
  for (const CdfPoint& p : table.points) {
    std::snprintf(buf, sizeof(buf), "%.10g\t%.10g\n", p.y, p.F);
    out << buf;
  }
}

}  // namespace fastme
