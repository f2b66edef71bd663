#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "fastme/bench.hpp"
#include "fastme/synthetic_video.hpp"
#include "test_support.hpp"

using namespace fastme;
using fastme::testing::error_code_of;

namespace {

BenchConfig small_config() {
  BenchConfig c;
  c.sequence_name = "clip";
  c.frames = synth::talking_head_sequence(4, 2, 176, 144);
  c.frame_count = 4;
  c.engines = {EngineKind::kFullSearch, EngineKind::kThreeStep, EngineKind::kDiamond,
               EngineKind::kAdaptiveMe, EngineKind::kFastMe};
  c.attention.kind = AttentionSource::Kind::kSynthetic;
  c.attention.synthetic = parse_synthetic_kind("gaussian");
  return c;
}

// Everything but the time column.
std::string metric_columns(const std::string& csv) {
  std::istringstream in(csv);
  std::ostringstream out;
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i != 5) out << cells[i] << ';';
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace

TEST(BenchConfig, Validation) {
  BenchConfig c = small_config();
  EXPECT_NO_THROW(c.validate());
  c.engines.clear();
  EXPECT_EQ(error_code_of([&] { c.validate(); }), ErrorCode::kConfig);
  c = small_config();
  c.repetitions = 0;
  EXPECT_EQ(error_code_of([&] { c.validate(); }), ErrorCode::kConfig);
  c = small_config();
  c.attention = {};
  try {
    c.validate();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kConfig);
    EXPECT_NE(std::string(e.what()).find("--attn"), std::string::npos);
  }
  c = small_config();
  c.block_sizes = {12};
  EXPECT_EQ(error_code_of([&] { c.validate(); }), ErrorCode::kConfig);
}

TEST(RunBenchmark, OneRowPerEngineAndSweepPoint) {
  BenchConfig c = small_config();
  c.block_sizes = {8, 16};
  c.search_ranges = {7, 15};
  const auto rows = run_benchmark(c);
  ASSERT_EQ(rows.size(), 2u * 2u * 5u);
  for (const auto& r : rows) {
    EXPECT_EQ(r.frame_pairs, 3u);
    EXPECT_EQ(r.resolution(), "176x144");
    EXPECT_GE(r.mean_sad, 0.0);
    EXPECT_GT(r.mean_comparisons, 0.0);
    ASSERT_TRUE(r.scs_pct);
    EXPECT_GE(*r.scs_pct, 0.0);
    EXPECT_LE(*r.scs_pct, 100.0);
  }
}

TEST(RunBenchmark, FullSearchHasLowestMeanSad) {
  const auto rows = run_benchmark(small_config());
  ASSERT_EQ(rows.front().engine, "fs");
  for (const auto& r : rows) EXPECT_LE(rows.front().mean_sad, r.mean_sad) << r.engine;
  EXPECT_DOUBLE_EQ(rows.front().mean_comparisons,
                   static_cast<double>(
                       // 11 x 9 grid; interior windows are 225
                       [] {
                         std::size_t t = 0;
                         const BlockGrid g(176, 144, 16);
                         for (std::size_t k = 0; k < g.size(); ++k) {
                           t += window_bounds(g.origin_of(k), SearchParams{16, 7}, 176, 144)
                                    .count();
                         }
                         return t;
                       }()));
}

TEST(RunBenchmark, RepetitionsAndJobsDoNotChangeMetrics) {
  BenchConfig a = small_config();
  BenchConfig b = small_config();
  b.repetitions = 2;
  b.jobs = 3;
  EXPECT_EQ(metric_columns(format_csv(run_benchmark(a))),
            metric_columns(format_csv(run_benchmark(b))));
}

TEST(RunBenchmark, NoAttentionGivesNanScs) {
  BenchConfig c = small_config();
  c.engines = {EngineKind::kFullSearch};
  c.attention = {};
  const auto rows = run_benchmark(c);
  EXPECT_FALSE(rows[0].scs_pct);
  const std::string csv = format_csv(rows);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), kCsvHeader);
  EXPECT_NE(csv.find(",nan\n"), std::string::npos);
}

TEST(RunBenchmark, IdenticalFramesGiveInfinitePsnr) {
  BenchConfig c = small_config();
  c.frames = {c.frames[0], c.frames[0], c.frames[0]};
  c.engines = {EngineKind::kFullSearch};
  const auto rows = run_benchmark(c);
  EXPECT_EQ(rows[0].psnr_db, kPsnrInfinite);
  EXPECT_NE(format_csv(rows).find(",inf,"), std::string::npos);
}

TEST(RunBenchmark, ReadsVideoAndPerFrameAttentionFiles) {
  fastme::testing::TempDir dir("bench");
  const auto frames = synth::talking_head_sequence(3, 4, 96, 64);
  {
    std::ofstream out(dir / "clip.y4m", std::ios::binary);
    write_y4m(out, frames);
  }
  std::filesystem::create_directories(dir / "attn");
  for (std::size_t i = 0; i < 3; ++i) {
    save_attention_map(synthetic_attention(parse_synthetic_kind("gaussian"), 6, 4, 16, 0, i),
                       dir / "attn" / attention_filename(i));
  }
  BenchConfig c;
  c.input = dir / "clip.y4m";
  c.engines = {EngineKind::kFastMe};
  c.attention.kind = AttentionSource::Kind::kFiles;
  c.attention.path = dir / "attn";
  const auto rows = run_benchmark(c);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].frame_pairs, 2u);

  // A missing per-frame file surfaces with its name.
  std::filesystem::remove(dir / "attn" / attention_filename(2));
  try {
    run_benchmark(c);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIo);
    EXPECT_NE(std::string(e.what()).find(attention_filename(2)), std::string::npos);
  }
}

TEST(RunBenchmark, ProviderAttentionAndStaticMaps) {
  BenchConfig c = small_config();
  c.engines = {EngineKind::kFastMe};
  std::vector<std::size_t> requested;
  c.attention.kind = AttentionSource::Kind::kProvider;
  c.attention.provider = [&](std::size_t frame, const BlockGrid& g) {
    requested.push_back(frame);
    return AttentionMap(g.cols(), g.rows(), g.block_size(),
                        std::vector<double>(g.size(), 0.5), "provider");
  };
  run_benchmark(c);
  EXPECT_EQ(requested, (std::vector<std::size_t>{1, 2, 3}));

  requested.clear();
  c.attention.static_map = true;
  run_benchmark(c);
  EXPECT_EQ(requested, (std::vector<std::size_t>{0}));
}

TEST(RunBenchmark, GridMismatchIsReported) {
  BenchConfig c = small_config();
  c.engines = {EngineKind::kFastMe};
  c.attention.kind = AttentionSource::Kind::kProvider;
  c.attention.provider = [](std::size_t, const BlockGrid&) {
    return AttentionMap(2, 2, 16, {0, 0, 0, 0}, "wrong");
  };
  EXPECT_EQ(error_code_of([&] { run_benchmark(c); }), ErrorCode::kDimension);
}

TEST(RunBenchmark, VideoErrorsCarryFileContext) {
  fastme::testing::TempDir dir("bench_err");
  BenchConfig c;
  c.engines = {EngineKind::kFullSearch};
  c.input = dir / "missing.y4m";
  EXPECT_EQ(error_code_of([&] { run_benchmark(c); }), ErrorCode::kIo);

  {
    std::ostringstream bytes;
    write_y4m(bytes, synth::talking_head_sequence(3, 1, 32, 32));
    std::string s = bytes.str();
    s.resize(s.size() - 10);
    std::ofstream(dir / "cut.y4m", std::ios::binary) << s;
  }
  c.input = dir / "cut.y4m";
  try {
    run_benchmark(c);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTruncation);
    EXPECT_NE(std::string(e.what()).find("cut.y4m"), std::string::npos);
  }
}

TEST(CdfExport, OrderStatisticMarks) {
  SadSampleSet s;
  for (int i = 1; i <= 100; ++i) s.insert(i);
  const std::vector<double> q{0.1, 0.5, 1.0, 0.001};
  const CdfTable t = export_cdf_data(s, q);
  ASSERT_EQ(t.points.size(), 100u);
  EXPECT_DOUBLE_EQ(t.marks[0].threshold, 10.0);
  EXPECT_DOUBLE_EQ(t.marks[1].threshold, 50.0);
  EXPECT_DOUBLE_EQ(t.marks[2].threshold, 100.0);
  EXPECT_DOUBLE_EQ(t.marks[3].threshold, 1.0);
  for (std::size_t i = 1; i < t.points.size(); ++i) {
    EXPECT_GT(t.points[i].y, t.points[i - 1].y);
    EXPECT_GE(t.points[i].F, t.points[i - 1].F);
  }
  EXPECT_DOUBLE_EQ(t.points.back().F, 1.0);
}

TEST(CdfExport, MarkMatchesSmallestValueReachingQuantile) {
  std::mt19937_64 gen(8);
  for (int c = 0; c < 200; ++c) {
    SadSampleSet s;
    const std::size_t n = 1 + gen() % 50;
    for (std::size_t i = 0; i < n; ++i) s.insert(static_cast<double>(gen() % 20));
    const double q = static_cast<double>(1 + gen() % 100) / 100.0;
    const std::vector<double> qs{q};
    const double mark = export_cdf_data(s, qs).marks[0].threshold;
    // The mark is a sample whose CDF reaches q while every smaller sample's
    // CDF stays below it.
    EXPECT_GE(empirical_cdf(s, mark) + 1e-12, q);
    for (double v : s.sorted()) {
      if (v < mark) {
        EXPECT_LT(empirical_cdf(s, v), q + 1e-12);
      }
    }
  }
}

TEST(CdfExport, ConstantSamplesAndErrors) {
  const SadSampleSet s(std::vector<double>(5, 3.0));
  const CdfTable t = export_cdf_data(s, std::vector<double>{0.5});
  ASSERT_EQ(t.points.size(), 1u);
  EXPECT_DOUBLE_EQ(t.points[0].y, 3.0);
  EXPECT_DOUBLE_EQ(t.points[0].F, 1.0);
  EXPECT_EQ(error_code_of([] { export_cdf_data(SadSampleSet{}, std::vector<double>{0.5}); }),
            ErrorCode::kPrecondition);
  EXPECT_EQ(error_code_of([&] { export_cdf_data(s, std::vector<double>{0.0}); }),
            ErrorCode::kPrecondition);
  std::ostringstream out;
  write_cdf_tsv(out, t);
  EXPECT_EQ(out.str(), "y\tF\n3\t1\n");
}
