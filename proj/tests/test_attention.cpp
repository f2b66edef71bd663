#include <gtest/gtest.h>

#include <algorithm>
#include <fstream>

#include "fastme/attention.hpp"
#include "json.hpp"
#include "test_support.hpp"

using namespace fastme;
using fastme::testing::error_code_of;

TEST(AttentionMap, ValidatesShapeAndRange) {
  EXPECT_EQ(error_code_of([] { AttentionMap(2, 2, 16, {0.1, 0.2, 0.3}, "t"); }),
            ErrorCode::kFormat);
  EXPECT_EQ(error_code_of([] { AttentionMap(2, 1, 16, {0.1, 1.5}, "t"); }),
            ErrorCode::kValidation);
  EXPECT_EQ(error_code_of([] { AttentionMap(2, 1, 16, {-0.01, 0.5}, "t"); }),
            ErrorCode::kValidation);
  const AttentionMap m(3, 2, 16, {0, 0.1, 0.2, 0.3, 0.4, 0.5}, "t");
  EXPECT_DOUBLE_EQ(m.score(1, 1), 0.4);
  EXPECT_DOUBLE_EQ(m.score(5), 0.5);
  EXPECT_TRUE(m.matches(BlockGrid(48, 32, 16)));
  EXPECT_FALSE(m.matches(BlockGrid(48, 32, 8)));
}

TEST(AttentionJson, RoundTripThroughFile) {
  fastme::testing::TempDir dir("attn");
  const AttentionMap m(2, 2, 16, {0.0, 0.25, 0.5, 1.0}, "vit", 7);
  const auto path = dir / attention_filename(7);
  save_attention_map(m, path);
  const AttentionMap back = load_attention_map(path);
  EXPECT_EQ(back.cols(), 2);
  EXPECT_EQ(back.rows(), 2);
  EXPECT_EQ(back.block_size(), 16);
  EXPECT_EQ(back.scores(), m.scores());
  EXPECT_EQ(back.source(), "vit");
  EXPECT_EQ(back.frame_index(), 7u);
}

TEST(AttentionJson, SchemaFields) {
  const auto j = nlohmann::json::parse(
      to_attention_json(AttentionMap(1, 2, 8, {0.5, 0.75}, "synthetic:uniform", 3)));
  EXPECT_EQ(j["format_version"], 1);
  EXPECT_EQ(j["cols"], 1);
  EXPECT_EQ(j["rows"], 2);
  EXPECT_EQ(j["block_size"], 8);
  EXPECT_EQ(j["scores"].size(), 2u);
  EXPECT_EQ(j["source"], "synthetic:uniform");
  EXPECT_EQ(j["frame_index"], 3);
}

TEST(AttentionJson, OptionalFieldsMayBeAbsent) {
  const AttentionMap m = parse_attention_json(
      R"({"format_version":1,"cols":1,"rows":1,"block_size":16,"scores":[0.3]})");
  EXPECT_DOUBLE_EQ(m.score(0), 0.3);
}

TEST(AttentionJson, Rejections) {
  auto code = [](const std::string& text) {
    return error_code_of([&] { parse_attention_json(text); });
  };
  EXPECT_EQ(code("not json"), ErrorCode::kFormat);
  EXPECT_EQ(code("[1,2]"), ErrorCode::kFormat);
  EXPECT_EQ(code(R"({"format_version":2,"cols":1,"rows":1,"block_size":16,"scores":[0]})"),
            ErrorCode::kFormat);
  EXPECT_EQ(code(R"({"format_version":1,"rows":1,"block_size":16,"scores":[0]})"),
            ErrorCode::kFormat);
  EXPECT_EQ(code(R"({"format_version":1,"cols":2,"rows":1,"block_size":16,"scores":[0]})"),
            ErrorCode::kFormat);
  EXPECT_EQ(code(R"({"format_version":1,"cols":1,"rows":1,"block_size":16,"scores":[2]})"),
            ErrorCode::kValidation);
  EXPECT_EQ(code(R"({"format_version":1,"cols":1,"rows":1,"block_size":16,"scores":"x"})"),
            ErrorCode::kFormat);
}

TEST(AttentionJson, LoadErrorNamesThePath) {
  fastme::testing::TempDir dir("attn_bad");
  const auto path = dir / "broken.attn.json";
  std::ofstream(path) << "{";
  try {
    load_attention_map(path);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kFormat);
    EXPECT_NE(std::string(e.what()).find("broken.attn.json"), std::string::npos);
  }
  EXPECT_EQ(error_code_of([&] { load_attention_map(dir / "nope.json"); }), ErrorCode::kIo);
}

TEST(AttentionJson, Filename) {
  EXPECT_EQ(attention_filename(0), "frame_000000.attn.json");
  EXPECT_EQ(attention_filename(42), "frame_000042.attn.json");
}

TEST(AggregateToBlocks, MeanPerBlock) {
  PixelSaliency s{4, 2, {0, 1, 0.5, 0.5, 1, 0, 0.5, 0.5}};
  const AttentionMap m = aggregate_to_blocks(s, 2);
  ASSERT_EQ(m.cols(), 2);
  ASSERT_EQ(m.rows(), 1);
  EXPECT_DOUBLE_EQ(m.score(0), 0.5);
  EXPECT_DOUBLE_EQ(m.score(1), 0.5);
}

TEST(AggregateToBlocks, DropsRemainderAndValidates) {
  PixelSaliency s{5, 3, std::vector<double>(15, 0.2)};
  s.values[4] = 1.0;  // column 4 lies outside the 2x2 grid
  const AttentionMap m = aggregate_to_blocks(s, 2);
  EXPECT_EQ(m.cols(), 2);
  EXPECT_EQ(m.rows(), 1);
  for (double v : m.scores()) EXPECT_NEAR(v, 0.2, 1e-12);
  s.values[0] = 1.2;
  EXPECT_EQ(error_code_of([&] { aggregate_to_blocks(s, 2); }), ErrorCode::kValidation);
}

TEST(SyntheticKind, Parsing) {
  EXPECT_DOUBLE_EQ(parse_synthetic_kind("uniform:0.25").level, 0.25);
  EXPECT_EQ(parse_synthetic_kind("gaussian").kind, SyntheticAttentionSpec::Kind::kGaussianBlob);
  const auto g = parse_synthetic_kind("gaussian:3,4,2.5");
  EXPECT_DOUBLE_EQ(g.center_col, 3);
  EXPECT_DOUBLE_EQ(g.center_row, 4);
  EXPECT_DOUBLE_EQ(g.sigma, 2.5);
  EXPECT_EQ(parse_synthetic_kind("checkerboard").kind,
            SyntheticAttentionSpec::Kind::kCheckerboard);
  for (const char* bad : {"bogus", "uniform:2", "uniform:x", "gaussian:1,2", ""}) {
    EXPECT_EQ(error_code_of([&] { parse_synthetic_kind(bad); }), ErrorCode::kConfig) << bad;
  }
}

TEST(SyntheticAttention, UniformIsConstant) {
  const auto m = synthetic_attention(parse_synthetic_kind("uniform:0.5"), 22, 18, 16, 0);
  EXPECT_EQ(m.size(), 396u);
  for (double v : m.scores()) EXPECT_DOUBLE_EQ(v, 0.5);
  EXPECT_EQ(m.source(), "synthetic:uniform:0.5");
}

TEST(SyntheticAttention, GaussianPeaksAtCentre) {
  const auto m = synthetic_attention(parse_synthetic_kind("gaussian:5,3,2"), 12, 8, 16, 0);
  const auto peak = std::max_element(m.scores().begin(), m.scores().end()) - m.scores().begin();
  EXPECT_EQ(peak, 3 * 12 + 5);
  EXPECT_NEAR(m.score(5, 3), 1.0, 1e-12);
  EXPECT_GT(m.score(5, 3), m.score(7, 3));
  EXPECT_NEAR(m.score(7, 3), m.score(3, 3), 1e-12);
  for (double v : m.scores()) {
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
}

TEST(SyntheticAttention, CheckerboardAndRandom) {
  const auto c = synthetic_attention(parse_synthetic_kind("checkerboard"), 4, 3, 16, 0);
  EXPECT_DOUBLE_EQ(c.score(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(c.score(1, 0), 0.0);
  EXPECT_DOUBLE_EQ(c.score(1, 1), 1.0);
  const auto spec = parse_synthetic_kind("random");
  const auto r1 = synthetic_attention(spec, 6, 5, 16, 9, 2);
  const auto r2 = synthetic_attention(spec, 6, 5, 16, 9, 2);
  const auto r3 = synthetic_attention(spec, 6, 5, 16, 9, 3);
  EXPECT_EQ(r1.scores(), r2.scores());
  EXPECT_NE(r1.scores(), r3.scores());
}

TEST(TopFractionMask, CountAndTies) {
  const AttentionMap m(5, 2, 16, {0.1, 0.9, 0.5, 0.5, 0.2, 0.9, 0.0, 0.3, 0.4, 0.5}, "t");
  EXPECT_EQ(top_fraction_mask(m, 0.2), (std::vector<std::size_t>{1, 5}));
  // Three-way tie at 0.5 for the last slot goes to the lowest index.
  EXPECT_EQ(top_fraction_mask(m, 0.3), (std::vector<std::size_t>{1, 2, 5}));
  EXPECT_EQ(top_fraction_mask(m, 1.0).size(), 10u);
  // 396 blocks at 20%: ceil(79.2) = 80.
  const auto big = synthetic_attention(parse_synthetic_kind("random"), 22, 18, 16, 1);
  EXPECT_EQ(top_fraction_mask(big, 0.2).size(), 80u);
  EXPECT_EQ(error_code_of([&] { top_fraction_mask(m, 0.0); }), ErrorCode::kPrecondition);
}
