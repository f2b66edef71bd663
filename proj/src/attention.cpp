#include "fastme/attention.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "json.hpp"

namespace fastme {
namespace {

using nlohmann::json;

constexpr int kFormatVersion = 1;

template <typename T>
T require_field(const json& j, const char* key) {
  if (!j.contains(key)) {
    throw Error(ErrorCode::kFormat,
                std::string("attention map lacks field '") + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorCode::kFormat,
                std::string("attention map field '") + key + "' has the wrong type");
  }
}

double parse_double(const std::string& s, const std::string& context) {
  std::istringstream in(s);
  in.imbue(std::locale::classic());
  double v = 0.0;
  if (!(in >> v) || !in.eof()) {
    throw Error(ErrorCode::kConfig, "invalid number '" + s + "' in " + context);
  }
  return v;
}

}  // namespace

AttentionMap::AttentionMap(int cols, int rows, int block_size,
                           std::vector<double> scores, std::string source,
                           std::size_t frame_index)
    : cols_(cols), rows_(rows), block_size_(block_size),
      scores_(std::move(scores)), source_(std::move(source)),
      frame_index_(frame_index) {
  if (cols <= 0 || rows <= 0 || block_size <= 0) {
    throw Error(ErrorCode::kFormat, "attention grid dimensions must be positive");
  }
  const auto expected = static_cast<std::size_t>(cols) * rows;
  if (scores_.size() != expected) {
    throw Error(ErrorCode::kFormat,
                "attention map declares " + std::to_string(cols) + "x" +
                    std::to_string(rows) + " blocks but has " +
                    std::to_string(scores_.size()) + " scores");
  }
  for (std::size_t k = 0; k < scores_.size(); ++k) {
    const double a = scores_[k];
    if (!(a >= 0.0 && a <= 1.0)) {
      throw Error(ErrorCode::kValidation,
                  "attention score " + std::to_string(a) + " at block " +
                      std::to_string(k) + " is outside [0,1]");
    }
  }
}

AttentionMap parse_attention_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kFormat, std::string("attention map is not JSON: ") + e.what());
  }
  if (!j.is_object()) {
    throw Error(ErrorCode::kFormat, "attention map must be a JSON object");
  }
  const int version = require_field<int>(j, "format_version");
  if (version != kFormatVersion) {
    throw Error(ErrorCode::kFormat,
                "unsupported attention format_version " + std::to_string(version));
  }
  const int block_size = require_field<int>(j, "block_size");
  const int cols = require_field<int>(j, "cols");
  const int rows = require_field<int>(j, "rows");
  auto scores = require_field<std::vector<double>>(j, "scores");
  std::string source = j.value("source", std::string("unknown"));
  const auto frame_index = j.value("frame_index", std::size_t{0});
  return AttentionMap(cols, rows, block_size, std::move(scores),
                      std::move(source), frame_index);
}

AttentionMap load_attention_map(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kIo, "cannot open attention map '" + path.string() + "'");
  }
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_attention_json(buf.str());
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

std::string to_attention_json(const AttentionMap& map) {
  json j;
  j["format_version"] = kFormatVersion;
  j["block_size"] = map.block_size();
  j["cols"] = map.cols();
  j["rows"] = map.rows();
  j["source"] = map.source();
  j["frame_index"] = map.frame_index();
  j["scores"] = map.scores();
  return j.dump();
}

void save_attention_map(const AttentionMap& map,
                        const std::filesystem::path& path) {
  std::ofstream out(path);
  out << to_attention_json(map) << '\n';
  if (!out) {
    throw Error(ErrorCode::kIo, "cannot write attention map '" + path.string() + "'");
  }
}

std::string attention_filename(std::size_t frame_index) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "frame_%06zu.attn.json", frame_index);
  return buf;
}

AttentionMap aggregate_to_blocks(const PixelSaliency& saliency, int block_size,
                                 std::string source) {
  if (saliency.values.size() !=
      static_cast<std::size_t>(std::max(saliency.width, 0)) *
          static_cast<std::size_t>(std::max(saliency.height, 0))) {
    throw Error(ErrorCode::kDimension, "saliency value count does not match its dimensions");
  }
  const BlockGrid grid(saliency.width, saliency.height, block_size);
  std::vector<double> scores(grid.size());
  const double area = static_cast<double>(block_size) * block_size;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const PixelPos o = grid.origin_of(k);
    double sum = 0.0;
    for (int y = o.y; y < o.y + block_size; ++y) {
      for (int x = o.x; x < o.x + block_size; ++x) {
        const double v =
            saliency.values[static_cast<std::size_t>(y) * saliency.width + x];
        if (!(v >= 0.0 && v <= 1.0)) {
          throw Error(ErrorCode::kValidation,
                      "pixel saliency " + std::to_string(v) + " outside [0,1]");
        }
        sum += v;
      }
    }
    scores[k] = std::clamp(sum / area, 0.0, 1.0);
  }
  return AttentionMap(grid.cols(), grid.rows(), block_size, std::move(scores),
                      std::move(source));
}

SyntheticAttentionSpec parse_synthetic_kind(const std::string& text) {
  SyntheticAttentionSpec spec;
  const auto colon = text.find(':');
  const std::string name = text.substr(0, colon);
  const std::string args = colon == std::string::npos ? "" : text.substr(colon + 1);
  const std::string context = "synthetic attention kind '" + text + "'";
  if (name == "uniform") {
    spec.kind = SyntheticAttentionSpec::Kind::kUniform;
    spec.level = args.empty() ? 0.5 : parse_double(args, context);
    if (!(spec.level >= 0.0 && spec.level <= 1.0)) {
      throw Error(ErrorCode::kConfig, "uniform attention level must be in [0,1]");
    }
  } else if (name == "gaussian") {
    spec.kind = SyntheticAttentionSpec::Kind::kGaussianBlob;
    if (!args.empty()) {
      std::vector<double> parts;
      std::stringstream ss(args);
      std::string item;
      while (std::getline(ss, item, ',')) parts.push_back(parse_double(item, context));
      if (parts.size() != 3) {
        throw Error(ErrorCode::kConfig, "gaussian attention takes cx,cy,sigma");
      }
      spec.center_col = parts[0];
      spec.center_row = parts[1];
      spec.sigma = parts[2];
    }
  } else if (name == "checkerboard" && args.empty()) {
    spec.kind = SyntheticAttentionSpec::Kind::kCheckerboard;
  } else if (name == "random" && args.empty()) {
    spec.kind = SyntheticAttentionSpec::Kind::kRandom;
  } else {
    throw Error(ErrorCode::kConfig, "unknown " + context);
  }
  return spec;
}

std::string to_string(const SyntheticAttentionSpec& spec) {
  std::ostringstream out;
  out.imbue(std::locale::classic());
  switch (spec.kind) {
    case SyntheticAttentionSpec::Kind::kUniform:
      out << "uniform:" << spec.level;
      break;
    case SyntheticAttentionSpec::Kind::kGaussianBlob:
      out << "gaussian";
      break;
    case SyntheticAttentionSpec::Kind::kCheckerboard:
      out << "checkerboard";
      break;
    case SyntheticAttentionSpec::Kind::kRandom:
      out << "random";
      break;
  }
  return out.str();
}

AttentionMap synthetic_attention(const SyntheticAttentionSpec& spec, int cols,
                                 int rows, int block_size, std::uint64_t seed,
                                 std::size_t frame_index) {
  if (cols <= 0 || rows <= 0) {
    throw Error(ErrorCode::kConfig, "synthetic attention needs a non-empty grid");
  }
  std::vector<double> scores(static_cast<std::size_t>(cols) * rows);
  switch (spec.kind) {
    case SyntheticAttentionSpec::Kind::kUniform:
      std::fill(scores.begin(), scores.end(), spec.level);
      break;
    case SyntheticAttentionSpec::Kind::kGaussianBlob: {
      const double cx = spec.center_col < 0 ? (cols - 1) / 2.0 : spec.center_col;
      const double cy = spec.center_row < 0 ? (rows - 1) / 2.0 : spec.center_row;
      const double sigma =
          spec.sigma > 0 ? spec.sigma : std::max(cols, rows) / 6.0;
      for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
          const double d2 = (c - cx) * (c - cx) + (r - cy) * (r - cy);
          scores[static_cast<std::size_t>(r) * cols + c] =
              std::exp(-d2 / (2.0 * sigma * sigma));
        }
      }
      break;
    }
    case SyntheticAttentionSpec::Kind::kCheckerboard:
      for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
          scores[static_cast<std::size_t>(r) * cols + c] = (r + c) % 2 == 0 ? 1.0 : 0.0;
        }
      }
      break;
    case SyntheticAttentionSpec::Kind::kRandom: {
      // Raw engine output is specified by the standard; distributions are not.
      std::mt19937_64 gen(seed ^ (0x9E3779B97F4A7C15ull * (frame_index + 1)));
      for (auto& s : scores) s = static_cast<double>(gen() >> 11) * 0x1.0p-53;
      break;
    }
  }
  return AttentionMap(cols, rows, block_size, std::move(scores),
                      "synthetic:" + to_string(spec), frame_index);
}

std::vector<std::size_t> top_fraction_mask(const AttentionMap& map,
                                           double fraction) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw Error(ErrorCode::kPrecondition, "top fraction must be in (0,1]");
  }
  const std::size_t n = map.size();
  // Guard against 0.2 * 10 landing a hair above 2.
  auto count = static_cast<std::size_t>(
      std::ceil(fraction * static_cast<double>(n) - 1e-9));
  count = std::min(std::max<std::size_t>(count, 1), n);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return map.score(a) > map.score(b);
  });
  order.resize(count);
  std::sort(order.begin(), order.end());
  return order;
}

}  // namespace fastme
