#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "fastme/attention.hpp"
#include "fastme/bench.hpp"
#include "fastme/error.hpp"
#include "fastme/metrics.hpp"
#include "fastme/search.hpp"
#include "fastme/stopping.hpp"
#include "fastme/synthetic_video.hpp"
#include "fastme/video_io.hpp"
#include "json.hpp"

namespace fastme::cli {
namespace {

namespace fs = std::filesystem;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EngineFlags {
  int block_size = 16;
  int search_range = 7;
  double alpha = 0.7;
  double delta0 = 0.05;
  double theta = 1.0;
  std::string theta_mode = "fit";
  std::string rule = "sad-threshold";
};

struct InputFlags {
  std::string path;
  std::string format = "y4m";
  int width = 0;
  int height = 0;
};

void add_policy_flags(CLI::App* app, EngineFlags& f) {
  app->add_option("--alpha", f.alpha, "FAST-ME distortion weight in [0,1]")
      ->capture_default_str();
  app->add_option("--delta0", f.delta0, "Base stopping probability in (0,1)")
      ->capture_default_str();
  app->add_option("--theta", f.theta,
                  "Exponential rate; the starting value when --theta-mode=fit")
      ->capture_default_str();
  app->add_option("--theta-mode", f.theta_mode, "fit (refit per frame pair) or fixed")
      ->check(CLI::IsMember({"fit", "fixed"}))
      ->capture_default_str();
  app->add_option("--rule", f.rule, "Adaptive ME stopping rule")
      ->check(CLI::IsMember({"sad-threshold", "empirical-cdf"}))
      ->capture_default_str();
}

void add_input_flags(CLI::App* app, InputFlags& f, bool required) {
  auto* opt = app->add_option("--input,-i", f.path, "Video file");
  if (required) opt->required();
  app->add_option("--format", f.format, "y4m, yuv420 or luma")
      ->check(CLI::IsMember({"y4m", "yuv420", "luma"}))
      ->capture_default_str();
  app->add_option("--width", f.width, "Frame width for raw formats");
  app->add_option("--height", f.height, "Frame height for raw formats");
}

StoppingPolicy make_policy(const EngineFlags& f) {
  StoppingPolicy p;
  p.alpha = f.alpha;
  p.delta0 = f.delta0;
  p.theta = f.theta;
  p.theta_mode = f.theta_mode == "fixed" ? ThetaMode::kFixed : ThetaMode::kFitFromData;
  p.rule = f.rule == "empirical-cdf" ? StoppingRule::kEmpiricalCdf
                                     : StoppingRule::kSadThreshold;
  if (!(p.alpha >= 0.0 && p.alpha <= 1.0)) throw ConfigError("--alpha must lie in [0,1]");
  if (!(p.delta0 > 0.0 && p.delta0 < 1.0)) throw ConfigError("--delta0 must lie in (0,1)");
  if (!(p.theta > 0.0)) throw ConfigError("--theta must be positive");
  return p;
}

VideoFormat make_format(const InputFlags& f) {
  const VideoFormat format = parse_video_format(f.format);
  if (format != VideoFormat::kY4m && (f.width <= 0 || f.height <= 0)) {
    throw ConfigError("--width and --height are required for --format " + f.format);
  }
  return format;
}

AttentionSource make_attention(const std::string& spec, bool static_map) {
  AttentionSource src;
  if (spec.empty()) return src;
  const std::string prefix = "synthetic:";
  if (spec.rfind(prefix, 0) == 0) {
    src.kind = AttentionSource::Kind::kSynthetic;
    try {
      src.synthetic = parse_synthetic_kind(spec.substr(prefix.size()));
    } catch (const Error& e) {
      throw ConfigError(std::string("--attn: ") + e.what());
    }
    return src;
  }
  std::error_code ec;
  if (fs::is_directory(spec, ec)) {
    src.kind = AttentionSource::Kind::kFiles;
    src.path = spec;
    src.static_map = static_map;
    if (static_map) {
      throw ConfigError("--static-attn needs --attn to name a single .attn.json file");
    }
  } else if (fs::is_regular_file(spec, ec)) {
    src.kind = AttentionSource::Kind::kFiles;
    src.path = spec;
    src.static_map = true;
  } else {
    throw ConfigError("--attn: '" + spec +
                      "' is neither synthetic:<kind> nor an existing file or directory");
  }
  return src;
}

unsigned resolve_jobs(int flag) {
  if (flag > 0) return static_cast<unsigned>(flag);
  if (const char* env = std::getenv("FASTME_JOBS"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v <= 0) {
      throw ConfigError(std::string("FASTME_JOBS must be a positive integer, got '") +
                        env + "'");
    }
    return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<EngineKind> parse_engines(const std::vector<std::string>& names) {
  std::vector<EngineKind> out;
  for (const std::string& n : names) {
    try {
      out.push_back(parse_engine(n));
    } catch (const Error&) {
      throw ConfigError("--engines: unknown engine '" + n +
                        "' (expected fs, tss, ds, adaptive or fastme)");
    }
  }
  return out;
}

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), pattern, v);
  return buf;
}

// bench ----------------------------------------------------------------------

struct BenchFlags {
  InputFlags input;
  EngineFlags engine;
  std::vector<std::string> engines{"fs", "tss", "ds", "adaptive"};
  std::vector<int> block_sizes{16};
  std::vector<int> search_ranges{7};
  std::size_t frames = 30;
  int repetitions = 1;
  std::uint64_t seed = 0;
  int jobs = 0;
  std::string attn;
  bool static_attn = false;
  std::string scs_denominator = "moving";
  std::string name;
  std::string output;
};

void add_bench(CLI::App& app, BenchFlags& f) {
  auto* sub = app.add_subcommand("bench", "Run engines over consecutive frame pairs and emit CSV");
  add_input_flags(sub, f.input, true);
  sub->add_option("--engines", f.engines, "Comma-separated: fs,tss,ds,adaptive,fastme")
      ->delimiter(',')
      ->capture_default_str();
  sub->add_option("--block-size,-b", f.block_sizes, "Block sizes to sweep (8,16,32)")
      ->delimiter(',')
      ->capture_default_str();
  sub->add_option("--search-range,-p", f.search_ranges, "Search ranges to sweep")
      ->delimiter(',')
      ->capture_default_str();
  sub->add_option("--frames", f.frames, "Frames to read (pairs = frames - 1)")
      ->capture_default_str();
  sub->add_option("--repetitions", f.repetitions, "Runs per configuration")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sub->add_option("--seed", f.seed, "Seed for synthetic attention")->capture_default_str();
  sub->add_option("--jobs,-j", f.jobs,
                  "Worker threads; falls back to FASTME_JOBS, then the core count");
  sub->add_option("--attn", f.attn,
                  "Attention source: synthetic:<kind>, a directory of per-frame "
                  ".attn.json files, or one .attn.json file used for every frame");
  sub->add_flag("--static-attn", f.static_attn, "Reuse a single map for all frames");
  sub->add_option("--scs-denominator", f.scs_denominator,
                  "moving (nonzero vectors) or all (every block)")
      ->check(CLI::IsMember({"moving", "all"}))
      ->capture_default_str();
  sub->add_option("--name", f.name, "Sequence name for the CSV (default: file stem)");
  sub->add_option("--output,-o", f.output, "CSV path; stdout when omitted");
  add_policy_flags(sub, f.engine);
}

int cmd_bench(const BenchFlags& f, std::ostream& out, std::ostream& err) {
  BenchConfig cfg;
  cfg.engines = parse_engines(f.engines);
  const bool wants_fastme =
      std::find(cfg.engines.begin(), cfg.engines.end(), EngineKind::kFastMe) != cfg.engines.end();
  if (wants_fastme && f.attn.empty()) {
    throw ConfigError("engine fastme needs an attention source: pass --attn");
  }
  cfg.policy = make_policy(f.engine);
  cfg.attention = make_attention(f.attn, f.static_attn);
  cfg.input = f.input.path;
  cfg.format = make_format(f.input);
  cfg.width = f.input.width;
  cfg.height = f.input.height;
  cfg.sequence_name = f.name.empty() ? fs::path(f.input.path).stem().string() : f.name;
  cfg.frame_count = f.frames;
  cfg.block_sizes = f.block_sizes;
  cfg.search_ranges = f.search_ranges;
  cfg.repetitions = f.repetitions;
  cfg.seed = f.seed;
  cfg.jobs = resolve_jobs(f.jobs);
  cfg.scs_mode = f.scs_denominator == "all" ? ScsDenominator::kAllBlocks
                                            : ScsDenominator::kNonzeroVectors;
  try {
    cfg.validate();
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }

  const std::vector<BenchRow> rows = run_benchmark(cfg);

  std::ostream* summary = &err;
  if (f.output.empty()) {
    write_csv(out, rows);
  } else {
    std::ofstream file(f.output);
    if (!file) throw Error(ErrorCode::kIo, "cannot write " + f.output);
    write_csv(file, rows);
    summary = &out;
  }
  std::map<std::pair<int, int>, double> fs_comparisons;
  for (const BenchRow& r : rows) {
    if (r.engine == "fs") fs_comparisons[{r.block_size, r.search_range}] = r.mean_comparisons;
  }
  for (const BenchRow& r : rows) {
    *summary << r.engine << " b=" << r.block_size << " p=" << r.search_range
             << ": comparisons/pair " << fmt("%.1f", r.mean_comparisons);
    if (auto it = fs_comparisons.find({r.block_size, r.search_range});
        it != fs_comparisons.end() && it->second > 0) {
      *summary << " (" << fmt("%.2f", 100.0 * r.mean_comparisons / it->second) << "% of fs)";
    }
    *summary << ", SAD/pair " << fmt("%.1f", r.mean_sad) << ", PSNR "
             << fmt("%.2f", r.psnr_db) << " dB";
    if (r.scs_pct) *summary << ", SCS " << fmt("%.1f", *r.scs_pct) << "%";
    if (r.engine == "adaptive" || r.engine == "fastme") {
      *summary << ", early stops " << fmt("%.1f", 100.0 * r.early_stop_fraction) << "%";
    }
    *summary << '\n';
  }
  return kExitOk;
}

// estimate -------------------------------------------------------------------

struct EstimateFlags {
  InputFlags input;
  EngineFlags engine;
  std::string engine_name = "fs";
  std::size_t reference = 0;
  std::size_t current = 1;
  std::string attn;
  std::uint64_t seed = 0;
  int jobs = 0;
  std::string output;
};

void add_estimate(CLI::App& app, EstimateFlags& f) {
  auto* sub = app.add_subcommand("estimate", "Estimate one motion field and write it as JSON");
  add_input_flags(sub, f.input, true);
  sub->add_option("--engine,-e", f.engine_name, "fs, tss, ds, adaptive or fastme")
      ->capture_default_str();
  sub->add_option("--reference,-r", f.reference, "Reference frame index (0-based)")
      ->capture_default_str();
  sub->add_option("--current,-c", f.current, "Current frame index (0-based)")
      ->capture_default_str();
  sub->add_option("--block-size,-b", f.engine.block_size, "Block size (8, 16 or 32)")
      ->capture_default_str();
  sub->add_option("--search-range,-p", f.engine.search_range, "Search range p")
      ->capture_default_str();
  sub->add_option("--attn", f.attn, "Attention source, as for bench");
  sub->add_option("--seed", f.seed, "Seed for synthetic attention")->capture_default_str();
  sub->add_option("--jobs,-j", f.jobs, "Worker threads");
  sub->add_option("--output,-o", f.output, "JSON path; stdout when omitted");
  add_policy_flags(sub, f.engine);
}

int cmd_estimate(const EstimateFlags& f, std::ostream& out) {
  const EngineKind kind = parse_engines({f.engine_name}).front();
  if (kind == EngineKind::kFastMe && f.attn.empty()) {
    throw ConfigError("engine fastme needs an attention source: pass --attn");
  }
  EngineConfig engine{kind, make_policy(f.engine)};
  if (kind == EngineKind::kFastMe) engine.policy.rule = StoppingRule::kFastMe;
  const SearchParams params{f.engine.block_size, f.engine.search_range};
  try {
    params.validate();
  } catch (const Error& e) {
    throw ConfigError(std::string("--block-size/--search-range: ") + e.what());
  }
  const AttentionSource attn_src = make_attention(f.attn, false);
  const VideoFormat format = make_format(f.input);
  const unsigned jobs = resolve_jobs(f.jobs);

  VideoFile video(f.input.path, format, f.input.width, f.input.height);
  const std::size_t needed = std::max(f.reference, f.current) + 1;
  std::vector<LumaPlane> frames;
  try {
    frames = read_all(video.reader(), needed);
  } catch (const Error& e) {
    throw Error(e.code(), f.input.path + ": " + e.what());
  }
  for (std::size_t idx : {f.reference, f.current}) {
    if (idx >= frames.size()) {
      throw Error(ErrorCode::kPrecondition,
                  "frame index " + std::to_string(idx) + " is out of range: " +
                      f.input.path + " has " + std::to_string(frames.size()) + " frames");
    }
  }
  const LumaPlane& cur = frames[f.current];
  const LumaPlane& ref = frames[f.reference];
  const BlockGrid grid(cur.width(), cur.height(), params.block_size);

  std::optional<AttentionMap> attention;
  if (attn_src.kind == AttentionSource::Kind::kSynthetic) {
    attention = synthetic_attention(attn_src.synthetic, grid.cols(), grid.rows(),
                                    grid.block_size(), f.seed, f.current);
  } else if (attn_src.kind == AttentionSource::Kind::kFiles) {
    attention = load_attention_map(attn_src.static_map
                                       ? attn_src.path
                                       : attn_src.path / attention_filename(f.current));
  }

  SequenceEstimator estimator(engine, params, EstimateOptions{jobs});
  const MotionField field = estimator.estimate(cur, ref, attention ? &*attention : nullptr);

  nlohmann::ordered_json doc;
  doc["engine"] = engine_name(kind);
  doc["frame_width"] = cur.width();
  doc["frame_height"] = cur.height();
  doc["block_size"] = params.block_size;
  doc["search_range"] = params.search_range;
  doc["reference_frame"] = f.reference;
  doc["current_frame"] = f.current;
  doc["cols"] = grid.cols();
  doc["rows"] = grid.rows();
  doc["total_sad"] = field.total_sad();
  doc["total_comparisons"] = field.total_comparisons();
  auto blocks = nlohmann::ordered_json::array();
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const PixelPos o = grid.origin_of(k);
    nlohmann::ordered_json b;
    b["index"] = k;
    b["x"] = o.x;
    b["y"] = o.y;
    b["dx"] = field.vectors[k].dx;
    b["dy"] = field.vectors[k].dy;
    b["min_sad"] = field.stats[k].min_sad;
    b["comparisons"] = field.stats[k].comparisons;
    if (field.stats[k].stopping_step) {
      b["stopping_step"] = *field.stats[k].stopping_step;
    } else {
      b["stopping_step"] = nullptr;
    }
    blocks.push_back(std::move(b));
  }
  doc["blocks"] = std::move(blocks);

  const std::string text = doc.dump(2) + "\n";
  if (f.output.empty()) {
    out << text;
  } else {
    std::ofstream file(f.output);
    if (!file || !(file << text)) throw Error(ErrorCode::kIo, "cannot write " + f.output);
  }
  return kExitOk;
}

// attn-synth -----------------------------------------------------------------

struct AttnSynthFlags {
  std::string kind;
  int cols = 0;
  int rows = 0;
  int width = 0;
  int height = 0;
  int block_size = 16;
  std::size_t frames = 1;
  std::uint64_t seed = 0;
  std::string output;
};

void add_attn_synth(CLI::App& app, AttnSynthFlags& f) {
  auto* sub = app.add_subcommand("attn-synth", "Write synthetic .attn.json attention maps");
  sub->add_option("--kind", f.kind,
                  "uniform:<c>, gaussian, gaussian:<cx>,<cy>,<sigma>, checkerboard or random")
      ->required();
  sub->add_option("--cols", f.cols, "Grid columns");
  sub->add_option("--rows", f.rows, "Grid rows");
  sub->add_option("--width", f.width, "Frame width; derives --cols as floor(width/b)");
  sub->add_option("--height", f.height, "Frame height; derives --rows as floor(height/b)");
  sub->add_option("--block-size,-b", f.block_size, "Block size")->capture_default_str();
  sub->add_option("--frames", f.frames, "Number of per-frame maps")->capture_default_str();
  sub->add_option("--seed", f.seed, "Seed for the random kind")->capture_default_str();
  sub->add_option("--output,-o", f.output,
                  "Output file (one frame) or directory (several frames); stdout when omitted");
}

int cmd_attn_synth(const AttnSynthFlags& f, std::ostream& out) {
  SyntheticAttentionSpec spec;
  try {
    spec = parse_synthetic_kind(f.kind);
  } catch (const Error& e) {
    throw ConfigError(std::string("--kind: ") + e.what());
  }
  if (f.block_size <= 0) throw ConfigError("--block-size must be positive");
  int cols = f.cols, rows = f.rows;
  if (cols <= 0 && f.width > 0) cols = f.width / f.block_size;
  if (rows <= 0 && f.height > 0) rows = f.height / f.block_size;
  if (cols <= 0 || rows <= 0) {
    throw ConfigError("grid size unknown: pass --cols/--rows or --width/--height");
  }
  if (f.frames == 0) throw ConfigError("--frames must be at least 1");
  if (f.frames > 1 && f.output.empty()) {
    throw ConfigError("--output must name a directory when --frames > 1");
  }

  if (f.frames == 1) {
    const AttentionMap map = synthetic_attention(spec, cols, rows, f.block_size, f.seed, 0);
    if (f.output.empty()) {
      out << to_attention_json(map);
    } else {
      save_attention_map(map, f.output);
    }
    return kExitOk;
  }
  fs::create_directories(f.output);
  for (std::size_t i = 0; i < f.frames; ++i) {
    save_attention_map(synthetic_attention(spec, cols, rows, f.block_size, f.seed, i),
                       fs::path(f.output) / attention_filename(i));
  }
  return kExitOk;
}

// cdf ------------------------------------------------------------------------

struct CdfFlags {
  std::string samples_path;
  InputFlags video;
  std::size_t pair = 1;
  int block_size = 16;
  int search_range = 7;
  bool normalize = false;
  std::vector<double> quantiles{0.1};
  std::string output;
};

void add_cdf(CLI::App& app, CdfFlags& f) {
  auto* sub = app.add_subcommand("cdf", "Export empirical CDF data of SAD samples as TSV");
  auto* in = sub->add_option("--input,-i", f.samples_path,
                             "Text file of whitespace-separated SAD samples");
  auto* vid = sub->add_option("--video", f.video.path,
                              "Video file; samples are the SAD of every candidate of "
                              "every block for one frame pair");
  in->excludes(vid);
  sub->add_option("--format", f.video.format, "Video format: y4m, yuv420 or luma")
      ->check(CLI::IsMember({"y4m", "yuv420", "luma"}))
      ->capture_default_str();
  sub->add_option("--width", f.video.width, "Frame width for raw formats");
  sub->add_option("--height", f.video.height, "Frame height for raw formats");
  sub->add_option("--pair", f.pair, "Current frame index; the reference is the one before it")
      ->capture_default_str();
  sub->add_option("--block-size,-b", f.block_size, "Block size")->capture_default_str();
  sub->add_option("--search-range,-p", f.search_range, "Search range p")
      ->capture_default_str();
  sub->add_flag("--normalize", f.normalize, "Divide video SADs by 255*b*b");
  sub->add_option("--quantiles,-q", f.quantiles, "Quantiles to mark, each in (0,1]")
      ->delimiter(',')
      ->capture_default_str();
  sub->add_option("--output,-o", f.output, "TSV path; stdout when omitted");
}

SadSampleSet read_samples(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  SadSampleSet set;
  std::string token;
  while (in >> token) {
    double v = 0.0;
    std::istringstream parse(token);
    parse.imbue(std::locale::classic());
    if (!(parse >> v) || !parse.eof() || !(v >= 0.0)) {
      throw ConfigError(path + ": '" + token + "' is not a nonnegative number");
    }
    set.insert(v);
  }
  return set;
}

SadSampleSet video_samples(const CdfFlags& f) {
  const SearchParams params{f.block_size, f.search_range};
  try {
    params.validate();
  } catch (const Error& e) {
    throw ConfigError(std::string("--block-size/--search-range: ") + e.what());
  }
  if (f.pair == 0) throw ConfigError("--pair must be at least 1");
  VideoFile video(f.video.path, make_format(f.video), f.video.width, f.video.height);
  std::vector<LumaPlane> frames;
  try {
    frames = read_all(video.reader(), f.pair + 1);
  } catch (const Error& e) {
    throw Error(e.code(), f.video.path + ": " + e.what());
  }
  if (f.pair >= frames.size()) {
    throw Error(ErrorCode::kPrecondition,
                "frame index " + std::to_string(f.pair) + " is out of range: " +
                    f.video.path + " has " + std::to_string(frames.size()) + " frames");
  }
  const LumaPlane& cur = frames[f.pair];
  const LumaPlane& ref = frames[f.pair - 1];
  const BlockGrid grid(cur.width(), cur.height(), params.block_size);
  SadSampleSet set;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const PixelPos o = grid.origin_of(k);
    for (MotionVector v : candidate_window(o, params, cur.width(), cur.height())) {
      const auto s = block_sad(cur, ref, o, v, params.block_size);
      set.insert(f.normalize ? normalize_sad(s, params.block_size)
                             : static_cast<double>(s));
    }
  }
  return set;
}

int cmd_cdf(const CdfFlags& f, std::ostream& out) {
  if (f.samples_path.empty() && f.video.path.empty()) {
    throw ConfigError("pass --input or --video");
  }
  for (double q : f.quantiles) {
    if (!(q > 0.0 && q <= 1.0)) throw ConfigError("--quantiles values must lie in (0,1]");
  }
  const SadSampleSet set =
      f.samples_path.empty() ? video_samples(f) : read_samples(f.samples_path);
  if (set.empty()) {
    throw ConfigError((f.samples_path.empty() ? f.video.path : f.samples_path) +
                      ": no samples");
  }
  const CdfTable table = export_cdf_data(set, f.quantiles);

  std::ostringstream body;
  for (const QuantileMark& m : table.marks) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "# quantile %.10g threshold %.10g\n", m.quantile,
                  m.threshold);
    body << buf;
  }
  write_cdf_tsv(body, table);
  if (f.output.empty()) {
    out << body.str();
  } else {
    std::ofstream file(f.output);
    if (!file || !(file << body.str())) throw Error(ErrorCode::kIo, "cannot write " + f.output);
    for (const QuantileMark& m : table.marks) {
      out << "quantile " << fmt("%.10g", m.quantile) << ": threshold "
          << fmt("%.10g", m.threshold) << '\n';
    }
  }
  return kExitOk;
}

// make-fixture ---------------------------------------------------------------

struct FixtureFlags {
  std::string kind;
  std::size_t frames = 30;
  std::uint64_t seed = 0;
  int width = 352;
  int height = 288;
  std::vector<int> shift{2, 3};
  std::string output;
};

void add_make_fixture(CLI::App& app, FixtureFlags& f) {
  auto* sub = app.add_subcommand("make-fixture", "Write a procedural test sequence as Y4M");
  sub->add_option("--kind", f.kind, "talking-head, salient-object or planted-shift")
      ->check(CLI::IsMember({"talking-head", "salient-object", "planted-shift"}))
      ->required();
  sub->add_option("--frames", f.frames, "Frame count (planted-shift always writes 2)")
      ->capture_default_str();
  sub->add_option("--seed", f.seed, "Generator seed")->capture_default_str();
  sub->add_option("--width", f.width, "Frame width (even)")->capture_default_str();
  sub->add_option("--height", f.height, "Frame height (even)")->capture_default_str();
  sub->add_option("--shift", f.shift, "planted-shift displacement dx,dy")
      ->delimiter(',')
      ->expected(2)
      ->capture_default_str();
  sub->add_option("--output,-o", f.output, "Y4M path")->required();
}

int cmd_make_fixture(const FixtureFlags& f) {
  if (f.width <= 0 || f.height <= 0 || f.width % 2 != 0 || f.height % 2 != 0) {
    throw ConfigError("--width and --height must be positive and even");
  }
  if (f.frames == 0) throw ConfigError("--frames must be at least 1");
  const int n = static_cast<int>(f.frames);
  std::vector<LumaPlane> frames;
  if (f.kind == "talking-head") {
    frames = synth::talking_head_sequence(n, f.seed, f.width, f.height);
  } else if (f.kind == "salient-object") {
    frames = synth::salient_object_sequence(n, f.seed, f.width, f.height).frames;
  } else {
    auto pair = synth::planted_shift_pair(f.width, f.height, {f.shift[0], f.shift[1]}, f.seed);
    frames.push_back(std::move(pair.reference));
    frames.push_back(std::move(pair.current));
  }
  std::ofstream file(f.output, std::ios::binary);
  if (!file) throw Error(ErrorCode::kIo, "cannot write " + f.output);
  write_y4m(file, frames);
  if (!file) throw Error(ErrorCode::kIo, "cannot write " + f.output);
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Block motion estimation toolkit", "fastme"};
  app.require_subcommand(1);

  BenchFlags bench;
  EstimateFlags estimate;
  AttnSynthFlags attn_synth;
  CdfFlags cdf;
  FixtureFlags fixture;
  add_bench(app, bench);
  add_estimate(app, estimate);
  add_attn_synth(app, attn_synth);
  add_cdf(app, cdf);
  add_make_fixture(app, fixture);

  std::vector<const char*> argv{"fastme"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    const std::string name = app.get_subcommands().front()->get_name();
    if (name == "bench") return cmd_bench(bench, out, err);
    if (name == "estimate") return cmd_estimate(estimate, out);
    if (name == "attn-synth") return cmd_attn_synth(attn_synth, out);
    if (name == "cdf") return cmd_cdf(cdf, out);
    return cmd_make_fixture(fixture);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.code() == ErrorCode::kConfig ? kExitConfig : kExitRuntime;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

}  // namespace fastme::cli
