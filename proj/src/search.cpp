#include "fastme/search.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <thread>

#include "fastme/metrics.hpp"

namespace fastme {
namespace {

// Evaluates SADs for one block, counting each distinct displacement once and
// tracking the best (first strict minimum in evaluation order).
class BlockProber {
 public:
  explicit BlockProber(const BlockSearchContext& ctx)
      : ctx_(ctx),
        bounds_(window_bounds(ctx.origin, ctx.params, ctx.current.width(),
                              ctx.current.height())) {}

  bool in_window(MotionVector v) const { return bounds_.contains(v); }

  // SAD at v; repeated displacements are served from the cache.
  std::uint64_t probe(MotionVector v) {
    const auto key = std::make_pair(v.dy, v.dx);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    const std::uint64_t value = evaluate(v);
    cache_.emplace(key, value);
    return value;
  }

  // Uncached evaluation for engines that visit every displacement once.
  std::uint64_t evaluate(MotionVector v) {
    ++comparisons_;
    const std::uint64_t value =
        ctx_.kernel ? (*ctx_.kernel)(ctx_.current, ctx_.reference, ctx_.origin, v,
                                     ctx_.params.block_size)
                    : block_sad(ctx_.current, ctx_.reference, ctx_.origin, v,
                                ctx_.params.block_size);
    if (value < best_sad_) {
      best_sad_ = value;
      best_ = v;
    }
    return value;
  }

  SearchOutcome outcome() const {
    SearchOutcome out;
    out.vector = best_;
    out.min_sad = best_sad_;
    out.comparisons = comparisons_;
    return out;
  }

  std::uint64_t best_sad() const { return best_sad_; }
  const WindowBounds& bounds() const { return bounds_; }

 private:
  const BlockSearchContext& ctx_;
  WindowBounds bounds_;
  std::map<std::pair<int, int>, std::uint64_t> cache_;
  std::uint64_t comparisons_ = 0;
  std::uint64_t best_sad_ = std::numeric_limits<std::uint64_t>::max();
  MotionVector best_;
};

std::vector<MotionVector> search_order(const BlockSearchContext& ctx) {
  return center_outward_order(candidate_window(
      ctx.origin, ctx.params, ctx.current.width(), ctx.current.height()));
}

// Evaluates `center + offsets` (in-window points only) and returns the best
// displacement among them; earlier points win ties.
template <std::size_t N>
MotionVector best_of_pattern(BlockProber& prober, MotionVector center,
                             const std::array<MotionVector, N>& offsets) {
  MotionVector best = center;
  std::uint64_t best_sad = std::numeric_limits<std::uint64_t>::max();
  for (const MotionVector& o : offsets) {
    const MotionVector v{center.dx + o.dx, center.dy + o.dy};
    if (!prober.in_window(v)) continue;
    const std::uint64_t s = prober.probe(v);
    if (s < best_sad) {
      best_sad = s;
      best = v;
    }
  }
  return best;
}

// Centre first, then raster order.
constexpr std::array<MotionVector, 9> kLargeDiamond = {{
    {0, 0}, {0, -2}, {-1, -1}, {1, -1}, {-2, 0}, {2, 0}, {-1, 1}, {1, 1}, {0, 2}}};
constexpr std::array<MotionVector, 5> kSmallDiamond = {{
    {0, 0}, {0, -1}, {-1, 0}, {1, 0}, {0, 1}}};

int initial_tss_step(int p) {
  // 2^(ceil(log2(p + 1)) - 1): 4 for p = 7, 8 for p = 15.
  int step = 1;
  while (step * 2 <= p) step *= 2;
  return step;
}

}  // namespace

std::string engine_name(EngineKind kind) {
  switch (kind) {
    case EngineKind::kFullSearch: return "fs";
    case EngineKind::kThreeStep: return "tss";
    case EngineKind::kDiamond: return "ds";
    case EngineKind::kAdaptiveMe: return "adaptive";
    case EngineKind::kFastMe: return "fastme";
  }
  return "unknown";
}

EngineKind parse_engine(const std::string& name) {
  if (name == "fs") return EngineKind::kFullSearch;
  if (name == "tss") return EngineKind::kThreeStep;
  if (name == "ds") return EngineKind::kDiamond;
  if (name == "adaptive") return EngineKind::kAdaptiveMe;
  if (name == "fastme") return EngineKind::kFastMe;
  throw Error(ErrorCode::kConfig, "unknown engine '" + name +
                                      "' (expected fs, tss, ds, adaptive, fastme)");
}

SearchOutcome full_search(const BlockSearchContext& ctx) {
  BlockProber prober(ctx);
  for (const MotionVector& v : search_order(ctx)) prober.evaluate(v);
  return prober.outcome();
}

SearchOutcome three_step_search(const BlockSearchContext& ctx) {
  BlockProber prober(ctx);
  MotionVector center{0, 0};
  for (int step = initial_tss_step(ctx.params.search_range); step >= 1; step /= 2) {
    const std::array<MotionVector, 9> pattern = {{{0, 0},
                                                  {-step, -step},
                                                  {0, -step},
                                                  {step, -step},
                                                  {-step, 0},
                                                  {step, 0},
                                                  {-step, step},
                                                  {0, step},
                                                  {step, step}}};
    center = best_of_pattern(prober, center, pattern);
  }
  return prober.outcome();
}

SearchOutcome diamond_search(const BlockSearchContext& ctx) {
  BlockProber prober(ctx);
  const int max_recenters = 4 * ctx.params.search_range;
  MotionVector center{0, 0};
  int recenters = 0;
  bool capped = false;
  for (;;) {
    const MotionVector best = best_of_pattern(prober, center, kLargeDiamond);
    if (best == center) break;
    center = best;
    if (++recenters > max_recenters) {
      capped = true;
      break;
    }
  }
  if (!capped) best_of_pattern(prober, center, kSmallDiamond);
  SearchOutcome out = prober.outcome();
  out.diagnostics.iteration_cap_hit = capped;
  return out;
}

SearchOutcome adaptive_me(const BlockSearchContext& ctx,
                          const StoppingPolicy& policy) {
  if (policy.rule == StoppingRule::kFastMe) {
    throw Error(ErrorCode::kConfig, "Adaptive ME needs the empirical-cdf or "
                                    "sad-threshold rule");
  }
  BlockProber prober(ctx);
  const int b = ctx.params.block_size;
  const auto order = search_order(ctx);
  std::vector<double> observed;
  observed.reserve(order.size());
  StopDiagnostics diag;

  if (policy.rule == StoppingRule::kSadThreshold) {
    const double threshold = sad_threshold(policy.delta0, policy.theta);
    diag.threshold_used = threshold;
    for (std::size_t k = 0; k < order.size(); ++k) {
      const double y = normalize_sad(prober.evaluate(order[k]), b);
      observed.push_back(y);
      if (y <= threshold) {
        diag.stopped_early = true;
        diag.stopping_step = k + 1;
        break;
      }
    }
  } else {
    SadSampleSet seen;
    diag.threshold_used = 1.0 - policy.delta0;
    for (std::size_t k = 0; k < order.size(); ++k) {
      const double y = normalize_sad(prober.evaluate(order[k]), b);
      observed.push_back(y);
      seen.insert(y);
      if (should_stop_empirical(seen, y, policy.delta0)) {
        diag.stopped_early = true;
        diag.stopping_step = k + 1;
        diag.cdf_at_stop = empirical_cdf(seen, y);
        break;
      }
    }
  }
  SearchOutcome out = prober.outcome();
  out.diagnostics = diag;
  out.observed_costs = std::move(observed);
  return out;
}

SearchOutcome fast_me(const BlockSearchContext& ctx, const StoppingPolicy& policy,
                      double attention) {
  BlockProber prober(ctx);
  const int b = ctx.params.block_size;
  const double boundary =
      sad_threshold(adaptive_delta(policy.delta0, attention), policy.theta);
  const auto order = search_order(ctx);
  std::vector<double> observed;
  observed.reserve(order.size());
  StopDiagnostics diag;
  diag.threshold_used = boundary;

  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < order.size(); ++k) {
    const std::uint64_t sad_k = prober.evaluate(order[k]);
    const double y = static_cast<double>(sad_k);
    const double y_tilde = blended_cost(normalize_sad(sad_k, b), attention, policy.alpha);
    observed.push_back(y_tilde);
    const bool stop = should_stop_fastme(y_tilde, boundary, y, best);
    best = std::min(best, y);
    if (stop) {
      diag.stopped_early = true;
      diag.stopping_step = k + 1;
      break;
    }
  }
  SearchOutcome out = prober.outcome();
  out.diagnostics = diag;
  out.observed_costs = std::move(observed);
  return out;
}

MotionField estimate_motion_field(const LumaPlane& current,
                                  const LumaPlane& reference,
                                  const EngineConfig& engine,
                                  const SearchParams& params,
                                  const AttentionMap* attention,
                                  const EstimateOptions& options) {
  params.validate();
  if (current.width() != reference.width() ||
      current.height() != reference.height()) {
    throw Error(ErrorCode::kDimension, "current and reference frames differ in size");
  }
  const BlockGrid grid = partition_into_blocks(current, params.block_size);
  if (engine.kind == EngineKind::kAdaptiveMe || engine.kind == EngineKind::kFastMe) {
    engine.policy.validate();
  }
  if (engine.kind == EngineKind::kFastMe) {
    if (attention == nullptr) {
      throw Error(ErrorCode::kConfig, "FAST-ME requires an attention map");
    }
    if (!attention->matches(grid)) {
      throw Error(ErrorCode::kDimension,
                  "attention grid " + std::to_string(attention->cols()) + "x" +
                      std::to_string(attention->rows()) + " (b=" +
                      std::to_string(attention->block_size()) +
                      ") does not match the frame grid " +
                      std::to_string(grid.cols()) + "x" + std::to_string(grid.rows()));
    }
  }

  std::vector<SearchOutcome> outcomes(grid.size());
  auto search_block = [&](std::size_t k) {
    const BlockSearchContext ctx{current, reference, grid.origin_of(k), params,
                                 options.kernel};
    switch (engine.kind) {
      case EngineKind::kFullSearch: outcomes[k] = full_search(ctx); break;
      case EngineKind::kThreeStep: outcomes[k] = three_step_search(ctx); break;
      case EngineKind::kDiamond: outcomes[k] = diamond_search(ctx); break;
      case EngineKind::kAdaptiveMe: outcomes[k] = adaptive_me(ctx, engine.policy); break;
      case EngineKind::kFastMe:
        outcomes[k] = fast_me(ctx, engine.policy, attention->score(k));
        break;
    }
  };

  const unsigned jobs = std::max(1u, std::min<unsigned>(
                                         options.jobs, static_cast<unsigned>(grid.size())));
  if (jobs == 1) {
    for (std::size_t k = 0; k < grid.size(); ++k) search_block(k);
  } else {
    // Outcomes land at their block index, so scheduling order is irrelevant.
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> workers;
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    for (unsigned t = 0; t < jobs; ++t) {
      workers.emplace_back([&] {
        for (std::size_t k = next++; k < grid.size() && !failed; k = next++) {
          try {
            search_block(k);
          } catch (...) {
            if (!failed.exchange(true)) failure = std::current_exception();
          }
        }
      });
    }
    workers.clear();
    if (failure) std::rethrow_exception(failure);
  }

  MotionField field;
  field.grid = grid;
  field.vectors.reserve(grid.size());
  field.stats.reserve(grid.size());
  for (auto& o : outcomes) {
    field.vectors.push_back(o.vector);
    BlockStats s;
    s.min_sad = o.min_sad;
    s.comparisons = o.comparisons;
    if (o.diagnostics.stopped_early) s.stopping_step = o.diagnostics.stopping_step;
    field.stats.push_back(s);
    field.observed_costs.insert(field.observed_costs.end(), o.observed_costs.begin(),
                                o.observed_costs.end());
  }
  return field;
}

SequenceEstimator::SequenceEstimator(EngineConfig engine, SearchParams params,
                                     EstimateOptions options)
    : engine_(engine), params_(params), options_(options) {}

MotionField SequenceEstimator::estimate(const LumaPlane& current,
                                        const LumaPlane& reference,
                                        const AttentionMap* attention) {
  MotionField field =
      estimate_motion_field(current, reference, engine_, params_, attention, options_);
  if (engine_.policy.theta_mode == ThetaMode::kFitFromData) {
    engine_.policy.theta = refit_theta(field.observed_costs, engine_.policy.theta);
  }
  return field;
}

}  // namespace fastme
