#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "fastme/attention.hpp"
#include "fastme/frame.hpp"
#include "fastme/stopping.hpp"

namespace fastme {

enum class EngineKind { kFullSearch, kThreeStep, kDiamond, kAdaptiveMe, kFastMe };

// Short names used on the command line and in CSV output:
// fs, tss, ds, adaptive, fastme.
std::string engine_name(EngineKind kind);
EngineKind parse_engine(const std::string& name);

// Replaceable SAD evaluation, e.g. to count calls in tests. Must return the
// same value as block_sad().
using SadKernel = std::function<std::uint64_t(
    const LumaPlane& current, const LumaPlane& reference, PixelPos origin,
    MotionVector disp, int block_size)>;

struct BlockSearchContext {
  const LumaPlane& current;
  const LumaPlane& reference;
  PixelPos origin;
  SearchParams params;
  const SadKernel* kernel = nullptr;  // null selects block_sad
};

struct SearchOutcome {
  MotionVector vector;
  std::uint64_t min_sad = 0;
  std::uint64_t comparisons = 0;  // distinct SAD evaluations
  StopDiagnostics diagnostics;
  // Stopping statistic per evaluated candidate (normalized SAD for Adaptive
  // ME, blended cost for FAST-ME); empty for the baselines.
  std::vector<double> observed_costs;
};

SearchOutcome full_search(const BlockSearchContext& ctx);
SearchOutcome three_step_search(const BlockSearchContext& ctx);
SearchOutcome diamond_search(const BlockSearchContext& ctx);
// policy.rule must be kEmpiricalCdf or kSadThreshold; policy.theta is the
// rate in force for this block.
SearchOutcome adaptive_me(const BlockSearchContext& ctx, const StoppingPolicy& policy);
// `attention` is the score of the block being matched.
SearchOutcome fast_me(const BlockSearchContext& ctx, const StoppingPolicy& policy,
                      double attention);

struct EngineConfig {
  EngineKind kind = EngineKind::kFullSearch;
  StoppingPolicy policy;
};

struct EstimateOptions {
  unsigned jobs = 1;
  const SadKernel* kernel = nullptr;
};

// Runs the engine on every grid block. FAST-ME requires an attention map whose
// grid matches (kConfig when missing, kDimension when mismatched).
MotionField estimate_motion_field(const LumaPlane& current,
                                  const LumaPlane& reference,
                                  const EngineConfig& engine,
                                  const SearchParams& params,
                                  const AttentionMap* attention = nullptr,
                                  const EstimateOptions& options = {});

// Carries the exponential rate from one frame pair to the next when the
// policy fits it from data.
class SequenceEstimator {
 public:
  SequenceEstimator(EngineConfig engine, SearchParams params,
                    EstimateOptions options = {});

  MotionField estimate(const LumaPlane& current, const LumaPlane& reference,
                       const AttentionMap* attention = nullptr);

  // Rate that the next call will use.
  double theta() const { return engine_.policy.theta; }

 private:
  EngineConfig engine_;
  SearchParams params_;
  EstimateOptions options_;
};

}  // namespace fastme
