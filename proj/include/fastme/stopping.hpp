#pragma once

// Optimal-stopping machinery for block search: empirical CDF of observed
// costs, an exponential model of the cost distribution, the thresholds that
// follow from it, and the attention-modulated variants used by FAST-ME.
//
// All costs handled here are normalized SADs, SAD / (255 * b * b), or blends
// of them, so thresholds carry the same meaning for every block size.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace fastme {

// Multiset of observed costs Y_1..Y_n, kept sorted so F(y) is a binary search.
class SadSampleSet {
 public:
  SadSampleSet() = default;
  explicit SadSampleSet(std::span<const double> samples);

  void insert(double y);
  std::size_t size() const { return sorted_.size(); }
  bool empty() const { return sorted_.empty(); }
  double mean() const;
  const std::vector<double>& sorted() const { return sorted_; }
  // Number of samples <= y.
  std::size_t count_at_most(double y) const;

 private:
  std::vector<double> sorted_;
  double sum_ = 0.0;
};

enum class StoppingRule {
  kEmpiricalCdf,  // stop when F_Y(Y_k) >= 1 - delta, F over samples seen so far
  kSadThreshold,  // stop when Y_k <= -ln(delta) / theta
  kFastMe,        // blended cost against the attention-adjusted boundary
};

enum class ThetaMode {
  kFixed,
  kFitFromData,  // MLE over the previous frame pair's observed costs
};

struct StoppingPolicy {
  double delta0 = 0.05;
  double theta = 1.0;  // rate in force; the bootstrap value under kFitFromData
  ThetaMode theta_mode = ThetaMode::kFitFromData;
  double alpha = 0.7;
  StoppingRule rule = StoppingRule::kSadThreshold;

  // Throws kConfig on out-of-range parameters.
  void validate() const;
};

struct StopDiagnostics {
  bool stopped_early = false;
  std::uint64_t stopping_step = 0;  // 1-based; 0 when the search ran out
  double threshold_used = 0.0;
  double cdf_at_stop = 0.0;
  bool iteration_cap_hit = false;  // diamond search oscillation guard
};

// Scores at or above this are clamped so that delta_k stays positive.
inline constexpr double kMaxAttention = 1.0 - 1e-6;
// Minimum number of samples before a fitted rate replaces the configured one.
inline constexpr std::size_t kMinSamplesForFit = 8;

double empirical_cdf(const SadSampleSet& set, double y);

// theta_hat = 1 / mean. Throws kPrecondition on an empty set and
// kDegenerateData when the mean is not positive.
double fit_exponential_rate(const SadSampleSet& set);
double fit_exponential_rate(std::span<const double> samples);

// Refit helper for sequence processing: the fitted rate when there are
// enough informative samples, otherwise the previous rate.
double refit_theta(std::span<const double> samples, double previous_theta);

// T = -ln(delta) / theta.
double sad_threshold(double delta, double theta);

// delta_k = delta0 * (1 - min(A_k, kMaxAttention)).
double adaptive_delta(double delta0, double attention);

// alpha * y_norm + (1 - alpha) * (1 - A_k).
double blended_cost(double y_norm, double attention, double alpha);

double normalize_sad(std::uint64_t sad, int block_size);

struct FixedPointResult {
  double tau = 0.0;
  double residual = 0.0;  // |g(tau) - tau|
  int iterations = 0;
};

// Fixed point of g(tau) = (1 - exp(-theta * tau)) / theta starting from
// tau_0 = 1 / theta. Throws kNumeric after 10^4 iterations.
FixedPointResult fixed_point_tau(double theta, double tol = 1e-10);

// Precondition: y_k is already in the set.
bool should_stop_empirical(const SadSampleSet& set, double y_k, double delta);

// Accept when the blended cost is within the boundary and the raw cost is a
// strict improvement on the best seen so far.
bool should_stop_fastme(double y_tilde, double boundary, double y_k, double y_min);

struct DeltaBoundCheck {
  bool ok = true;
  double bound = 0.0;  // 1 - y_inf
  std::string warning;
};

// delta must satisfy delta >= 1 - Y_inf. Reported, never thrown.
DeltaBoundCheck check_delta_bound(double delta, double y_inf);

}  // namespace fastme
