#include "fastme/stopping.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "fastme/error.hpp"

namespace fastme {

SadSampleSet::SadSampleSet(std::span<const double> samples)
    : sorted_(samples.begin(), samples.end()) {
  for (double y : sorted_) {
    if (!(y >= 0.0)) {
      throw Error(ErrorCode::kPrecondition, "SAD samples must be nonnegative");
    }
  }
  std::sort(sorted_.begin(), sorted_.end());
  sum_ = std::accumulate(sorted_.begin(), sorted_.end(), 0.0);
}

void SadSampleSet::insert(double y) {
  if (!(y >= 0.0)) {
    throw Error(ErrorCode::kPrecondition, "SAD samples must be nonnegative");
  }
  sorted_.insert(std::upper_bound(sorted_.begin(), sorted_.end(), y), y);
  sum_ += y;
}

double SadSampleSet::mean() const {
  return sorted_.empty() ? 0.0 : sum_ / static_cast<double>(sorted_.size());
}

std::size_t SadSampleSet::count_at_most(double y) const {
  return static_cast<std::size_t>(
      std::upper_bound(sorted_.begin(), sorted_.end(), y) - sorted_.begin());
}

void StoppingPolicy::validate() const {
  if (!(delta0 > 0.0 && delta0 < 1.0)) {
    throw Error(ErrorCode::kConfig, "delta0 must be in (0,1)");
  }
  if (!(theta > 0.0) || !std::isfinite(theta)) {
    throw Error(ErrorCode::kConfig, "theta must be a positive finite rate");
  }
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw Error(ErrorCode::kConfig, "alpha must be in [0,1]");
  }
}

double empirical_cdf(const SadSampleSet& set, double y) {
  if (set.empty()) {
    throw Error(ErrorCode::kPrecondition, "empirical CDF of an empty sample set");
  }
  return static_cast<double>(set.count_at_most(y)) /
         static_cast<double>(set.size());
}

double fit_exponential_rate(std::span<const double> samples) {
  if (samples.empty()) {
    throw Error(ErrorCode::kPrecondition, "cannot fit a rate to zero samples");
  }
  const double mean = std::accumulate(samples.begin(), samples.end(), 0.0) /
                      static_cast<double>(samples.size());
  if (!(mean > 0.0)) {
    throw Error(ErrorCode::kDegenerateData,
                "exponential rate is undefined for all-zero samples");
  }
  return 1.0 / mean;
}

double fit_exponential_rate(const SadSampleSet& set) {
  return fit_exponential_rate(std::span<const double>(set.sorted()));
}

double refit_theta(std::span<const double> samples, double previous_theta) {
  if (samples.size() < kMinSamplesForFit) return previous_theta;
  const double sum = std::accumulate(samples.begin(), samples.end(), 0.0);
  if (!(sum > 0.0)) return previous_theta;
  return static_cast<double>(samples.size()) / sum;
}

double sad_threshold(double delta, double theta) {
  if (!(delta > 0.0 && delta <= 1.0)) {
    throw Error(ErrorCode::kDomain, "threshold needs delta in (0,1]");
  }
  if (!(theta > 0.0)) {
    throw Error(ErrorCode::kDomain, "threshold needs theta > 0");
  }
  // max() turns the -0.0 from delta == 1 into 0.
  return std::max(0.0, -std::log(delta) / theta);
}

double adaptive_delta(double delta0, double attention) {
  return delta0 * (1.0 - std::clamp(attention, 0.0, kMaxAttention));
}

double blended_cost(double y_norm, double attention, double alpha) {
  return alpha * y_norm + (1.0 - alpha) * (1.0 - attention);
}

double normalize_sad(std::uint64_t sad, int block_size) {
  return static_cast<double>(sad) /
         (255.0 * static_cast<double>(block_size) * block_size);
}

FixedPointResult fixed_point_tau(double theta, double tol) {
  if (!(theta > 0.0) || !(tol > 0.0)) {
    throw Error(ErrorCode::kDomain, "fixed point needs theta > 0 and tol > 0");
  }
  constexpr int kMaxIterations = 10000;
  // g(t) = -expm1(-theta t) / theta, g'(t) = exp(-theta t).
  const auto g = [theta](double t) { return -std::expm1(-theta * t) / theta; };

  // Relaxed iteration t += w (g(t) - t) with w = 1 / (1 - g'(t)). g'(0) = 1,
  // so the plain iteration t = g(t) only creeps towards 0 like 2 / (theta n).
  double tau = 1.0 / theta;
  for (int it = 1; it <= kMaxIterations; ++it) {
    const double step_gain = -std::expm1(-theta * tau);  // 1 - g'(tau)
    double next = tau;
    if (step_gain > 0.0) {
      next = tau + (g(tau) - tau) / step_gain;
    }
    next = std::max(next, 0.0);
    const double change = std::abs(next - tau);
    tau = next;
    if (change < tol) {
      return {tau, std::abs(g(tau) - tau), it};
    }
  }
  throw Error(ErrorCode::kNumeric, "fixed-point iteration did not converge");
}

bool should_stop_empirical(const SadSampleSet& set, double y_k, double delta) {
  return empirical_cdf(set, y_k) >= 1.0 - delta;
}

bool should_stop_fastme(double y_tilde, double boundary, double y_k,
                        double y_min) {
  return y_tilde <= boundary && y_k < y_min;
}

DeltaBoundCheck check_delta_bound(double delta, double y_inf) {
  DeltaBoundCheck check;
  check.bound = 1.0 - y_inf;
  if (delta < check.bound) {
    check.ok = false;
    std::ostringstream msg;
    msg.imbue(std::locale::classic());
    msg << "delta " << delta << " is below the bound 1 - Y_inf = " << check.bound;
    check.warning = msg.str();
  }
  return check;
}

}  // namespace fastme
