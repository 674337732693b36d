#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace bandit::confidence {

/// Confidence exponent alpha (>= 3) and arm count K (>= 2).
class ConfidenceParams {
public:
    ConfidenceParams(double alpha, std::size_t num_arms);

    double alpha() const { return alpha_; }
    std::size_t num_arms() const { return num_arms_; }
    double log_num_arms() const { return log_k_; }

private:
    double alpha_;
    std::size_t num_arms_;
    double log_k_;
};

/// Unweighted cumulative loss and play count of one arm.
struct ArmStats {
    double sum_loss{0.0};
    std::int64_t count{0};

    double mean() const { return sum_loss / static_cast<double>(count); }
};

/// sqrt(ln(1/delta) / (2n)).
double hoeffding_radius(std::int64_t n, double delta);

/// sqrt(alpha ln(t K^{1/alpha}) / (2 N)), evaluated as
/// sqrt((alpha ln t + ln K) / (2 N)) so K^{1/alpha} is never formed.
double confidence_radius(const ArmStats& stats, std::int64_t t, const ConfidenceParams& params);

double ucb(const ArmStats& stats, std::int64_t t, const ConfidenceParams& params);
double lcb(const ArmStats& stats, std::int64_t t, const ConfidenceParams& params);

/// Per-arm max{0, LCB_t(a) - min_a' UCB_t(a')}. Every count must be >= 1.
std::vector<double> dlcb_vector(std::span<const ArmStats> all_stats, std::int64_t t,
                                const ConfidenceParams& params);

/// Allocation-free variant of dlcb_vector; out.size() must equal the arm count.
void dlcb_into(std::span<const ArmStats> all_stats, std::int64_t t, const ConfidenceParams& params,
               std::span<double> out);

/// max{0, lcb(a) - min_a' ucb(a')} from precomputed bounds.
std::vector<double> dlcb_from_bounds(std::span<const double> lcbs, std::span<const double> ucbs);

/// Exact sum_{k=m}^{n} k^{-alpha}, accumulated from the small end with
/// Neumaier compensation.
double reciprocal_power_sum(std::int64_t m, std::int64_t n, double alpha);

/// e^{-n gamma / 8}: the bound on P(sum X_i <= n gamma / 2, all conditional
/// means >= gamma) for adapted Bernoulli variables.
double bernoulli_lower_tail_bound(std::int64_t n, double gamma);

/// sqrt(2 nu ln(1/delta)) + c ln(1/delta) / 3, the martingale Bernstein
/// deviation threshold at confidence delta.
double bernstein_tail(double nu, double c, double delta);

}  // namespace bandit::confidence
