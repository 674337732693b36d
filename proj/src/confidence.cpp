#include "bandit/confidence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace bandit::confidence {

ConfidenceParams::ConfidenceParams(double alpha, std::size_t num_arms)
    : alpha_(alpha), num_arms_(num_arms), log_k_(std::log(static_cast<double>(num_arms))) {
    if (!(alpha >= 3.0) || !std::isfinite(alpha)) {
        throw std::invalid_argument("confidence exponent alpha must be >= 3, got " + std::to_string(alpha));
    }
    if (num_arms < 2) throw std::invalid_argument("need at least two arms");
}

double hoeffding_radius(std::int64_t n, double delta) {
    if (n < 1) throw std::invalid_argument("hoeffding_radius: n must be >= 1");
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("hoeffding_radius: delta must be in (0,1)");
    return std::sqrt(std::log(1.0 / delta) / (2.0 * static_cast<double>(n)));
}

namespace {

// alpha ln t + ln K; shared by every arm in a round.
double radicand_numerator(std::int64_t t, const ConfidenceParams& params) {
    return params.alpha() * std::log(static_cast<double>(t)) + params.log_num_arms();
}

void check_stats(const ArmStats& stats, std::int64_t t) {
    if (t < 1) throw std::invalid_argument("round index must be >= 1");
    if (stats.count < 1) throw std::invalid_argument("arm statistics need at least one observation");
}

}  // namespace

double confidence_radius(const ArmStats& stats, std::int64_t t, const ConfidenceParams& params) {
    check_stats(stats, t);
    return std::sqrt(radicand_numerator(t, params) / (2.0 * static_cast<double>(stats.count)));
}

double ucb(const ArmStats& stats, std::int64_t t, const ConfidenceParams& params) {
    return std::min(1.0, stats.mean() + confidence_radius(stats, t, params));
}

double lcb(const ArmStats& stats, std::int64_t t, const ConfidenceParams& params) {
    return std::max(0.0, stats.mean() - confidence_radius(stats, t, params));
}

void dlcb_into(std::span<const ArmStats> all_stats, std::int64_t t, const ConfidenceParams& params,
               std::span<double> out) {
    const std::size_t k = params.num_arms();
    if (all_stats.size() != k || out.size() != k) {
        throw std::invalid_argument("dlcb: expected statistics for " + std::to_string(k) + " arms, got " +
                                    std::to_string(all_stats.size()));
    }
    if (t < 1) throw std::invalid_argument("round index must be >= 1");
    const double half_num = 0.5 * radicand_numerator(t, params);

    // out[] holds LCBs until the minimum UCB is known.
    double min_ucb = 1.0;
    for (std::size_t a = 0; a < k; ++a) {
        const ArmStats& s = all_stats[a];
        if (s.count < 1) {
            throw std::invalid_argument("dlcb: arm " + std::to_string(a) + " has no observations");
        }
        const double n = static_cast<double>(s.count);
        const double mean = s.sum_loss / n;
        const double radius = std::sqrt(half_num / n);
        min_ucb = std::min(min_ucb, std::min(1.0, mean + radius));
        out[a] = std::max(0.0, mean - radius);
    }
    for (std::size_t a = 0; a < k; ++a) out[a] = std::max(0.0, out[a] - min_ucb);
}

std::vector<double> dlcb_vector(std::span<const ArmStats> all_stats, std::int64_t t,
                                const ConfidenceParams& params) {
    std::vector<double> out(params.num_arms());
    dlcb_into(all_stats, t, params, out);
    return out;
}

std::vector<double> dlcb_from_bounds(std::span<const double> lcbs, std::span<const double> ucbs) {
    if (lcbs.size() != ucbs.size() || lcbs.empty()) throw std::invalid_argument("dlcb: bound vectors mismatch");
    const double min_ucb = *std::min_element(ucbs.begin(), ucbs.end());
    std::vector<double> out(lcbs.size());
    for (std::size_t a = 0; a < lcbs.size(); ++a) out[a] = std::max(0.0, lcbs[a] - min_ucb);
    return out;
}

double reciprocal_power_sum(std::int64_t m, std::int64_t n, double alpha) {
    if (m < 1 || n < m) throw std::invalid_argument("reciprocal_power_sum: need 1 <= m <= n");
    double sum = 0.0;
    double comp = 0.0;
    for (std::int64_t k = n; k >= m; --k) {
        const double term = std::pow(static_cast<double>(k), -alpha);
        const double next = sum + term;
        if (std::abs(sum) >= std::abs(term)) {
            comp += (sum - next) + term;
        } else {
            comp += (term - next) + sum;
        }
        sum = next;
    }
    return sum + comp;
}

double bernoulli_lower_tail_bound(std::int64_t n, double gamma) {
    if (n < 1) throw std::invalid_argument("bernoulli_lower_tail_bound: n must be >= 1");
    if (!(gamma > 0.0 && gamma <= 1.0)) throw std::invalid_argument("bernoulli_lower_tail_bound: gamma in (0,1]");
    return std::exp(-static_cast<double>(n) * gamma / 8.0);
}

double bernstein_tail(double nu, double c, double delta) {
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("bernstein_tail: delta must be in (0,1)");
    if (!(nu >= 0.0) || !(c > 0.0)) throw std::invalid_argument("bernstein_tail: need nu >= 0 and c > 0");
    const double log_inv = std::log(1.0 / delta);
    return std::sqrt(2.0 * nu * log_inv) + c * log_inv / 3.0;
}

}  // namespace bandit::confidence
