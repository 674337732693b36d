#include "bandit/gap_estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace bandit {

GapEstimatorParams::GapEstimatorParams(double alpha, double beta, std::size_t num_arms)
    : conf_(alpha, num_arms), beta_(beta) {
    if (!(beta >= 64.0 * (alpha + 1.0)) || !std::isfinite(beta)) {
        throw std::invalid_argument("beta must be >= 64 (alpha + 1) = " + std::to_string(64.0 * (alpha + 1.0)) +
                                    ", got " + std::to_string(beta));
    }
}

GapEstimator::GapEstimator(GapEstimatorParams params)
    : params_(params), stats_(params.num_arms()), uninitialized_(params.num_arms()) {}

void GapEstimator::observe(ArmId arm, Loss loss) {
    check_arm(arm, stats_.size());
    auto& s = stats_[arm.index];
    if (s.count == 0) --uninitialized_;
    s.sum_loss += loss.value();
    ++s.count;
    ++rounds_;
}

void GapEstimator::require_ready(std::int64_t t) const {
    if (!initialized()) {
        throw std::logic_error("gap estimator queried before every arm was played once");
    }
    if (t < 2) throw std::invalid_argument("gap estimator queries need t >= 2");
}

void GapEstimator::dlcb_into(std::int64_t t, std::span<double> out) const {
    if (!initialized()) {
        throw std::logic_error("gap estimator queried before every arm was played once");
    }
    confidence::dlcb_into(stats_, t, params_.confidence(), out);
}

std::vector<double> GapEstimator::dlcb(std::int64_t t) const {
    std::vector<double> out(stats_.size());
    dlcb_into(t, out);
    return out;
}

double GapEstimator::xi(ArmId arm, std::int64_t t) const {
    require_ready(t);
    check_arm(arm, stats_.size());
    return xi_from_gap_estimate(params_.beta(), t, dlcb(t)[arm.index]);
}

std::vector<double> GapEstimator::epsilon(std::int64_t t) const {
    std::vector<double> d(stats_.size());
    std::vector<double> eps(stats_.size());
    epsilon_into(t, d, eps);
    return eps;
}

void GapEstimator::epsilon_into(std::int64_t t, std::span<double> dlcb_out, std::span<double> eps_out,
                                std::optional<double> xi_override) const {
    require_ready(t);
    if (eps_out.size() != stats_.size()) throw std::invalid_argument("epsilon: output size mismatch");
    dlcb_into(t, dlcb_out);

    const std::size_t k = stats_.size();
    const double kd = static_cast<double>(k);
    const double log_t = std::log(static_cast<double>(t));
    const double td = static_cast<double>(t);
    const double cap = std::min(0.5 / kd, 0.5 * std::sqrt(params_.confidence().log_num_arms() / (td * kd)));
    for (std::size_t a = 0; a < k; ++a) {
        double xi;
        if (xi_override) {
            xi = *xi_override;
        } else if (dlcb_out[a] > 0.0) {
            xi = params_.beta() * log_t / (td * dlcb_out[a] * dlcb_out[a]);
        } else {
            xi = std::numeric_limits<double>::infinity();
        }
        eps_out[a] = std::min(cap, xi);
    }
}

double xi_from_gap_estimate(double beta, std::int64_t t, double dlcb) {
    if (t < 2) throw std::invalid_argument("xi needs t >= 2");
    if (dlcb <= 0.0) return std::numeric_limits<double>::infinity();
    return beta * std::log(static_cast<double>(t)) / (static_cast<double>(t) * dlcb * dlcb);
}

double epsilon_from_xi(std::size_t num_arms, std::int64_t t, double xi) {
    const double kd = static_cast<double>(num_arms);
    const double td = static_cast<double>(t);
    return std::min({0.5 / kd, 0.5 * std::sqrt(std::log(kd) / (td * kd)), xi});
}

namespace {

void check_tmin_args(double gap, std::size_t num_arms, double beta) {
    if (!(gap > 0.0 && gap <= 1.0)) throw std::invalid_argument("t_min: gap must be in (0,1]");
    if (num_arms < 2) throw std::invalid_argument("t_min: need at least two arms");
    if (!(beta > 0.0)) throw std::invalid_argument("t_min: beta must be positive");
}

// Both defining inequalities are false on [3, 7] whenever they are false at
// t = 2, and monotone (false then true) from t = 7 on. Bracket geometrically,
// then bisect on integers.
template <typename Pred>
std::int64_t first_round_satisfying(Pred pred) {
    if (pred(2)) return 2;
    std::int64_t lo = 7;
    std::int64_t hi = 16;
    while (!pred(hi)) {
        lo = hi;
        if (hi > std::numeric_limits<std::int64_t>::max() / 2) throw std::overflow_error("t_min search overflow");
        hi *= 2;
    }
    while (hi - lo > 1) {
        const std::int64_t mid = lo + (hi - lo) / 2;
        if (pred(mid)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return hi;
}

}  // namespace

std::int64_t tmin_literal(double gap, std::size_t num_arms, double beta) {
    check_tmin_args(gap, num_arms, beta);
    const double kd = static_cast<double>(num_arms);
    const double scale = 4.0 * kd * beta / (std::pow(gap, 4) * std::log(kd));
    return first_round_satisfying([scale](std::int64_t t) {
        const double lt = std::log(static_cast<double>(t));
        return static_cast<double>(t) >= scale * lt * lt;
    });
}

std::int64_t tmin_literal(double gap, const GapEstimatorParams& params) {
    return tmin_literal(gap, params.num_arms(), params.beta());
}

bool crossing_holds(double gap, std::size_t num_arms, double beta, std::int64_t t) {
    const double kd = static_cast<double>(num_arms);
    const double td = static_cast<double>(t);
    return beta * std::log(td) / (td * gap * gap) <= 0.5 * std::sqrt(std::log(kd) / (td * kd));
}

std::int64_t tmin_crossing(double gap, std::size_t num_arms, double beta) {
    check_tmin_args(gap, num_arms, beta);
    return first_round_satisfying(
        [=](std::int64_t t) { return crossing_holds(gap, num_arms, beta, t); });
}

std::int64_t tmin_crossing(double gap, const GapEstimatorParams& params) {
    return tmin_crossing(gap, params.num_arms(), params.beta());
}

}  // namespace bandit
