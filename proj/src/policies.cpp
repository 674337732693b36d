#include "bandit/policies.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace bandit {

double eta(std::int64_t t, std::size_t num_arms) {
    if (num_arms < 2) throw std::invalid_argument("eta: need K >= 2");
    if (t < 1) throw std::invalid_argument("eta: need t >= 1");
    const double kd = static_cast<double>(num_arms);
    return 0.5 * std::sqrt(std::log(kd) / (static_cast<double>(t) * kd));
}

void gibbs_into(std::span<const double> cumulative_loss, double eta_t, std::span<double> out) {
    if (cumulative_loss.empty() || out.size() != cumulative_loss.size()) {
        throw std::invalid_argument("gibbs: size mismatch");
    }
    if (!(eta_t >= 0.0)) throw std::invalid_argument("gibbs: eta must be >= 0");
    const double lo = *std::min_element(cumulative_loss.begin(), cumulative_loss.end());
    double z = 0.0;
    for (std::size_t a = 0; a < out.size(); ++a) {
        out[a] = std::exp(-eta_t * (cumulative_loss[a] - lo));
        z += out[a];
    }
    for (double& p : out) p /= z;
}

ProbVector gibbs_distribution(std::span<const double> cumulative_loss, double eta_t) {
    std::vector<double> out(cumulative_loss.size());
    gibbs_into(cumulative_loss, eta_t, out);
    return validate_distribution(out);
}

void mix_with_floor(std::span<const double> rho, std::span<const double> eps, std::span<double> out) {
    if (rho.size() != eps.size() || out.size() != rho.size()) throw std::invalid_argument("mix: size mismatch");
    const double total = std::accumulate(eps.begin(), eps.end(), 0.0);
    for (std::size_t a = 0; a < out.size(); ++a) out[a] = (1.0 - total) * rho[a] + eps[a];
}

std::vector<double> importance_weighted_losses(std::span<const double> p, ArmId played, Loss loss) {
    check_arm(played, p.size());
    if (!(p[played.index] > 0.0)) throw std::invalid_argument("played arm has zero probability");
    std::vector<double> out(p.size(), 0.0);
    out[played.index] = loss.value() / p[played.index];
    return out;
}

namespace {

void check_round(std::int64_t t, std::int64_t expected, const char* what) {
    if (t != expected) {
        throw std::logic_error(std::string(what) + ": expected round " + std::to_string(expected) + ", got " +
                               std::to_string(t));
    }
}

void point_mass_into(std::span<double> out, std::size_t arm) {
    std::fill(out.begin(), out.end(), 0.0);
    out[arm] = 1.0;
}

}  // namespace

// ---------------------------------------------------------------------------

Exp3pp::Exp3pp(GapEstimatorParams params, Exp3ppOptions options)
    : params_(params),
      options_(options),
      gap_(params),
      cumulative_iw_loss_(params.num_arms(), 0.0),
      rho_(params.num_arms()),
      eps_(params.num_arms()),
      dlcb_(params.num_arms()),
      dist_(params.num_arms()) {
    if (options_.xi_override && !(*options_.xi_override >= 0.0)) {
        throw std::invalid_argument("xi override must be >= 0");
    }
    if (!options_.initial_sweep && !options_.xi_override) {
        throw std::invalid_argument("skipping the initial sweep requires an xi override");
    }
    if (!(options_.eta_scale > 0.0)) throw std::invalid_argument("eta scale must be positive");
}

std::span<const double> Exp3pp::act(std::int64_t t) {
    check_round(t, round_ + 1, "exp3pp act");
    const std::size_t k = num_arms();
    acted_round_ = t;

    if (options_.initial_sweep && t <= static_cast<std::int64_t>(k)) {
        point_mass_into(dist_, static_cast<std::size_t>(t - 1));
        std::fill(eps_.begin(), eps_.end(), 0.0);
        std::fill(dlcb_.begin(), dlcb_.end(), 0.0);
        return dist_;
    }

    if (gap_.initialized() && t >= 2) {
        gap_.epsilon_into(t, dlcb_, eps_, options_.xi_override);
    } else {
        // Only reachable without the initial sweep, i.e. with an xi override.
        std::fill(dlcb_.begin(), dlcb_.end(), std::numeric_limits<double>::quiet_NaN());
        for (double& e : eps_) e = epsilon_from_xi(k, t, *options_.xi_override);
    }
    gibbs_into(cumulative_iw_loss_, options_.eta_scale * eta(t, k), rho_);
    mix_with_floor(rho_, eps_, dist_);
    return dist_;
}

void Exp3pp::update(std::int64_t t, ArmId arm, Loss loss) {
    check_round(t, round_ + 1, "exp3pp update");
    if (acted_round_ != t) throw std::logic_error("exp3pp update without act for the same round");
    check_arm(arm, num_arms());
    const double p = dist_[arm.index];
    assert(p > 0.0);
    if (!(p > 0.0)) throw std::logic_error("played arm had zero probability");
    cumulative_iw_loss_[arm.index] += loss.value() / p;
    gap_.observe(arm, loss);
    ++round_;
}

// ---------------------------------------------------------------------------

Exp3::Exp3(std::size_t num_arms) : cumulative_iw_loss_(num_arms, 0.0), dist_(num_arms) {
    if (num_arms < 2) throw std::invalid_argument("exp3: need K >= 2");
}

std::span<const double> Exp3::act(std::int64_t t) {
    check_round(t, round_ + 1, "exp3 act");
    acted_round_ = t;
    gibbs_into(cumulative_iw_loss_, 2.0 * eta(t, num_arms()), dist_);
    return dist_;
}

void Exp3::update(std::int64_t t, ArmId arm, Loss loss) {
    check_round(t, round_ + 1, "exp3 update");
    if (acted_round_ != t) throw std::logic_error("exp3 update without act for the same round");
    check_arm(arm, num_arms());
    const double p = dist_[arm.index];
    if (!(p > 0.0)) throw std::logic_error("played arm had zero probability");
    cumulative_iw_loss_[arm.index] += loss.value() / p;
    ++round_;
}

// ---------------------------------------------------------------------------

LcbGreedy::LcbGreedy(std::size_t num_arms, double alpha)
    : params_(alpha, num_arms), stats_(num_arms), dist_(num_arms) {}

ArmId LcbGreedy::choose(std::span<const confidence::ArmStats> stats, std::int64_t t,
                        const confidence::ConfidenceParams& params) {
    std::size_t best = 0;
    double best_lcb = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < stats.size(); ++a) {
        const double v = confidence::lcb(stats[a], t, params);
        if (v < best_lcb) {
            best_lcb = v;
            best = a;
        }
    }
    return ArmId(best);
}

std::span<const double> LcbGreedy::act(std::int64_t t) {
    check_round(t, round_ + 1, "lcb_greedy act");
    const auto k = static_cast<std::int64_t>(num_arms());
    const std::size_t arm = t <= k ? static_cast<std::size_t>(t - 1) : choose(stats_, t, params_).index;
    point_mass_into(dist_, arm);
    return dist_;
}

void LcbGreedy::update(std::int64_t t, ArmId arm, Loss loss) {
    check_round(t, round_ + 1, "lcb_greedy update");
    check_arm(arm, num_arms());
    stats_[arm.index].sum_loss += loss.value();
    ++stats_[arm.index].count;
    ++round_;
}

}  // namespace bandit
