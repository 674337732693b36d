#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bandit/confidence.hpp"
#include "bandit/core.hpp"
#include "bandit/gap_estimator.hpp"

namespace bandit {

/// (1/2) sqrt(ln K / (tK)).
double eta(std::int64_t t, std::size_t num_arms);

/// Exponential weights e^{-eta L(a)} / sum_a' e^{-eta L(a')}, computed on
/// L - min L so that large cumulative losses never underflow.
ProbVector gibbs_distribution(std::span<const double> cumulative_loss, double eta_t);
void gibbs_into(std::span<const double> cumulative_loss, double eta_t, std::span<double> out);

/// (1 - sum eps) rho(a) + eps(a).
void mix_with_floor(std::span<const double> rho, std::span<const double> eps, std::span<double> out);

/// Importance-weighted loss vector for one round: loss / p(played) on the
/// played arm, zero elsewhere.
std::vector<double> importance_weighted_losses(std::span<const double> p, ArmId played, Loss loss);

/// Uniform interface used by the harness.
///
/// Each round t = 1, 2, ... the caller invokes act(t) once, draws an arm from
/// the returned distribution, then calls update(t, arm, loss) once. The span
/// returned by act stays valid until the next call on the policy.
class Policy {
public:
    virtual ~Policy() = default;

    virtual std::string name() const = 0;
    virtual std::size_t num_arms() const = 0;

    virtual std::span<const double> act(std::int64_t t) = 0;
    virtual void update(std::int64_t t, ArmId arm, Loss loss) = 0;

    /// Gap estimates and exploration floor of the last act(), or empty spans
    /// for policies without them.
    virtual std::span<const double> last_dlcb() const { return {}; }
    virtual std::span<const double> last_epsilon() const { return {}; }
};

struct Exp3ppOptions {
    /// Replaces xi_t(a) for every arm; any value >= 0 is admissible.
    std::optional<double> xi_override;
    /// Multiplies the learning rate (1/2) sqrt(ln K / (tK)).
    double eta_scale = 1.0;
    /// Play arms 0..K-1 in rounds 1..K before regular operation. Can only be
    /// disabled together with an xi override, since DLCB needs one sample per arm.
    bool initial_sweep = true;
};

/// Exponential weights over importance-weighted losses, with the exploration
/// floor driven by the unweighted gap estimator.
///
/// Rounds 1..K play arm t-1 with probability one (importance weight 1).
/// From round K+1 the sampling distribution is
///   rho~_t(a) = (1 - sum eps_t) rho_t(a) + eps_t(a)
/// where rho_t is the Gibbs distribution of the cumulative importance-weighted
/// losses at rate eta(t, K) and eps_t comes from the gap estimator.
class Exp3pp final : public Policy {
public:
    explicit Exp3pp(GapEstimatorParams params, Exp3ppOptions options = {});

    std::string name() const override { return "exp3pp"; }
    std::size_t num_arms() const override { return cumulative_iw_loss_.size(); }

    std::span<const double> act(std::int64_t t) override;
    void update(std::int64_t t, ArmId arm, Loss loss) override;

    std::span<const double> last_dlcb() const override { return dlcb_; }
    std::span<const double> last_epsilon() const override { return eps_; }

    std::span<const double> cumulative_iw_loss() const { return cumulative_iw_loss_; }
    const GapEstimator& gap_estimator() const { return gap_; }
    std::int64_t rounds_played() const { return round_; }

private:
    GapEstimatorParams params_;
    Exp3ppOptions options_;
    GapEstimator gap_;
    std::vector<double> cumulative_iw_loss_;
    std::vector<double> rho_;
    std::vector<double> eps_;
    std::vector<double> dlcb_;
    std::vector<double> dist_;
    std::int64_t round_{0};
    std::int64_t acted_round_{0};
};

/// EXP3 with losses: Gibbs distribution at rate sqrt(ln K / (tK)), no mixing.
class Exp3 final : public Policy {
public:
    explicit Exp3(std::size_t num_arms);

    std::string name() const override { return "exp3"; }
    std::size_t num_arms() const override { return cumulative_iw_loss_.size(); }

    std::span<const double> act(std::int64_t t) override;
    void update(std::int64_t t, ArmId arm, Loss loss) override;

    std::span<const double> cumulative_iw_loss() const { return cumulative_iw_loss_; }

private:
    std::vector<double> cumulative_iw_loss_;
    std::vector<double> dist_;
    std::int64_t round_{0};
    std::int64_t acted_round_{0};
};

/// Plays each arm once, then always the arm with the lowest LCB_t (lowest
/// index on ties), using the same confidence bounds as the gap estimator.
class LcbGreedy final : public Policy {
public:
    LcbGreedy(std::size_t num_arms, double alpha);

    std::string name() const override { return "lcb_greedy"; }
    std::size_t num_arms() const override { return stats_.size(); }

    std::span<const double> act(std::int64_t t) override;
    void update(std::int64_t t, ArmId arm, Loss loss) override;

    std::span<const confidence::ArmStats> stats() const { return stats_; }

    /// Arm chosen by the LCB rule at round t for the given statistics.
    static ArmId choose(std::span<const confidence::ArmStats> stats, std::int64_t t,
                        const confidence::ConfidenceParams& params);

private:
    confidence::ConfidenceParams params_;
    std::vector<confidence::ArmStats> stats_;
    std::vector<double> dist_;
    std::int64_t round_{0};
};

}  // namespace bandit
