#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "bandit/confidence.hpp"
#include "bandit/core.hpp"

namespace bandit {

/// alpha >= 3, beta >= 64 (alpha + 1), K >= 2.
class GapEstimatorParams {
public:
    GapEstimatorParams(double alpha, double beta, std::size_t num_arms);

    double alpha() const { return conf_.alpha(); }
    double beta() const { return beta_; }
    std::size_t num_arms() const { return conf_.num_arms(); }
    const confidence::ConfidenceParams& confidence() const { return conf_; }

private:
    confidence::ConfidenceParams conf_;
    double beta_;
};

/// Gap estimation from unweighted losses.
///
/// The estimator first sees one observation per arm (rounds 1..K). After
/// that, at round t it exposes the gap lower bounds DLCB_t(a) built from the
/// statistics of rounds 1..t-1, the exploration term
/// xi_t(a) = beta ln t / (t DLCB_t(a)^2), and the exploration floor
/// eps_t(a) = min{1/(2K), (1/2) sqrt(ln K / (tK)), xi_t(a)}.
///
/// Single owner. Query methods are const but must not race with observe().
class GapEstimator {
public:
    explicit GapEstimator(GapEstimatorParams params);

    const GapEstimatorParams& params() const { return params_; }
    std::size_t num_arms() const { return stats_.size(); }

    /// Rounds observed so far; the next round is rounds_elapsed() + 1.
    std::int64_t rounds_elapsed() const { return rounds_; }
    std::int64_t next_round() const { return rounds_ + 1; }

    /// True once every arm has at least one observation.
    bool initialized() const { return uninitialized_ == 0; }

    std::span<const confidence::ArmStats> stats() const { return stats_; }

    void observe(ArmId arm, Loss loss);

    std::vector<double> dlcb(std::int64_t t) const;
    void dlcb_into(std::int64_t t, std::span<double> out) const;

    /// +infinity when DLCB_t(arm) = 0. Requires t >= 2.
    double xi(ArmId arm, std::int64_t t) const;

    std::vector<double> epsilon(std::int64_t t) const;

    /// Writes DLCB_t into dlcb_out and eps_t into eps_out. When xi_override
    /// is set, it replaces xi_t(a) for every arm.
    void epsilon_into(std::int64_t t, std::span<double> dlcb_out, std::span<double> eps_out,
                      std::optional<double> xi_override = std::nullopt) const;

private:
    void require_ready(std::int64_t t) const;

    GapEstimatorParams params_;
    std::vector<confidence::ArmStats> stats_;
    std::int64_t rounds_{0};
    std::size_t uninitialized_;
};

/// beta ln t / (t d^2), +infinity at d = 0.
double xi_from_gap_estimate(double beta, std::int64_t t, double dlcb);

/// min{1/(2K), (1/2) sqrt(ln K / (tK)), xi}.
double epsilon_from_xi(std::size_t num_arms, std::int64_t t, double xi);

/// Smallest integer t >= 2 with t >= 4 K beta (ln t)^2 / (gap^4 ln K).
std::int64_t tmin_literal(double gap, std::size_t num_arms, double beta);
std::int64_t tmin_literal(double gap, const GapEstimatorParams& params);

/// Smallest integer t >= 2 with beta ln t / (t gap^2) <= (1/2) sqrt(ln K / (tK)),
/// i.e. the first round at which a gap estimate equal to the true gap makes
/// xi the active term of the exploration floor.
std::int64_t tmin_crossing(double gap, std::size_t num_arms, double beta);
std::int64_t tmin_crossing(double gap, const GapEstimatorParams& params);

/// Whether the crossing inequality holds at round t.
bool crossing_holds(double gap, std::size_t num_arms, double beta, std::int64_t t);

}  // namespace bandit
