#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bandit/environments.hpp"
#include "bandit/policies.hpp"

namespace bandit {

enum class PolicyKind { kExp3pp, kExp3, kLcbGreedy };

std::string to_string(PolicyKind kind);
PolicyKind parse_policy_kind(const std::string& name);

struct PolicySpec {
    std::string id;
    PolicyKind kind = PolicyKind::kExp3pp;
    double alpha = 3.0;
    double beta = 256.0;
};

std::unique_ptr<Policy> make_policy(const PolicySpec& spec, std::size_t num_arms);

struct ExperimentConfig {
    std::string name = "experiment";
    std::size_t num_arms = 2;
    std::int64_t horizon = 1000;
    EnvironmentSpec env = StochasticSpec{{0.4, 0.6}};
    std::vector<PolicySpec> policies;
    std::int64_t replicates = 1;
    std::uint64_t seed = 0;
    std::vector<std::int64_t> checkpoints;
    bool diagnostics = false;
};

/// Throws std::invalid_argument on the first violated constraint:
/// K >= 2 and matching the environment, horizon >= K, replicates >= 1,
/// non-empty policy list with unique ids, checkpoints strictly increasing
/// inside [K+1, horizon], explicit loss matrices covering the horizon.
void validate_config(const ExperimentConfig& config);

struct RegretRecord {
    std::size_t policy = 0;
    std::int64_t replicate = 0;
    std::int64_t t = 0;
    /// sum_a N_t(a) Delta(a); NaN when the environment has no ground truth.
    double pseudo_regret = 0.0;
    double realized_loss = 0.0;
    /// min_a sum_{s<=t} loss_s(a).
    double hindsight_best_loss = 0.0;

    /// Filled only when diagnostics are enabled: N_t(a) after round t, and
    /// the DLCB_t(a) and eps_t(a) the policy used at round t.
    std::vector<std::int64_t> counts;
    std::vector<double> dlcb;
    std::vector<double> epsilon;

    double hindsight_regret() const { return realized_loss - hindsight_best_loss; }
};

/// sum_a counts(a) gaps(a).
double pseudo_regret(std::span<const std::int64_t> counts, std::span<const double> gaps);

/// cumulative_policy_loss - min_a column_sums(a).
double hindsight_regret(double cumulative_policy_loss, std::span<const double> column_sums);

/// round(10^{k / points_per_decade}) for k >= points_per_decade while <= T,
/// deduplicated, with T appended when missing.
std::vector<std::int64_t> checkpoint_grid(std::int64_t horizon, int points_per_decade);

/// Stream identifier reserved for environment randomness. Every policy in a
/// replicate faces the same loss matrix.
inline constexpr std::uint64_t kEnvironmentStreamId = ~std::uint64_t{0};

/// Plays one (policy, replicate) game and returns one record per checkpoint.
std::vector<RegretRecord> simulate_replicate(const ExperimentConfig& config, const Environment& env,
                                             std::size_t policy_index, std::int64_t replicate);

struct RunOptions {
    std::size_t parallel = 1;
};

/// Runs every (policy, replicate) pair on a pool of `parallel` workers.
/// Records come back ordered by (policy, replicate, t) whatever the pool width.
std::vector<RegretRecord> run_experiment(const ExperimentConfig& config, const RunOptions& options = {});

/// Mean and standard error across replicates at one checkpoint.
struct CheckpointSummary {
    std::size_t policy = 0;
    std::int64_t t = 0;
    std::int64_t replicates = 0;
    double mean_pseudo_regret = 0.0;
    double se_pseudo_regret = 0.0;
    double mean_hindsight_regret = 0.0;
    double se_hindsight_regret = 0.0;
    /// mean of realized_loss - t * mu(a*), the second estimator of R(t).
    double mean_excess_loss = 0.0;
    double se_excess_loss = 0.0;
};

std::vector<CheckpointSummary> summarize(const ExperimentConfig& config, std::span<const RegretRecord> records);

/// Slope of log(mean regret) against log(t) between two checkpoints.
double loglog_slope(double t0, double r0, double t1, double r1);

void write_results_csv(std::ostream& out, const ExperimentConfig& config, std::span<const RegretRecord> records);
void write_diagnostics_csv(std::ostream& out, const ExperimentConfig& config,
                           std::span<const RegretRecord> records);
void write_summary_csv(std::ostream& out, const ExperimentConfig& config,
                       std::span<const CheckpointSummary> summary);
void write_metadata_json(std::ostream& out, const ExperimentConfig& config);

/// Writes results.csv, summary.csv, metadata.json and, with diagnostics,
/// diagnostics.csv into out_dir.
void write_experiment(const std::filesystem::path& out_dir, const ExperimentConfig& config,
                      std::span<const RegretRecord> records);

/// Shortest round-trip decimal form; "nan" for NaN.
std::string format_double(double v);

/// Parses the JSON config format. Relative matrix paths resolve against base_dir.
ExperimentConfig parse_config(const std::string& json_text, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace bandit
