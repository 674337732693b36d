#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace bandit::validation {

/// Statistical verdicts allow this many standard errors of slack.
inline constexpr double kSlackStandardErrors = 3.0;

inline constexpr std::uint64_t kDefaultSeed = 0x5eed5eedULL;

enum class Verdict { kHolds, kViolated };

/// kAtMost: empirical <= claimed_bound + slack * stderr.
/// kAtLeast: empirical >= claimed_bound.
enum class Relation { kAtMost, kAtLeast };

/// kClaim checks decide whether a suite passes. kAudit checks record a
/// stated constant that is known not to hold; their verdict is reported
/// but does not fail the suite.
enum class Role { kClaim, kAudit };

struct CheckReport {
    std::string suite;
    nlohmann::ordered_json params;
    double claimed_bound = 0.0;
    double empirical = 0.0;
    double standard_error = 0.0;
    double slack_se = kSlackStandardErrors;
    Relation relation = Relation::kAtMost;
    Role role = Role::kClaim;
    Verdict verdict = Verdict::kViolated;

    nlohmann::ordered_json to_json() const;
};

struct SuiteReport {
    std::string suite;
    std::vector<CheckReport> checks;

    bool passed() const;
    nlohmann::ordered_json to_json() const;
};

std::string to_string(Verdict v);

/// Applies the relation with the given slack.
Verdict decide(double empirical, double claimed, double standard_error, Relation relation, double slack_se);

/// sqrt(p (1 - p) / n).
double binomial_standard_error(double p, std::int64_t n);

/// Exact P(Bin(n, p) <= k), summed in log space.
double binomial_cdf(std::int64_t k, std::int64_t n, double p);

struct SuiteOptions {
    std::uint64_t seed = kDefaultSeed;
    /// Overrides the suite's default Monte-Carlo replicate count.
    std::optional<std::int64_t> replicates;
    std::size_t parallel = 1;
};

// Parameters of each suite. Defaults are the desk-scale acceptance settings.

struct CoverageParams {
    std::vector<double> means{0.4, 0.6};
    double alpha = 3.0;
    std::vector<std::int64_t> rounds{10, 100};
    std::int64_t replicates = 100000;
};

struct Proposition1UpperParams {
    std::vector<double> means{0.4, 0.6};
    double alpha = 3.0;
    double beta = 256.0;
    std::vector<std::int64_t> rounds{100, 1000};
    std::int64_t replicates = 10000;
};

struct Proposition1SandwichParams {
    std::vector<double> means{0.05, 0.95};
    double alpha = 3.0;
    double beta = 256.0;
    std::int64_t horizon = 1000000;
    std::int64_t replicates = 200;
    double min_fraction = 0.95;
};

struct Theorem1Params {
    std::vector<std::size_t> arm_counts{2, 10};
    std::int64_t horizon = 10000;
    std::int64_t replicates = 100;
    double alpha = 3.0;
    double beta = 256.0;
};

struct LemmaSumParams {
    std::int64_t m = 2;
    std::int64_t n = 1000;
    double alpha = 3.0;
    std::int64_t max_m = 100;
    std::int64_t max_n = 1000000;
    std::vector<double> alphas{2.0, 2.5, 3.0, 4.0};
};

struct ThmSbParams {
    std::int64_t n = 200;
    double gamma = 0.05;
    std::int64_t replicates = 100000;
};

struct BernsteinParams {
    std::int64_t n = 100;
    std::vector<double> deltas{0.1, 0.01};
    std::int64_t replicates = 100000;
};

/// Frequency of {exists s < t: UCB with s i.i.d. samples <= mu} and of the
/// LCB counterpart, against 1 / (K t^{alpha - 1}).
SuiteReport confidence_coverage(const CoverageParams& p, const SuiteOptions& o);

/// Frequency of {DLCB_t(a) >= Delta(a)} for suboptimal arms and of
/// {DLCB_t(a*) > 0} for the best arm under the combined policy, against
/// 1 / t^{alpha - 1}.
SuiteReport proposition1_upper(const Proposition1UpperParams& p, const SuiteOptions& o);

/// Fraction of replicates with Delta/2 <= DLCB_T(a) <= Delta for every
/// suboptimal arm at the horizon.
SuiteReport proposition1_sandwich(const Proposition1SandwichParams& p, const SuiteOptions& o);

/// Mean hindsight regret of the combined policy against 4 sqrt(K t ln K) at
/// every checkpoint, for each shipped adversarial generator and arm count.
SuiteReport theorem1_adversarial(const Theorem1Params& p, const SuiteOptions& o);

/// Exact partial sums of k^{-alpha} against 1/(2 m^{alpha-1}) (audit) and
/// 2/m^{alpha-1} (claim).
SuiteReport lemma_sum(const LemmaSumParams& p);

/// Lower tail of a sum of Bernoulli variables with conditional means >= gamma
/// (i.i.d. and history-dependent) against e^{-n gamma / 8}.
SuiteReport thm_sb(const ThmSbParams& p, const SuiteOptions& o);

/// Exceedance frequency of the Bernstein threshold for sums of i.i.d.
/// uniform[-1, 1] increments (nu = n/3, c = 1).
SuiteReport bernstein(const BernsteinParams& p, const SuiteOptions& o);

const std::vector<std::string>& registered_suites();

/// Runs the named suite with its default parameters. Throws
/// std::invalid_argument for unknown names.
SuiteReport run_suite(const std::string& name, const SuiteOptions& options = {});

/// run_suite, then writes <out_dir>/<suite>.json when out_dir is given.
SuiteReport validate_suite(const std::string& name, const SuiteOptions& options,
                           const std::optional<std::filesystem::path>& out_dir);

}  // namespace bandit::validation
