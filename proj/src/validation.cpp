#include "bandit/validation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <stdexcept>

#include "bandit/confidence.hpp"
#include "bandit/core.hpp"
#include "bandit/gap_estimator.hpp"
#include "bandit/harness.hpp"

namespace bandit::validation {

using nlohmann::ordered_json;

std::string to_string(Verdict v) { return v == Verdict::kHolds ? "HOLDS" : "VIOLATED"; }

ordered_json CheckReport::to_json() const {
    ordered_json j;
    j["suite"] = suite;
    j["params"] = params;
    j["claimed_bound"] = claimed_bound;
    j["empirical"] = empirical;
    j["stderr"] = standard_error;
    j["verdict"] = to_string(verdict);
    j["relation"] = relation == Relation::kAtMost ? "empirical <= claimed_bound + slack_se * stderr"
                                                  : "empirical >= claimed_bound";
    j["slack_se"] = slack_se;
    j["role"] = role == Role::kClaim ? "claim" : "audit";
    return j;
}

bool SuiteReport::passed() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const CheckReport& c) { return c.role == Role::kAudit || c.verdict == Verdict::kHolds; });
}

ordered_json SuiteReport::to_json() const {
    ordered_json arr = ordered_json::array();
    for (const auto& c : checks) arr.push_back(c.to_json());
    return arr;
}

Verdict decide(double empirical, double claimed, double standard_error, Relation relation, double slack_se) {
    const bool ok = relation == Relation::kAtMost ? empirical <= claimed + slack_se * standard_error
                                                  : empirical >= claimed;
    return ok ? Verdict::kHolds : Verdict::kViolated;
}

double binomial_standard_error(double p, std::int64_t n) {
    return std::sqrt(std::max(0.0, p * (1.0 - p)) / static_cast<double>(n));
}

double binomial_cdf(std::int64_t k, std::int64_t n, double p) {
    if (k < 0) return 0.0;
    if (k >= n) return 1.0;
    const double lp = std::log(p);
    const double lq = std::log1p(-p);
    const double lgn = std::lgamma(static_cast<double>(n) + 1.0);
    double total = 0.0;
    for (std::int64_t i = 0; i <= k; ++i) {
        const double di = static_cast<double>(i);
        const double dn = static_cast<double>(n);
        total += std::exp(lgn - std::lgamma(di + 1.0) - std::lgamma(dn - di + 1.0) + di * lp + (dn - di) * lq);
    }
    return std::min(1.0, total);
}

namespace {

CheckReport make_check(std::string suite, ordered_json params, double claimed, double empirical, double se,
                       Relation relation = Relation::kAtMost, Role role = Role::kClaim,
                       double slack_se = kSlackStandardErrors) {
    CheckReport c;
    c.suite = std::move(suite);
    c.params = std::move(params);
    c.claimed_bound = claimed;
    c.empirical = empirical;
    c.standard_error = se;
    c.slack_se = slack_se;
    c.relation = relation;
    c.role = role;
    c.verdict = decide(empirical, claimed, se, relation, slack_se);
    return c;
}

std::int64_t reps_or(const SuiteOptions& o, std::int64_t fallback) {
    const auto r = o.replicates.value_or(fallback);
    if (r < 1) throw std::invalid_argument("replicate count must be >= 1");
    return r;
}

// Distinct stream families for the concentration suites.
constexpr std::uint64_t kCoverageStreams = 0x1000;
constexpr std::uint64_t kSbStreams = 0x2000;
constexpr std::uint64_t kBernsteinStreams = 0x3000;

}  // namespace

SuiteReport confidence_coverage(const CoverageParams& p, const SuiteOptions& o) {
    const std::int64_t reps = reps_or(o, p.replicates);
    const std::size_t k = p.means.size();
    const confidence::ConfidenceParams params(p.alpha, k);
    SuiteReport report{"confidence-coverage", {}};

    for (std::size_t ti = 0; ti < p.rounds.size(); ++ti) {
        const std::int64_t t = p.rounds[ti];
        if (t < static_cast<std::int64_t>(k) || t < 2) throw std::invalid_argument("coverage: need t >= max(K, 2)");
        const double bound = 1.0 / (static_cast<double>(k) * std::pow(static_cast<double>(t), p.alpha - 1.0));
        for (std::size_t a = 0; a < k; ++a) {
            const double mu = p.means[a];
            std::int64_t ucb_misses = 0;
            std::int64_t lcb_misses = 0;
            for (std::int64_t r = 0; r < reps; ++r) {
                RandomStream stream(derive_stream_seed(o.seed, kCoverageStreams + 64 * ti + a,
                                                       static_cast<std::uint64_t>(r)));
                confidence::ArmStats s;
                bool ucb_miss = false;
                bool lcb_miss = false;
                // Union over every sample count the arm could have at round t.
                for (std::int64_t n = 1; n <= t - 1; ++n) {
                    s.sum_loss += stream.uniform() < mu ? 1.0 : 0.0;
                    s.count = n;
                    ucb_miss = ucb_miss || confidence::ucb(s, t, params) <= mu;
                    lcb_miss = lcb_miss || confidence::lcb(s, t, params) >= mu;
                }
                ucb_misses += ucb_miss;
                lcb_misses += lcb_miss;
            }
            for (const auto& [side, misses] : {std::pair{"ucb <= mu", ucb_misses}, std::pair{"lcb >= mu", lcb_misses}}) {
                const double freq = static_cast<double>(misses) / static_cast<double>(reps);
                report.checks.push_back(make_check(
                    report.suite,
                    {{"event", side}, {"arm", a}, {"mu", mu}, {"t", t}, {"K", k}, {"alpha", p.alpha},
                     {"replicates", reps}, {"seed", o.seed}},
                    bound, freq, binomial_standard_error(freq, reps)));
            }
        }
    }
    return report;
}

SuiteReport proposition1_upper(const Proposition1UpperParams& p, const SuiteOptions& o) {
    ExperimentConfig config;
    config.name = "proposition1-upper";
    config.num_arms = p.means.size();
    config.horizon = *std::max_element(p.rounds.begin(), p.rounds.end());
    config.env = StochasticSpec{p.means};
    config.policies = {PolicySpec{"exp3pp", PolicyKind::kExp3pp, p.alpha, p.beta}};
    config.replicates = reps_or(o, p.replicates);
    config.seed = o.seed;
    config.checkpoints = p.rounds;
    std::sort(config.checkpoints.begin(), config.checkpoints.end());
    config.diagnostics = true;

    const auto records = run_experiment(config, RunOptions{o.parallel});
    const auto truth = *ground_truth(config.env);

    // hits[(t, a)]
    std::map<std::pair<std::int64_t, std::size_t>, std::int64_t> hits;
    for (const auto& r : records) {
        for (std::size_t a = 0; a < config.num_arms; ++a) {
            const double gap = truth.gaps[a];
            // For the best arm gap = 0 and DLCB >= 0 always holds, so the
            // meaningful event is a strictly positive estimate.
            const bool event = gap > 0.0 ? r.dlcb[a] >= gap : r.dlcb[a] > 0.0;
            hits[{r.t, a}] += event;
        }
    }

    SuiteReport report{"proposition1-upper", {}};
    for (const auto t : config.checkpoints) {
        const double bound = 1.0 / std::pow(static_cast<double>(t), p.alpha - 1.0);
        for (std::size_t a = 0; a < config.num_arms; ++a) {
            const double freq = static_cast<double>(hits[{t, a}]) / static_cast<double>(config.replicates);
            const bool best = truth.gaps[a] == 0.0;
            report.checks.push_back(make_check(
                report.suite,
                {{"event", best ? "dlcb > 0 (best arm)" : "dlcb >= gap"}, {"arm", a}, {"gap", truth.gaps[a]},
                 {"means", p.means}, {"t", t}, {"alpha", p.alpha}, {"beta", p.beta},
                 {"replicates", config.replicates}, {"seed", o.seed}},
                bound, freq, binomial_standard_error(freq, config.replicates)));
        }
    }
    return report;
}

SuiteReport proposition1_sandwich(const Proposition1SandwichParams& p, const SuiteOptions& o) {
    ExperimentConfig config;
    config.name = "proposition1-sandwich";
    config.num_arms = p.means.size();
    config.horizon = p.horizon;
    config.env = StochasticSpec{p.means};
    config.policies = {PolicySpec{"exp3pp", PolicyKind::kExp3pp, p.alpha, p.beta}};
    config.replicates = reps_or(o, p.replicates);
    config.seed = o.seed;
    config.checkpoints = {p.horizon};
    config.diagnostics = true;

    const auto records = run_experiment(config, RunOptions{o.parallel});
    const auto truth = *ground_truth(config.env);

    std::int64_t inside = 0;
    double min_ratio = std::numeric_limits<double>::infinity();
    double max_ratio = 0.0;
    std::int64_t tmin = 0;
    for (std::size_t a = 0; a < config.num_arms; ++a) {
        if (truth.gaps[a] > 0.0) tmin = std::max(tmin, tmin_literal(truth.gaps[a], config.num_arms, p.beta));
    }
    for (const auto& r : records) {
        bool ok = true;
        for (std::size_t a = 0; a < config.num_arms; ++a) {
            const double gap = truth.gaps[a];
            if (gap <= 0.0) continue;
            const double d = r.dlcb[a];
            min_ratio = std::min(min_ratio, d / gap);
            max_ratio = std::max(max_ratio, d / gap);
            ok = ok && d >= 0.5 * gap && d <= gap;
        }
        inside += ok;
    }
    const double frac = static_cast<double>(inside) / static_cast<double>(config.replicates);

    SuiteReport report{"proposition1-sandwich", {}};
    report.checks.push_back(make_check(
        report.suite,
        {{"event", "gap/2 <= dlcb <= gap for every suboptimal arm"}, {"means", p.means}, {"t", p.horizon},
         {"alpha", p.alpha}, {"beta", p.beta}, {"tmin_literal", tmin}, {"min_dlcb_over_gap", min_ratio},
         {"max_dlcb_over_gap", max_ratio}, {"replicates", config.replicates}, {"seed", o.seed}},
        p.min_fraction, frac, binomial_standard_error(frac, config.replicates), Relation::kAtLeast));
    report.checks.push_back(make_check(report.suite, {{"event", "horizon >= tmin_literal"}, {"t", p.horizon}},
                                       static_cast<double>(tmin), static_cast<double>(p.horizon), 0.0,
                                       Relation::kAtLeast));
    return report;
}

SuiteReport theorem1_adversarial(const Theorem1Params& p, const SuiteOptions& o) {
    SuiteReport report{"theorem1-adversarial", {}};
    for (const std::size_t k : p.arm_counts) {
        const std::vector<std::pair<std::string, AdversarialSpec>> generators{
            {"switching", SwitchingGenerator{k, 0.2, 0.8, p.horizon / 2 + 1}},
            {"sinusoidal", SinusoidalGenerator{k, 1000.0}},
        };
        for (const auto& [gen_name, gen] : generators) {
            ExperimentConfig config;
            config.name = "theorem1-" + gen_name;
            config.num_arms = k;
            config.horizon = p.horizon;
            config.env = gen;
            config.policies = {PolicySpec{"exp3pp", PolicyKind::kExp3pp, p.alpha, p.beta}};
            config.replicates = reps_or(o, p.replicates);
            config.seed = o.seed;
            for (auto t : checkpoint_grid(p.horizon, 4)) {
                if (t > static_cast<std::int64_t>(k)) config.checkpoints.push_back(t);
            }
            const auto records = run_experiment(config, RunOptions{o.parallel});
            const auto summary = summarize(config, records);

            // Report the checkpoint with the smallest margin to the bound.
            const CheckpointSummary* worst = nullptr;
            double worst_ratio = -std::numeric_limits<double>::infinity();
            bool all_hold = true;
            const double kd = static_cast<double>(k);
            for (const auto& s : summary) {
                const double bound = 4.0 * std::sqrt(kd * static_cast<double>(s.t) * std::log(kd));
                all_hold = all_hold && s.mean_hindsight_regret <= bound;
                const double ratio = s.mean_hindsight_regret / bound;
                if (ratio > worst_ratio) {
                    worst_ratio = ratio;
                    worst = &s;
                }
            }
            const double bound = 4.0 * std::sqrt(kd * static_cast<double>(worst->t) * std::log(kd));
            const double final_bound = 4.0 * std::sqrt(kd * static_cast<double>(p.horizon) * std::log(kd));
            auto check = make_check(
                report.suite,
                {{"generator", gen_name}, {"K", k}, {"horizon", p.horizon}, {"worst_t", worst->t},
                 {"bound_at_horizon", final_bound}, {"mean_regret_at_horizon", summary.back().mean_hindsight_regret},
                 {"checkpoints", config.checkpoints}, {"replicates", config.replicates}, {"seed", o.seed}},
                bound, worst->mean_hindsight_regret, worst->se_hindsight_regret, Relation::kAtMost, Role::kClaim,
                0.0);
            check.verdict = all_hold ? Verdict::kHolds : Verdict::kViolated;
            report.checks.push_back(std::move(check));
        }
    }
    return report;
}

SuiteReport lemma_sum(const LemmaSumParams& p) {
    SuiteReport report{"lemma-sum", {}};
    const auto stated_constant = [](std::int64_t m, double alpha) {
        return 1.0 / (2.0 * std::pow(static_cast<double>(m), alpha - 1.0));
    };
    const auto corrected_constant = [](std::int64_t m, double alpha) {
        return 2.0 / std::pow(static_cast<double>(m), alpha - 1.0);
    };

    const double exact = confidence::reciprocal_power_sum(p.m, p.n, p.alpha);
    const ordered_json point{{"m", p.m}, {"n", p.n}, {"alpha", p.alpha}};
    auto stated = point;
    stated["constant"] = "1/(2 m^(alpha-1))";
    auto fixed = point;
    fixed["constant"] = "2/m^(alpha-1)";
    report.checks.push_back(make_check(report.suite, stated, stated_constant(p.m, p.alpha), exact, 0.0,
                                       Relation::kAtMost, Role::kAudit, 0.0));
    report.checks.push_back(make_check(report.suite, fixed, corrected_constant(p.m, p.alpha), exact, 0.0,
                                       Relation::kAtMost, Role::kClaim, 0.0));

    // Partial sums grow with n, so n = max_n is the worst case for each m.
    // One pass from the small end per alpha yields every suffix sum S(m, max_n).
    double worst_stated = 0.0;
    double worst_fixed = 0.0;
    ordered_json worst_stated_at;
    ordered_json worst_fixed_at;
    for (const double alpha : p.alphas) {
        double sum = 0.0;
        double comp = 0.0;
        for (std::int64_t k = p.max_n; k >= 1; --k) {
            const double term = std::pow(static_cast<double>(k), -alpha);
            const double next = sum + term;
            comp += std::abs(sum) >= std::abs(term) ? (sum - next) + term : (term - next) + sum;
            sum = next;
            if (k <= p.max_m) {
                const double s = sum + comp;
                const double rp = s / stated_constant(k, alpha);
                const double rf = s / corrected_constant(k, alpha);
                if (rp > worst_stated) {
                    worst_stated = rp;
                    worst_stated_at = {{"m", k}, {"alpha", alpha}, {"sum", s}};
                }
                if (rf > worst_fixed) {
                    worst_fixed = rf;
                    worst_fixed_at = {{"m", k}, {"alpha", alpha}, {"sum", s}};
                }
            }
        }
    }
    const ordered_json grid{{"max_m", p.max_m}, {"max_n", p.max_n}, {"alphas", p.alphas}};
    auto gp = grid;
    gp["constant"] = "1/(2 m^(alpha-1))";
    gp["measure"] = "max over grid of sum / constant";
    gp["worst"] = worst_stated_at;
    auto gf = grid;
    gf["constant"] = "2/m^(alpha-1)";
    gf["measure"] = "max over grid of sum / constant";
    gf["worst"] = worst_fixed_at;
    report.checks.push_back(make_check(report.suite, gp, 1.0, worst_stated, 0.0, Relation::kAtMost, Role::kAudit, 0.0));
    report.checks.push_back(make_check(report.suite, gf, 1.0, worst_fixed, 0.0, Relation::kAtMost, Role::kClaim, 0.0));
    return report;
}

SuiteReport thm_sb(const ThmSbParams& p, const SuiteOptions& o) {
    const std::int64_t reps = reps_or(o, p.replicates);
    const double threshold = 0.5 * static_cast<double>(p.n) * p.gamma;
    const double bound = confidence::bernoulli_lower_tail_bound(p.n, p.gamma);
    SuiteReport report{"thm-sb", {}};

    // i.i.d. Bernoulli(gamma), and a history-dependent sequence whose
    // conditional success probability is gamma after a success and
    // min(1, 2 gamma) after a failure.
    for (const bool adapted : {false, true}) {
        std::int64_t hits = 0;
        for (std::int64_t r = 0; r < reps; ++r) {
            RandomStream stream(derive_stream_seed(o.seed, kSbStreams + (adapted ? 1 : 0), static_cast<std::uint64_t>(r)));
            std::int64_t sum = 0;
            bool last = true;
            for (std::int64_t i = 0; i < p.n; ++i) {
                const double q = adapted && !last ? std::min(1.0, 2.0 * p.gamma) : p.gamma;
                last = stream.uniform() < q;
                sum += last;
            }
            hits += static_cast<double>(sum) <= threshold;
        }
        const double freq = static_cast<double>(hits) / static_cast<double>(reps);
        ordered_json params{{"process", adapted ? "adapted" : "iid"}, {"n", p.n}, {"gamma", p.gamma},
                            {"threshold", threshold}, {"replicates", reps}, {"seed", o.seed}};
        if (!adapted) {
            params["exact_tail"] =
                binomial_cdf(static_cast<std::int64_t>(std::floor(threshold)), p.n, p.gamma);
        }
        report.checks.push_back(make_check(report.suite, std::move(params), bound, freq,
                                           binomial_standard_error(freq, reps)));
    }
    return report;
}

SuiteReport bernstein(const BernsteinParams& p, const SuiteOptions& o) {
    const std::int64_t reps = reps_or(o, p.replicates);
    const double nu = static_cast<double>(p.n) / 3.0;
    SuiteReport report{"bernstein", {}};

    std::vector<double> sums(static_cast<std::size_t>(reps));
    for (std::int64_t r = 0; r < reps; ++r) {
        RandomStream stream(derive_stream_seed(o.seed, kBernsteinStreams, static_cast<std::uint64_t>(r)));
        double s = 0.0;
        for (std::int64_t i = 0; i < p.n; ++i) s += 2.0 * stream.uniform() - 1.0;
        sums[static_cast<std::size_t>(r)] = s;
    }
    for (const double delta : p.deltas) {
        const double threshold = confidence::bernstein_tail(nu, 1.0, delta);
        const auto hits = std::count_if(sums.begin(), sums.end(), [&](double s) { return s >= threshold; });
        const double freq = static_cast<double>(hits) / static_cast<double>(reps);
        report.checks.push_back(make_check(report.suite,
                                           {{"increments", "uniform[-1,1]"}, {"n", p.n}, {"nu", nu}, {"c", 1.0},
                                            {"delta", delta}, {"threshold", threshold}, {"replicates", reps},
                                            {"seed", o.seed}},
                                           delta, freq, binomial_standard_error(freq, reps)));
    }
    return report;
}

const std::vector<std::string>& registered_suites() {
    static const std::vector<std::string> names{
        "confidence-coverage", "proposition1-upper", "proposition1-sandwich", "theorem1-adversarial",
        "lemma-sum",           "thm-sb",             "bernstein",
    };
    return names;
}

SuiteReport run_suite(const std::string& name, const SuiteOptions& options) {
    if (name == "confidence-coverage") return confidence_coverage({}, options);
    if (name == "proposition1-upper") return proposition1_upper({}, options);
    if (name == "proposition1-sandwich") return proposition1_sandwich({}, options);
    if (name == "theorem1-adversarial") return theorem1_adversarial({}, options);
    if (name == "lemma-sum") return lemma_sum({});
    if (name == "thm-sb") return thm_sb({}, options);
    if (name == "bernstein") return bernstein({}, options);
    throw std::invalid_argument("unknown suite '" + name + "'");
}

SuiteReport validate_suite(const std::string& name, const SuiteOptions& options,
                           const std::optional<std::filesystem::path>& out_dir) {
    auto report = run_suite(name, options);
    if (out_dir) {
        std::filesystem::create_directories(*out_dir);
        std::ofstream out(*out_dir / (name + ".json"), std::ios::binary);
        if (!out) throw std::runtime_error("cannot write report into " + out_dir->string());
        out << report.to_json().dump(2) << '\n';
    }
    return report;
}

}  // namespace bandit::validation
