// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "bandit/harness.hpp"
#include "bandit/validation.hpp"

using namespace bandit;
namespace v = bandit::validation;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::size_t workers() { return std::max(1u, std::thread::hardware_concurrency()); }

void print_suite(const v::SuiteReport& r) {
    for (const auto& c : r.checks) {
        std::printf("    %-22s %-8s empirical=%.6g bound=%.6g se=%.3g %s\n", r.suite.c_str(),
                    v::to_string(c.verdict).c_str(), c.empirical, c.claimed_bound, c.standard_error,
                    c.role == v::Role::kAudit ? "(audit)" : "");
    }
}

v::SuiteOptions suite_options() {
    v::SuiteOptions o;
    o.parallel = workers();
    return o;
}

Outcome theorem1() {
    const auto r = v::theorem1_adversarial({}, suite_options());
    print_suite(r);
    const double k2_bound = 4.0 * std::sqrt(2.0 * 1e4 * std::log(2.0));
    const bool bound_ok = std::abs(k2_bound - 470.9640090061899) < 1e-9;
    std::ostringstream d;
    d << r.checks.size() << " generator/K cells, K=2 bound at T=1e4 is " << k2_bound;
    return {r.passed() && r.checks.size() == 4 && bound_ok, d.str()};
}

Outcome proposition1_upper() {
    const auto r = v::proposition1_upper({}, suite_options());
    print_suite(r);
    return {r.passed(), "means (0.4, 0.6), 10^4 replicates, t in {100, 1000}"};
}

Outcome proposition1_sandwich() {
    const auto r = v::proposition1_sandwich({}, suite_options());
    print_suite(r);
    std::ostringstream d;
    d << "fraction in [0.45, 0.9] = " << r.checks.at(0).empirical;
    return {r.passed(), d.str()};
}

Outcome growth() {
    ExperimentConfig c;
    c.name = "growth";
    c.num_arms = 2;
    c.horizon = 1000000;
    c.env = StochasticSpec{{0.4, 0.6}};
    c.policies = {{"exp3pp", PolicyKind::kExp3pp}, {"exp3", PolicyKind::kExp3}};
    c.replicates = 100;
    c.seed = v::kDefaultSeed;
    c.checkpoints = {100000, 1000000};
    const auto summary = summarize(c, run_experiment(c, {workers()}));
    double slope[2];
    double final_regret[2];
    for (std::size_t p = 0; p < 2; ++p) {
        const auto& lo = summary[2 * p];
        const auto& hi = summary[2 * p + 1];
        slope[p] = loglog_slope(1e5, lo.mean_pseudo_regret, 1e6, hi.mean_pseudo_regret);
        final_regret[p] = hi.mean_pseudo_regret;
        std::printf("    %-8s R(1e5)=%.2f +/- %.2f  R(1e6)=%.2f +/- %.2f  slope=%.3f\n", c.policies[p].id.c_str(),
                    lo.mean_pseudo_regret, lo.se_pseudo_regret, hi.mean_pseudo_regret, hi.se_pseudo_regret,
                    slope[p]);
    }
    const bool a = slope[0] < 0.25;
    const bool b = slope[1] > 0.4;
    const bool ratio = final_regret[0] < 0.5 * final_regret[1];
    std::ostringstream d;
    d << "exp3pp slope<0.25 " << (a ? "yes" : "no") << ", exp3 slope>0.4 " << (b ? "yes" : "no")
      << ", exp3pp final < half of exp3 " << (ratio ? "yes" : "no");
    return {a && b && ratio, d.str()};
}

Outcome concentration() {
    bool ok = true;
    for (const char* name : {"confidence-coverage", "thm-sb", "bernstein"}) {
        const auto r = v::run_suite(name, suite_options());
        print_suite(r);
        ok = ok && r.passed();
    }
    const double exact_tail = v::binomial_cdf(5, 200, 0.05);
    const double bound = std::exp(-1.25);
    std::ostringstream d;
    d << "exact Bin(200,0.05) tail " << exact_tail << " vs bound " << bound;
    return {ok && exact_tail <= bound, d.str()};
}

Outcome lemma_audit() {
    const auto r = v::run_suite("lemma-sum");
    print_suite(r);
    bool ok = r.checks.size() == 4;
    ok = ok && std::abs(r.checks[0].empirical - 0.202056) <= 1e-6;
    ok = ok && r.checks[0].claimed_bound == 0.125 && r.checks[0].verdict == v::Verdict::kViolated;
    ok = ok && r.checks[1].claimed_bound == 0.5 && r.checks[1].verdict == v::Verdict::kHolds;
    ok = ok && r.checks[2].verdict == v::Verdict::kViolated && r.checks[3].verdict == v::Verdict::kHolds;
    std::ostringstream d;
    d.precision(10);
    d << "S(2,1000,3) = " << r.checks[0].empirical << ", grid max sum/(2/m^(a-1)) = " << r.checks[3].empirical;
    return {ok, d.str()};
}

Outcome exactness() {
    std::mt19937_64 gen(v::kDefaultSeed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    bool unbiased = true, shift = true, floor_ok = true, counts_ok = true, tmin_ok = true;

    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t k = 2 + gen() % 9;
        std::vector<double> p(k), loss(k);
        for (double& x : p) x = 0.01 + u(gen);
        const double z = std::accumulate(p.begin(), p.end(), 0.0);
        for (double& x : p) x /= z;
        for (double& x : loss) x = u(gen);
        std::vector<double> e(k, 0.0);
        for (std::size_t played = 0; played < k; ++played) {
            const auto l = importance_weighted_losses(p, ArmId(played), Loss(loss[played]));
            for (std::size_t a = 0; a < k; ++a) e[a] += p[played] * l[a];
        }
        for (std::size_t a = 0; a < k; ++a) unbiased = unbiased && std::abs(e[a] - loss[a]) <= 1e-12;

        std::vector<double> cum(k);
        for (double& x : cum) x = 1000.0 * u(gen);
        const double rate = u(gen);
        const auto base = gibbs_distribution(cum, rate);
        for (double c : {-1e4, 1e4, 12345.678}) {
            std::vector<double> shifted(cum);
            for (double& x : shifted) x += c;
            const auto s = gibbs_distribution(shifted, rate);
            for (std::size_t a = 0; a < k; ++a) shift = shift && std::abs(s[a] - base[a]) <= 1e-12;
        }
    }

    for (std::size_t k : {2UL, 5UL, 10UL}) {
        Exp3pp policy(GapEstimatorParams(3.0, 256.0, k));
        RandomStream stream(derive_stream_seed(v::kDefaultSeed, k, 0));
        std::vector<double> means(k);
        for (double& m : means) m = u(gen);
        for (std::int64_t t = 1; t <= 100000; ++t) {
            const auto p = policy.act(t);
            if (t > static_cast<std::int64_t>(k)) {
                const auto eps = policy.last_epsilon();
                for (std::size_t a = 0; a < k; ++a) floor_ok = floor_ok && p[a] >= eps[a];
            }
            const ArmId arm = sample_arm(p, stream);
            policy.update(t, arm, Loss(stream.uniform() < means[arm.index] ? 1.0 : 0.0));
            std::int64_t n = 0;
            for (const auto& s : policy.gap_estimator().stats()) n += s.count;
            counts_ok = counts_ok && n == t;
        }
    }

    ExperimentConfig c;
    c.num_arms = 3;
    c.horizon = 10000;
    c.env = StochasticSpec{{0.3, 0.5, 0.6}};
    c.policies = {{"exp3pp", PolicyKind::kExp3pp}, {"exp3", PolicyKind::kExp3}, {"greedy", PolicyKind::kLcbGreedy}};
    c.replicates = 5;
    c.checkpoints = checkpoint_grid(c.horizon, 10);
    c.diagnostics = true;
    for (const auto& r : run_experiment(c, {workers()})) {
        counts_ok = counts_ok && std::accumulate(r.counts.begin(), r.counts.end(), std::int64_t{0}) == r.t;
    }

    for (double gap : {0.5, 0.9, 1.0}) {
        const auto t = tmin_crossing(gap, 2, 256.0);
        tmin_ok = tmin_ok && crossing_holds(gap, 2, 256.0, t) && !crossing_holds(gap, 2, 256.0, t - 1);
        std::printf("    tmin_crossing(gap=%.1f) = %lld\n", gap, static_cast<long long>(t));
    }

    std::ostringstream d;
    d << "unbiased=" << unbiased << " shift=" << shift << " floor=" << floor_ok << " counts=" << counts_ok
      << " tmin=" << tmin_ok;
    return {unbiased && shift && floor_ok && counts_ok && tmin_ok, d.str()};
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

Outcome reproducibility() {
    ExperimentConfig c;
    c.name = "repro";
    c.num_arms = 3;
    c.horizon = 20000;
    c.env = StochasticSpec{{0.3, 0.5, 0.6}};
    c.policies = {{"exp3pp", PolicyKind::kExp3pp}, {"exp3", PolicyKind::kExp3}, {"greedy", PolicyKind::kLcbGreedy}};
    c.replicates = 16;
    c.seed = 77;
    c.checkpoints = checkpoint_grid(c.horizon, 4);
    c.diagnostics = true;

    const auto root = std::filesystem::temp_directory_path() / "bandit_acceptance_repro";
    std::filesystem::remove_all(root);
    std::vector<std::filesystem::path> dirs;
    for (std::size_t width : {1, 4, 8}) {
        dirs.push_back(root / ("p" + std::to_string(width)));
        write_experiment(dirs.back(), c, run_experiment(c, {width}));
    }
    bool same = true;
    for (const char* f : {"results.csv", "summary.csv", "diagnostics.csv"}) {
        const auto ref = slurp(dirs[0] / f);
        same = same && !ref.empty();
        for (std::size_t i = 1; i < dirs.size(); ++i) same = same && slurp(dirs[i] / f) == ref;
    }
    std::filesystem::remove_all(root);
    return {same, "results, summary and diagnostics CSVs at parallelism 1, 4, 8"};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"1 adversarial regret bound", theorem1},
        {"2 gap estimate upper branch", proposition1_upper},
        {"3 gap estimate sandwich", proposition1_sandwich},
        {"4 stochastic growth-rate separation", growth},
        {"5 concentration suites", concentration},
        {"6 reciprocal power sum audit", lemma_audit},
        {"7 exactness properties", exactness},
        {"8 reproducibility", reproducibility},
    };
    int failures = 0;
    for (const auto& [name, fn] : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("%s criterion %s: %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str(), secs);
        std::fflush(stdout);
        failures += !o.pass;
    }
    std::printf("%d of %zu criteria failed\n", failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
