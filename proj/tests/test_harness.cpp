#include <cmath>
#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "bandit/harness.hpp"
#include "doctest.h"
#include "json.hpp"

using namespace bandit;

namespace {

ExperimentConfig small_config() {
    ExperimentConfig c;
    c.name = "small";
    c.num_arms = 2;
    c.horizon = 2000;
    c.env = StochasticSpec{{0.4, 0.6}};
    c.policies = {{"exp3pp", PolicyKind::kExp3pp}, {"exp3", PolicyKind::kExp3}, {"greedy", PolicyKind::kLcbGreedy}};
    c.replicates = 6;
    c.seed = 2024;
    c.checkpoints = {10, 100, 1000, 2000};
    return c;
}

std::string results_text(const ExperimentConfig& c, const std::vector<RegretRecord>& records) {
    std::ostringstream out;
    write_results_csv(out, c, records);
    return out.str();
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::filesystem::path scratch_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("bandit_harness_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("regret definitions") {
    CHECK(pseudo_regret(std::vector<std::int64_t>{7, 3}, std::vector{0.0, 0.2}) == doctest::Approx(0.6));
    CHECK(pseudo_regret(std::vector<std::int64_t>{1, 2, 3}, std::vector{0.5, 0.0, 0.25}) == doctest::Approx(1.25));
    CHECK(hindsight_regret(12.0, std::vector{10.0, 9.5, 11.0}) == 2.5);
    CHECK_THROWS_AS(pseudo_regret(std::vector<std::int64_t>{1}, std::vector{0.0, 0.1}), std::invalid_argument);
}

TEST_CASE("checkpoint grid") {
    CHECK(checkpoint_grid(100, 2) == std::vector<std::int64_t>{10, 32, 100});  // oracle
    CHECK(checkpoint_grid(1000, 1) == std::vector<std::int64_t>{10, 100, 1000});
    CHECK(checkpoint_grid(500, 1) == std::vector<std::int64_t>{10, 100, 500});
    const auto g = checkpoint_grid(1000000, 4);
    CHECK(g.front() == 10);
    CHECK(g[1] == 18);
    CHECK(g.back() == 1000000);
    CHECK(g.size() == 21);
    CHECK_THROWS_AS(checkpoint_grid(5, 2), std::invalid_argument);
}

TEST_CASE("greedy on a deterministic instance pays for the sweep only") {
    ExperimentConfig c = small_config();
    c.env = StochasticSpec{{0.0, 1.0}};
    c.policies = {{"greedy", PolicyKind::kLcbGreedy}};
    const auto records = run_experiment(c);
    REQUIRE(records.size() == c.checkpoints.size() * static_cast<std::size_t>(c.replicates));
    for (const auto& r : records) {
        CHECK(r.pseudo_regret == 1.0);
        CHECK(r.realized_loss == 1.0);
        CHECK(r.hindsight_best_loss == 0.0);
    }
}

TEST_CASE("runs are deterministic and independent of pool width") {
    const ExperimentConfig c = small_config();
    const auto a = run_experiment(c, {1});
    const auto b = run_experiment(c, {1});
    const auto p = run_experiment(c, {3});
    CHECK(results_text(c, a) == results_text(c, b));
    CHECK(results_text(c, a) == results_text(c, p));

    ExperimentConfig other = c;
    other.seed = 2025;
    CHECK(results_text(c, a) != results_text(other, run_experiment(other)));
}

TEST_CASE("records are ordered and pseudo-regret is nondecreasing") {
    const ExperimentConfig c = small_config();
    const auto records = run_experiment(c);
    REQUIRE(records.size() == 3 * 6 * 4);
    for (std::size_t i = 1; i < records.size(); ++i) {
        const auto& prev = records[i - 1];
        const auto& cur = records[i];
        const bool ordered = std::tie(prev.policy, prev.replicate, prev.t) < std::tie(cur.policy, cur.replicate, cur.t);
        REQUIRE(ordered);
        if (prev.policy == cur.policy && prev.replicate == cur.replicate) {
            CHECK(cur.pseudo_regret >= prev.pseudo_regret);
            CHECK(cur.realized_loss >= prev.realized_loss);
        }
    }
}

TEST_CASE("policies in one replicate face the same losses") {
    ExperimentConfig c = small_config();
    c.policies = {{"a", PolicyKind::kExp3pp}, {"b", PolicyKind::kExp3}};
    const auto records = run_experiment(c);
    for (const auto& r : records) {
        if (r.policy != 0) continue;
        for (const auto& s : records) {
            if (s.policy == 1 && s.replicate == r.replicate && s.t == r.t) {
                CHECK(s.hindsight_best_loss == r.hindsight_best_loss);
            }
        }
    }
}

TEST_CASE("adversarial runs report NaN pseudo-regret") {
    ExperimentConfig c = small_config();
    c.env = AdversarialSpec{SwitchingGenerator{2, 0.2, 0.8, 1001}};
    c.replicates = 2;
    for (const auto& r : run_experiment(c)) {
        CHECK(std::isnan(r.pseudo_regret));
        CHECK(std::isfinite(r.hindsight_regret()));
    }
}

TEST_CASE("diagnostics record counts, gap estimates and floors") {
    ExperimentConfig c = small_config();
    c.policies = {{"exp3pp", PolicyKind::kExp3pp}};
    c.diagnostics = true;
    c.replicates = 2;
    for (const auto& r : run_experiment(c)) {
        REQUIRE(r.counts.size() == 2);
        CHECK(r.counts[0] + r.counts[1] == r.t);
        REQUIRE(r.epsilon.size() == 2);
        for (double e : r.epsilon) CHECK(e <= 0.25);
        CHECK(r.dlcb[0] == 0.0);
    }
}

TEST_CASE("the two regret estimators agree") {
    ExperimentConfig c = small_config();
    c.replicates = 200;
    c.policies = {{"exp3pp", PolicyKind::kExp3pp}};
    const auto summary = summarize(c, run_experiment(c));
    for (const auto& s : summary) {
        const double se = std::hypot(s.se_pseudo_regret, s.se_excess_loss);
        CHECK(std::abs(s.mean_pseudo_regret - s.mean_excess_loss) <= 3 * se + 1e-12);
    }
}

TEST_CASE("summary statistics on a toy run") {
    ExperimentConfig c;
    c.num_arms = 2;
    c.horizon = 10;
    c.checkpoints = {5, 10};
    c.env = StochasticSpec{{0.0, 1.0}};
    c.policies = {{"p", PolicyKind::kExp3pp}};
    c.replicates = 2;
    std::vector<RegretRecord> records(4);
    records[0] = {0, 0, 5, 1.0, 1.0, 0.0};
    records[1] = {0, 0, 10, 2.0, 2.0, 0.0};
    records[2] = {0, 1, 5, 3.0, 3.0, 0.0};
    records[3] = {0, 1, 10, 4.0, 4.0, 0.0};
    const auto s = summarize(c, records);
    REQUIRE(s.size() == 2);
    CHECK(s[0].t == 5);
    CHECK(s[0].mean_pseudo_regret == 2.0);
    CHECK(s[0].se_pseudo_regret == doctest::Approx(1.0));
    CHECK(s[1].mean_hindsight_regret == 3.0);
    CHECK(s[1].mean_excess_loss == 3.0);
    CHECK(loglog_slope(10, 1, 1000, 10) == doctest::Approx(0.5));
}

TEST_CASE("config validation") {
    ExperimentConfig c = small_config();
    CHECK_NOTHROW(validate_config(c));
    auto broken = c;
    broken.checkpoints = {100, 100};
    CHECK_THROWS_AS(validate_config(broken), std::invalid_argument);
    broken = c;
    broken.checkpoints = {2, 100};
    CHECK_THROWS_AS(validate_config(broken), std::invalid_argument);
    broken = c;
    broken.checkpoints = {10, 3000};
    CHECK_THROWS_AS(validate_config(broken), std::invalid_argument);
    broken = c;
    broken.num_arms = 3;
    CHECK_THROWS_AS(validate_config(broken), std::invalid_argument);
    broken = c;
    broken.policies.push_back({"exp3", PolicyKind::kExp3});
    CHECK_THROWS_AS(validate_config(broken), std::invalid_argument);
    broken = c;
    broken.policies.clear();
    CHECK_THROWS_AS(validate_config(broken), std::invalid_argument);
    broken = c;
    broken.env = AdversarialSpec{parse_loss_matrix("0,1\n1,0\n")};
    CHECK_THROWS_AS(validate_config(broken), std::invalid_argument);
}

TEST_CASE("config parsing") {
    const auto c = parse_config(R"({
        "name": "demo", "K": 3, "horizon": 1000, "replicates": 4, "seed": 9,
        "env": {"type": "bernoulli", "means": [0.5, 0.3, 0.7]},
        "policies": [{"type": "exp3pp", "beta": 300}, {"type": "exp3"}, {"type": "lcb_greedy", "id": "g"}],
        "checkpoints": {"per_decade": 1}
    })");
    CHECK(c.name == "demo");
    CHECK(c.num_arms == 3);
    CHECK(c.policies.size() == 3);
    CHECK(c.policies[0].beta == 300.0);
    CHECK(c.policies[2].id == "g");
    CHECK(c.checkpoints == std::vector<std::int64_t>{10, 100, 1000});

    const auto sw = parse_config(R"({"K": 2, "horizon": 100, "env": {"type": "switching"},
                                     "policies": [{"type": "exp3pp"}], "checkpoints": [50, 100]})");
    const auto& gen = std::get<SwitchingGenerator>(std::get<AdversarialSpec>(sw.env));
    CHECK(gen.switch_round == 51);

    const auto cont = parse_config(R"({"K": 2, "horizon": 100, "policies": [{"type": "exp3"}],
        "env": {"type": "contaminated", "base": {"type": "bernoulli", "means": [0.2, 0.8]}, "budget": 10}})");
    CHECK(std::get<ContaminatedSpec>(cont.env).bad_arm == 1);

    CHECK_THROWS_AS(parse_config("{"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config(R"({"K": 2, "horizon": 100, "env": {"type": "bernoulli", "means": [0.1, 0.2]},
                                    "policies": [{"type": "ucb"}]})"),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_config(R"({"K": 2, "horizon": 100, "env": {"type": "gaussian"},
                                    "policies": [{"type": "exp3"}]})"),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_config(R"({"K": 2, "horizon": 100, "env": {"type": "bernoulli", "means": [0.1, 0.2]},
                                    "policies": [{"type": "exp3pp", "beta": 10}]})"),
                    std::invalid_argument);
}

TEST_CASE("matrix paths resolve next to the config") {
    const auto dir = scratch_dir("matrix");
    write_loss_matrix(dir / "m.csv", materialize(AdversarialSpec{SinusoidalGenerator{2, 50.0}}, 300));
    {
        std::ofstream f(dir / "cfg.json");
        f << R"({"K": 2, "horizon": 300, "env": {"type": "matrix", "file": "m.csv"},
                 "policies": [{"type": "exp3pp"}], "checkpoints": [100, 300]})";
    }
    const auto c = load_config(dir / "cfg.json");
    CHECK(std::get<LossMatrix>(std::get<AdversarialSpec>(c.env)).horizon() == 300);
    CHECK_THROWS_AS(load_config(dir / "nope.json"), std::runtime_error);
    std::filesystem::remove_all(dir);
}

TEST_CASE("output files and metadata sidecar") {
    const auto dir = scratch_dir("outputs");
    ExperimentConfig c = small_config();
    c.diagnostics = true;
    c.replicates = 2;
    const auto records = run_experiment(c);
    write_experiment(dir, c, records);
    for (const char* f : {"results.csv", "summary.csv", "metadata.json", "diagnostics.csv"}) {
        CHECK(std::filesystem::exists(dir / f));
    }
    const auto results = slurp(dir / "results.csv");
    CHECK(results.rfind("policy,replicate,t,pseudo_regret,realized_loss,hindsight_best_loss\n", 0) == 0);
    CHECK(std::count(results.begin(), results.end(), '\n') == 1 + 3 * 2 * 4);
    CHECK(slurp(dir / "diagnostics.csv").rfind("policy,replicate,t,arm,n,dlcb,epsilon\n", 0) == 0);

    const auto meta = nlohmann::json::parse(slurp(dir / "metadata.json"));
    CHECK(meta.at("K") == 2);
    CHECK(meta.at("horizon") == 2000);
    CHECK(meta.at("replicates") == 2);
    CHECK(meta.at("seed") == 2024);
    CHECK(meta.at("best_arm") == 0);
    CHECK(meta.at("gaps")[1].get<double>() == doctest::Approx(0.2));
    CHECK(meta.at("checkpoints").size() == 4);
    CHECK(meta.at("policies")[2].at("type") == "lcb_greedy");
    std::filesystem::remove_all(dir);
}

TEST_CASE("number formatting") {
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(2.0) == "2");
    CHECK(format_double(std::nan("")) == "nan");
    CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
}
