// Experiment driver: run regret experiments, execute validation suites, and
// generate adversarial loss matrices.

#include <cmath>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "bandit/environments.hpp"
#include "bandit/harness.hpp"
#include "bandit/validation.hpp"

namespace {

int run_command(const std::string& config_path, const std::string& out_dir, std::optional<std::uint64_t> seed,
                std::optional<std::int64_t> reps, std::size_t parallel) {
    auto config = bandit::load_config(config_path);
    if (seed) config.seed = *seed;
    if (reps) config.replicates = *reps;
    const auto records = bandit::run_experiment(config, bandit::RunOptions{parallel});
    bandit::write_experiment(out_dir, config, records);

    for (const auto& s : bandit::summarize(config, records)) {
        if (s.t != config.horizon) continue;
        std::cout << config.policies[s.policy].id << " t=" << s.t << " hindsight_regret="
                  << s.mean_hindsight_regret << " +/- " << s.se_hindsight_regret;
        if (!std::isnan(s.mean_pseudo_regret)) {
            std::cout << " pseudo_regret=" << s.mean_pseudo_regret << " +/- " << s.se_pseudo_regret;
        }
        std::cout << '\n';
    }
    return 0;
}

int validate_command(const std::string& suite, const std::optional<std::string>& out_dir,
                     const bandit::validation::SuiteOptions& options) {
    std::optional<std::filesystem::path> out;
    if (out_dir) out = *out_dir;
    const auto report = bandit::validation::validate_suite(suite, options, out);
    for (const auto& c : report.checks) {
        std::cout << suite << (c.role == bandit::validation::Role::kAudit ? " [audit] " : " ")
                  << bandit::validation::to_string(c.verdict) << " empirical=" << c.empirical
                  << " stderr=" << c.standard_error << " claimed=" << c.claimed_bound << ' ' << c.params.dump()
                  << '\n';
    }
    std::cout << suite << ": " << (report.passed() ? "PASS" : "FAIL") << '\n';
    return report.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-armed bandit experiments with gap-estimating exponential weights"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<std::int64_t> reps;
    std::size_t parallel = 1;

    auto* run = app.add_subcommand("run", "Run a regret experiment described by a JSON config");
    run->add_option("--config", config_path, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
    run->add_option("--out", out_dir, "Output directory")->required();
    run->add_option("--seed", seed, "Override the master seed");
    run->add_option("--reps", reps, "Override the replicate count")->check(CLI::PositiveNumber);
    run->add_option("--parallel", parallel, "Worker threads")->check(CLI::PositiveNumber);

    std::string suite;
    std::optional<std::string> report_dir;
    std::uint64_t suite_seed = bandit::validation::kDefaultSeed;
    auto* validate = app.add_subcommand("validate", "Run a Monte-Carlo or exact bound check");
    validate->add_option("--suite", suite, "Suite name")
        ->required()
        ->check(CLI::IsMember(bandit::validation::registered_suites()));
    validate->add_option("--out", report_dir, "Directory for the JSON report");
    validate->add_option("--seed", suite_seed, "Master seed");
    validate->add_option("--reps", reps, "Override the replicate count")->check(CLI::PositiveNumber);
    validate->add_option("--parallel", parallel, "Worker threads")->check(CLI::PositiveNumber);

    std::string gen_type;
    std::string gen_out;
    bandit::SwitchingGenerator switching;
    bandit::SinusoidalGenerator sinusoidal;
    std::size_t gen_arms = 2;
    std::int64_t gen_horizon = 10000;
    std::optional<std::int64_t> switch_round;
    auto* envgen = app.add_subcommand("envgen", "Write an explicit adversarial loss matrix");
    envgen->add_option("--type", gen_type, "Generator")->required()->check(CLI::IsMember({"switching", "sinusoidal"}));
    envgen->add_option("--out", gen_out, "Output file")->required();
    envgen->add_option("--arms", gen_arms, "Number of arms")->check(CLI::Range(2, 1 << 20));
    envgen->add_option("--horizon", gen_horizon, "Number of rounds")->check(CLI::PositiveNumber);
    envgen->add_option("--switch-round", switch_round, "First round after the switch (default horizon/2 + 1)");
    envgen->add_option("--low", switching.low, "Loss of the good arm")->check(CLI::Range(0.0, 1.0));
    envgen->add_option("--high", switching.high, "Loss of the other arms")->check(CLI::Range(0.0, 1.0));
    envgen->add_option("--period", sinusoidal.period, "Sinusoid period in rounds")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (*run) return run_command(config_path, out_dir, seed, reps, parallel);
        if (*validate) {
            bandit::validation::SuiteOptions options;
            options.seed = suite_seed;
            options.replicates = reps;
            options.parallel = parallel;
            return validate_command(suite, report_dir, options);
        }
        if (*envgen) {
            bandit::AdversarialSpec spec;
            if (gen_type == "switching") {
                switching.num_arms = gen_arms;
                switching.switch_round = switch_round.value_or(gen_horizon / 2 + 1);
                spec = switching;
            } else {
                sinusoidal.num_arms = gen_arms;
                spec = sinusoidal;
            }
            bandit::write_loss_matrix(gen_out, bandit::materialize(spec, gen_horizon));
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
