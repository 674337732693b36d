#include "bandit/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <ostream>
#include <set>
#include <stdexcept>
#include <thread>

#include "json.hpp"

namespace bandit {

std::string to_string(PolicyKind kind) {
    switch (kind) {
        case PolicyKind::kExp3pp:
            return "exp3pp";
        case PolicyKind::kExp3:
            return "exp3";
        case PolicyKind::kLcbGreedy:
            return "lcb_greedy";
    }
    return "unknown";
}

PolicyKind parse_policy_kind(const std::string& name) {
    if (name == "exp3pp") return PolicyKind::kExp3pp;
    if (name == "exp3") return PolicyKind::kExp3;
    if (name == "lcb_greedy") return PolicyKind::kLcbGreedy;
    throw std::invalid_argument("unknown policy type '" + name + "'");
}

std::unique_ptr<Policy> make_policy(const PolicySpec& spec, std::size_t num_arms) {
    switch (spec.kind) {
        case PolicyKind::kExp3pp:
            return std::make_unique<Exp3pp>(GapEstimatorParams(spec.alpha, spec.beta, num_arms));
        case PolicyKind::kExp3:
            return std::make_unique<Exp3>(num_arms);
        case PolicyKind::kLcbGreedy:
            return std::make_unique<LcbGreedy>(num_arms, spec.alpha);
    }
    throw std::invalid_argument("unknown policy kind");
}

void validate_config(const ExperimentConfig& c) {
    const auto fail = [&](const std::string& what) { throw std::invalid_argument("config '" + c.name + "': " + what); };
    if (c.num_arms < 2) fail("K must be >= 2");
    try {
        validate_spec(c.env);
    } catch (const std::exception& e) {
        fail(std::string("environment: ") + e.what());
    }
    if (num_arms(c.env) != c.num_arms) {
        fail("K = " + std::to_string(c.num_arms) + " but the environment has " + std::to_string(num_arms(c.env)) +
             " arms");
    }
    if (c.horizon < static_cast<std::int64_t>(c.num_arms)) fail("horizon must be >= K");
    if (c.replicates < 1) fail("replicates must be >= 1");
    if (c.policies.empty()) fail("no policies");
    std::set<std::string> ids;
    for (const auto& p : c.policies) {
        if (!ids.insert(p.id).second) fail("duplicate policy id '" + p.id + "'");
        try {
            (void)make_policy(p, c.num_arms);
        } catch (const std::exception& e) {
            fail("policy '" + p.id + "': " + e.what());
        }
    }
    if (c.checkpoints.empty()) fail("no checkpoints");
    const auto k1 = static_cast<std::int64_t>(c.num_arms) + 1;
    for (std::size_t i = 0; i < c.checkpoints.size(); ++i) {
        const auto t = c.checkpoints[i];
        if (t < k1 || t > c.horizon) {
            fail("checkpoint " + std::to_string(t) + " outside [" + std::to_string(k1) + ", " +
                 std::to_string(c.horizon) + "]");
        }
        if (i > 0 && t <= c.checkpoints[i - 1]) fail("checkpoints must be strictly increasing");
    }
    if (const auto h = Environment(c.env).horizon(); h && *h < c.horizon) {
        fail("loss matrix covers " + std::to_string(*h) + " rounds, horizon is " + std::to_string(c.horizon));
    }
}

double pseudo_regret(std::span<const std::int64_t> counts, std::span<const double> gaps) {
    if (counts.size() != gaps.size()) throw std::invalid_argument("pseudo_regret: length mismatch");
    double r = 0.0;
    for (std::size_t a = 0; a < counts.size(); ++a) r += static_cast<double>(counts[a]) * gaps[a];
    return r;
}

double hindsight_regret(double cumulative_policy_loss, std::span<const double> column_sums) {
    if (column_sums.empty()) throw std::invalid_argument("hindsight_regret: no arms");
    return cumulative_policy_loss - *std::min_element(column_sums.begin(), column_sums.end());
}

std::vector<std::int64_t> checkpoint_grid(std::int64_t horizon, int points_per_decade) {
    if (horizon < 10) throw std::invalid_argument("checkpoint_grid: horizon must be >= 10");
    if (points_per_decade < 1) throw std::invalid_argument("checkpoint_grid: need >= 1 point per decade");
    std::vector<std::int64_t> grid;
    for (int k = points_per_decade;; ++k) {
        const auto t = static_cast<std::int64_t>(
            std::llround(std::pow(10.0, static_cast<double>(k) / static_cast<double>(points_per_decade))));
        if (t > horizon) break;
        if (grid.empty() || grid.back() != t) grid.push_back(t);
    }
    if (grid.empty() || grid.back() != horizon) grid.push_back(horizon);
    return grid;
}

std::vector<RegretRecord> simulate_replicate(const ExperimentConfig& config, const Environment& env,
                                             std::size_t policy_index, std::int64_t replicate) {
    const std::size_t k = config.num_arms;
    auto policy = make_policy(config.policies.at(policy_index), k);
    RandomStream stream(derive_stream_seed(config.seed, policy_index, static_cast<std::uint64_t>(replicate)));
    const std::uint64_t env_key = derive_stream_seed(config.seed, kEnvironmentStreamId,
                                                     static_cast<std::uint64_t>(replicate));
    const auto& truth = env.truth();

    std::vector<double> losses(k);
    std::vector<double> column_sums(k, 0.0);
    std::vector<std::int64_t> counts(k, 0);
    double realized = 0.0;

    std::vector<RegretRecord> out;
    out.reserve(config.checkpoints.size());
    auto next_checkpoint = config.checkpoints.begin();

    for (std::int64_t t = 1; t <= config.horizon && next_checkpoint != config.checkpoints.end(); ++t) {
        const auto dist = policy->act(t);
        const ArmId arm = sample_arm(dist, stream);
        env.losses_at(t, env_key, losses);
        const double loss = losses[arm.index];
        policy->update(t, arm, Loss(loss));

        realized += loss;
        ++counts[arm.index];
        for (std::size_t a = 0; a < k; ++a) column_sums[a] += losses[a];

        if (t == *next_checkpoint) {
            RegretRecord r;
            r.policy = policy_index;
            r.replicate = replicate;
            r.t = t;
            r.pseudo_regret = truth ? pseudo_regret(counts, truth->gaps) : std::numeric_limits<double>::quiet_NaN();
            r.realized_loss = realized;
            r.hindsight_best_loss = *std::min_element(column_sums.begin(), column_sums.end());
            if (config.diagnostics) {
                r.counts = counts;
                const auto d = policy->last_dlcb();
                const auto e = policy->last_epsilon();
                r.dlcb.assign(d.begin(), d.end());
                r.epsilon.assign(e.begin(), e.end());
            }
            out.push_back(std::move(r));
            ++next_checkpoint;
        }
    }
    return out;
}

std::vector<RegretRecord> run_experiment(const ExperimentConfig& config, const RunOptions& options) {
    validate_config(config);
    const Environment env(config.env);
    const std::size_t num_tasks = config.policies.size() * static_cast<std::size_t>(config.replicates);
    std::vector<std::vector<RegretRecord>> per_task(num_tasks);

    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    const auto worker = [&] {
        for (std::size_t task = next++; task < num_tasks; task = next++) {
            try {
                const std::size_t policy = task / static_cast<std::size_t>(config.replicates);
                const auto replicate = static_cast<std::int64_t>(task % static_cast<std::size_t>(config.replicates));
                per_task[task] = simulate_replicate(config, env, policy, replicate);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                next = num_tasks;
            }
        }
    };

    const std::size_t width = std::clamp<std::size_t>(options.parallel, 1, std::max<std::size_t>(num_tasks, 1));
    if (width == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(width);
        for (std::size_t i = 0; i < width; ++i) pool.emplace_back(worker);
    }
    if (error) std::rethrow_exception(error);

    std::vector<RegretRecord> records;
    records.reserve(num_tasks * config.checkpoints.size());
    for (auto& chunk : per_task) {
        std::move(chunk.begin(), chunk.end(), std::back_inserter(records));
    }
    return records;
}

namespace {

struct MeanSe {
    double sum = 0.0;
    double sum_sq = 0.0;
    std::int64_t n = 0;

    void add(double v) {
        sum += v;
        sum_sq += v * v;
        ++n;
    }
    double mean() const { return n ? sum / static_cast<double>(n) : std::numeric_limits<double>::quiet_NaN(); }
    double se() const {
        if (n < 2) return 0.0;
        const double nd = static_cast<double>(n);
        const double var = std::max(0.0, (sum_sq - sum * sum / nd) / (nd - 1.0));
        return std::sqrt(var / nd);
    }
};

std::optional<double> best_mean(const EnvironmentSpec& spec) {
    if (const auto* s = std::get_if<StochasticSpec>(&spec)) {
        return *std::min_element(s->means.begin(), s->means.end());
    }
    return std::nullopt;
}

}  // namespace

std::vector<CheckpointSummary> summarize(const ExperimentConfig& config, std::span<const RegretRecord> records) {
    const std::size_t nc = config.checkpoints.size();
    const std::size_t np = config.policies.size();
    std::vector<MeanSe> pseudo(np * nc), hind(np * nc), excess(np * nc);
    const auto mu_star = best_mean(config.env);

    // Records arrive in replicate order, so accumulation order is fixed.
    for (const auto& r : records) {
        const auto it = std::lower_bound(config.checkpoints.begin(), config.checkpoints.end(), r.t);
        if (it == config.checkpoints.end() || *it != r.t) continue;
        const std::size_t idx = r.policy * nc + static_cast<std::size_t>(it - config.checkpoints.begin());
        pseudo[idx].add(r.pseudo_regret);
        hind[idx].add(r.hindsight_regret());
        if (mu_star) excess[idx].add(r.realized_loss - static_cast<double>(r.t) * *mu_star);
    }

    std::vector<CheckpointSummary> out;
    out.reserve(np * nc);
    for (std::size_t p = 0; p < np; ++p) {
        for (std::size_t c = 0; c < nc; ++c) {
            const std::size_t idx = p * nc + c;
            CheckpointSummary s;
            s.policy = p;
            s.t = config.checkpoints[c];
            s.replicates = hind[idx].n;
            s.mean_pseudo_regret = pseudo[idx].mean();
            s.se_pseudo_regret = pseudo[idx].se();
            s.mean_hindsight_regret = hind[idx].mean();
            s.se_hindsight_regret = hind[idx].se();
            s.mean_excess_loss = excess[idx].mean();
            s.se_excess_loss = excess[idx].se();
            out.push_back(s);
        }
    }
    return out;
}

double loglog_slope(double t0, double r0, double t1, double r1) {
    if (!(t0 > 0 && t1 > t0 && r0 > 0 && r1 > 0)) throw std::invalid_argument("loglog_slope: need positive, ordered inputs");
    return std::log(r1 / r0) / std::log(t1 / t0);
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

void write_results_csv(std::ostream& out, const ExperimentConfig& config, std::span<const RegretRecord> records) {
    out << "policy,replicate,t,pseudo_regret,realized_loss,hindsight_best_loss\n";
    for (const auto& r : records) {
        out << config.policies.at(r.policy).id << ',' << r.replicate << ',' << r.t << ','
            << format_double(r.pseudo_regret) << ',' << format_double(r.realized_loss) << ','
            << format_double(r.hindsight_best_loss) << '\n';
    }
}

void write_diagnostics_csv(std::ostream& out, const ExperimentConfig& config,
                           std::span<const RegretRecord> records) {
    out << "policy,replicate,t,arm,n,dlcb,epsilon\n";
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (const auto& r : records) {
        for (std::size_t a = 0; a < r.counts.size(); ++a) {
            out << config.policies.at(r.policy).id << ',' << r.replicate << ',' << r.t << ',' << a << ','
                << r.counts[a] << ',' << format_double(a < r.dlcb.size() ? r.dlcb[a] : nan) << ','
                << format_double(a < r.epsilon.size() ? r.epsilon[a] : nan) << '\n';
        }
    }
}

void write_summary_csv(std::ostream& out, const ExperimentConfig& config,
                       std::span<const CheckpointSummary> summary) {
    out << "policy,t,replicates,mean_pseudo_regret,se_pseudo_regret,mean_hindsight_regret,se_hindsight_regret\n";
    for (const auto& s : summary) {
        out << config.policies.at(s.policy).id << ',' << s.t << ',' << s.replicates << ','
            << format_double(s.mean_pseudo_regret) << ',' << format_double(s.se_pseudo_regret) << ','
            << format_double(s.mean_hindsight_regret) << ',' << format_double(s.se_hindsight_regret) << '\n';
    }
}

void write_metadata_json(std::ostream& out, const ExperimentConfig& config) {
    nlohmann::ordered_json j;
    j["name"] = config.name;
    j["K"] = config.num_arms;
    j["horizon"] = config.horizon;
    j["replicates"] = config.replicates;
    j["seed"] = config.seed;
    j["checkpoints"] = config.checkpoints;
    auto& pols = j["policies"] = nlohmann::ordered_json::array();
    for (const auto& p : config.policies) {
        pols.push_back({{"id", p.id}, {"type", to_string(p.kind)}, {"alpha", p.alpha}, {"beta", p.beta}});
    }
    if (const auto truth = ground_truth(config.env)) {
        j["gaps"] = truth->gaps;
        j["best_arm"] = truth->best_arm.index;
    } else {
        j["gaps"] = nullptr;
        j["best_arm"] = nullptr;
    }
    out << j.dump(2) << '\n';
}

void write_experiment(const std::filesystem::path& out_dir, const ExperimentConfig& config,
                      std::span<const RegretRecord> records) {
    std::filesystem::create_directories(out_dir);
    const auto open = [&](const char* file) {
        std::ofstream f(out_dir / file, std::ios::binary);
        if (!f) throw std::runtime_error("cannot write " + (out_dir / file).string());
        return f;
    };
    {
        auto f = open("results.csv");
        write_results_csv(f, config, records);
    }
    {
        auto f = open("summary.csv");
        const auto s = summarize(config, records);
        write_summary_csv(f, config, s);
    }
    {
        auto f = open("metadata.json");
        write_metadata_json(f, config);
    }
    if (config.diagnostics) {
        auto f = open("diagnostics.csv");
        write_diagnostics_csv(f, config, records);
    }
}

}  // namespace bandit
