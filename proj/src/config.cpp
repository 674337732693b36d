#include <fstream>
#include <sstream>
#include <stdexcept>

#include "bandit/harness.hpp"
#include "json.hpp"

namespace bandit {

namespace {

using nlohmann::json;

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
    const auto it = j.find(key);
    return it == j.end() ? fallback : it->get<T>();
}

StochasticSpec parse_stochastic(const json& j) {
    const auto type = j.at("type").get<std::string>();
    StochasticSpec s;
    s.means = j.at("means").get<std::vector<double>>();
    if (type == "bernoulli") {
        s.family = LossFamily::kBernoulli;
    } else if (type == "uniform") {
        s.family = LossFamily::kClippedUniform;
        s.width = get_or(j, "width", 0.5);
    } else {
        throw std::invalid_argument("expected a stochastic environment (bernoulli|uniform), got '" + type + "'");
    }
    return s;
}

EnvironmentSpec parse_env(const json& j, std::size_t num_arms, std::int64_t horizon,
                          const std::filesystem::path& base_dir) {
    const auto type = j.at("type").get<std::string>();
    if (type == "bernoulli" || type == "uniform") return parse_stochastic(j);
    if (type == "switching") {
        SwitchingGenerator g;
        g.num_arms = num_arms;
        g.low = get_or(j, "low", g.low);
        g.high = get_or(j, "high", g.high);
        g.switch_round = get_or<std::int64_t>(j, "switch_round", horizon / 2 + 1);
        return AdversarialSpec{g};
    }
    if (type == "sinusoidal") {
        SinusoidalGenerator g;
        g.num_arms = num_arms;
        g.period = get_or(j, "period", g.period);
        return AdversarialSpec{g};
    }
    if (type == "matrix") {
        std::filesystem::path file = j.at("file").get<std::string>();
        if (file.is_relative()) file = base_dir / file;
        return AdversarialSpec{read_loss_matrix(file)};
    }
    if (type == "contaminated") {
        ContaminatedSpec c;
        c.base = parse_stochastic(j.at("base"));
        c.budget = j.at("budget").get<std::int64_t>();
        c.bad_arm = get_or<std::size_t>(j, "bad_arm", c.base.means.size() - 1);
        return c;
    }
    throw std::invalid_argument("unknown environment type '" + type + "'");
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text, const std::filesystem::path& base_dir) {
    ExperimentConfig c;
    try {
        const json j = json::parse(json_text);
        c.name = get_or<std::string>(j, "name", c.name);
        c.num_arms = j.at("K").get<std::size_t>();
        c.horizon = j.at("horizon").get<std::int64_t>();
        c.env = parse_env(j.at("env"), c.num_arms, c.horizon, base_dir);
        for (const auto& p : j.at("policies")) {
            PolicySpec spec;
            const auto type = p.at("type").get<std::string>();
            spec.kind = parse_policy_kind(type);
            spec.id = get_or(p, "id", type);
            spec.alpha = get_or(p, "alpha", spec.alpha);
            spec.beta = get_or(p, "beta", spec.beta);
            c.policies.push_back(spec);
        }
        c.replicates = get_or<std::int64_t>(j, "replicates", c.replicates);
        c.seed = get_or<std::uint64_t>(j, "seed", c.seed);
        c.diagnostics = get_or(j, "diagnostics", c.diagnostics);

        const auto cp = j.find("checkpoints");
        if (cp != j.end() && cp->is_array()) {
            c.checkpoints = cp->get<std::vector<std::int64_t>>();
        } else {
            const int per_decade = cp != j.end() ? cp->at("per_decade").get<int>() : 4;
            const auto k1 = static_cast<std::int64_t>(c.num_arms) + 1;
            if (c.horizon >= 10) {
                for (auto t : checkpoint_grid(c.horizon, per_decade)) {
                    if (t >= k1) c.checkpoints.push_back(t);
                }
            } else if (c.horizon >= k1) {
                c.checkpoints.push_back(c.horizon);
            }
        }
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("config: ") + e.what());
    }
    validate_config(c);
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path.parent_path());
}

}  // namespace bandit
