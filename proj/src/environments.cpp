#include "bandit/environments.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace bandit {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::size_t adversarial_arms(const AdversarialSpec& spec) {
    return std::visit([](const auto& g) { return g.num_arms; }, spec);
}

void validate_stochastic(const StochasticSpec& s) {
    if (s.means.size() < 2) throw std::invalid_argument("stochastic environment needs at least two arms");
    for (std::size_t a = 0; a < s.means.size(); ++a) {
        if (!(s.means[a] >= 0.0 && s.means[a] <= 1.0)) {
            throw std::invalid_argument("mean of arm " + std::to_string(a) + " outside [0,1]");
        }
    }
    if (s.family == LossFamily::kClippedUniform && !(s.width >= 0.0)) {
        throw std::invalid_argument("uniform width must be >= 0");
    }
}

GroundTruth truth_from_means(std::span<const double> means) {
    GroundTruth g;
    g.best_arm = ArmId(argmin_lowest(means));
    const double best = means[g.best_arm.index];
    g.gaps.reserve(means.size());
    for (double m : means) g.gaps.push_back(m - best);
    return g;
}

void stochastic_losses(const StochasticSpec& s, std::int64_t t, std::uint64_t key, std::span<double> out) {
    const auto tt = static_cast<std::uint64_t>(t);
    for (std::size_t a = 0; a < out.size(); ++a) {
        const double u = bits_to_unit(keyed_bits(key, tt, a));
        const double mu = s.means[a];
        if (s.family == LossFamily::kBernoulli) {
            out[a] = u < mu ? 1.0 : 0.0;
        } else {
            const double h = std::min({s.width, mu, 1.0 - mu});
            out[a] = std::clamp(mu + h * (2.0 * u - 1.0), 0.0, 1.0);
        }
    }
}

void adversarial_losses(const AdversarialSpec& spec, std::int64_t t, std::span<double> out) {
    std::visit(overloaded{
                   [&](const LossMatrix& m) {
                       if (t > m.horizon()) {
                           throw std::out_of_range("round " + std::to_string(t) + " beyond loss matrix horizon " +
                                                   std::to_string(m.horizon()));
                       }
                       const auto row = m.row(t);
                       std::copy(row.begin(), row.end(), out.begin());
                   },
                   [&](const SwitchingGenerator& g) {
                       std::fill(out.begin(), out.end(), g.high);
                       out[t < g.switch_round ? 0 : g.num_arms - 1] = g.low;
                   },
                   [&](const SinusoidalGenerator& g) {
                       const double kd = static_cast<double>(g.num_arms);
                       for (std::size_t a = 0; a < g.num_arms; ++a) {
                           const double phase = 2.0 * std::numbers::pi *
                                                (static_cast<double>(t) / g.period + static_cast<double>(a) / kd);
                           out[a] = std::round(0.5 + 0.5 * std::sin(phase));
                       }
                   },
               },
               spec);
}

}  // namespace

std::size_t num_arms(const EnvironmentSpec& spec) {
    return std::visit(overloaded{
                          [](const StochasticSpec& s) { return s.means.size(); },
                          [](const AdversarialSpec& a) { return adversarial_arms(a); },
                          [](const ContaminatedSpec& c) { return c.base.means.size(); },
                      },
                      spec);
}

void validate_spec(const EnvironmentSpec& spec) {
    std::visit(overloaded{
                   [](const StochasticSpec& s) { validate_stochastic(s); },
                   [](const AdversarialSpec& adv) {
                       std::visit(overloaded{
                                      [](const LossMatrix& m) {
                                          if (m.num_arms < 2) throw std::invalid_argument("loss matrix needs K >= 2");
                                          if (m.losses.empty() || m.losses.size() % m.num_arms != 0) {
                                              throw std::invalid_argument("loss matrix is empty or ragged");
                                          }
                                          for (double v : m.losses) {
                                              if (!(v >= 0.0 && v <= 1.0)) {
                                                  throw std::invalid_argument("loss matrix entry outside [0,1]");
                                              }
                                          }
                                      },
                                      [](const SwitchingGenerator& g) {
                                          if (g.num_arms < 2) throw std::invalid_argument("switching: need K >= 2");
                                          if (!(g.low >= 0.0 && g.low <= 1.0 && g.high >= 0.0 && g.high <= 1.0)) {
                                              throw std::invalid_argument("switching: losses outside [0,1]");
                                          }
                                          if (g.switch_round < 1) throw std::invalid_argument("switching: bad round");
                                      },
                                      [](const SinusoidalGenerator& g) {
                                          if (g.num_arms < 2) throw std::invalid_argument("sinusoidal: need K >= 2");
                                          if (!(g.period > 0.0)) throw std::invalid_argument("sinusoidal: period <= 0");
                                      },
                                  },
                                  adv);
                   },
                   [](const ContaminatedSpec& c) {
                       validate_stochastic(c.base);
                       if (c.budget < 0) throw std::invalid_argument("contamination budget must be >= 0");
                       if (c.bad_arm >= c.base.means.size()) throw std::invalid_argument("bad arm out of range");
                   },
               },
               spec);
}

std::optional<GroundTruth> ground_truth(const EnvironmentSpec& spec) {
    return std::visit(overloaded{
                          [](const StochasticSpec& s) -> std::optional<GroundTruth> { return truth_from_means(s.means); },
                          [](const AdversarialSpec&) -> std::optional<GroundTruth> { return std::nullopt; },
                          [](const ContaminatedSpec& c) -> std::optional<GroundTruth> {
                              return truth_from_means(c.base.means);
                          },
                      },
                      spec);
}

Environment::Environment(EnvironmentSpec spec) : spec_(std::move(spec)) {
    validate_spec(spec_);
    num_arms_ = bandit::num_arms(spec_);
    truth_ = ground_truth(spec_);
}

std::optional<std::int64_t> Environment::horizon() const {
    if (const auto* adv = std::get_if<AdversarialSpec>(&spec_)) {
        if (const auto* m = std::get_if<LossMatrix>(adv)) return m->horizon();
    }
    return std::nullopt;
}

void Environment::losses_at(std::int64_t t, std::uint64_t key, std::span<double> out) const {
    if (t < 1) throw std::invalid_argument("round index must be >= 1");
    if (out.size() != num_arms_) throw std::invalid_argument("loss buffer size mismatch");
    std::visit(overloaded{
                   [&](const StochasticSpec& s) { stochastic_losses(s, t, key, out); },
                   [&](const AdversarialSpec& a) { adversarial_losses(a, t, out); },
                   [&](const ContaminatedSpec& c) {
                       stochastic_losses(c.base, t, key, out);
                       if (t <= c.budget) {
                           out[truth_->best_arm.index] = 1.0;
                           out[c.bad_arm] = 0.0;
                       }
                   },
               },
               spec_);
}

std::vector<Loss> losses_at(const EnvironmentSpec& spec, std::int64_t t, std::uint64_t key) {
    const Environment env(spec);
    std::vector<double> raw(env.num_arms());
    env.losses_at(t, key, raw);
    std::vector<Loss> out;
    out.reserve(raw.size());
    for (double v : raw) out.emplace_back(v);
    return out;
}

LossMatrix parse_loss_matrix(const std::string& text) {
    LossMatrix m;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream fields(line);
        std::string tok;
        std::size_t count = 0;
        while (fields >> tok) {
            double v = 0.0;
            const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
            if (ec != std::errc() || ptr != tok.data() + tok.size() || !(v >= 0.0 && v <= 1.0)) {
                throw std::invalid_argument("line " + std::to_string(line_no) + ": invalid loss '" + tok + "'");
            }
            m.losses.push_back(v);
            ++count;
        }
        if (m.num_arms == 0) {
            m.num_arms = count;
        } else if (count != m.num_arms) {
            throw std::invalid_argument("line " + std::to_string(line_no) + ": expected " +
                                        std::to_string(m.num_arms) + " losses, got " + std::to_string(count));
        }
    }
    validate_spec(AdversarialSpec{m});
    return m;
}

LossMatrix read_loss_matrix(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open loss matrix " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_loss_matrix(buf.str());
}

void write_loss_matrix(const std::filesystem::path& path, const LossMatrix& matrix) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    char buf[32];
    for (std::int64_t t = 1; t <= matrix.horizon(); ++t) {
        const auto row = matrix.row(t);
        for (std::size_t a = 0; a < row.size(); ++a) {
            const auto res = std::to_chars(buf, buf + sizeof buf, row[a]);
            if (a) out << ',';
            out.write(buf, res.ptr - buf);
        }
        out << '\n';
    }
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

LossMatrix materialize(const AdversarialSpec& spec, std::int64_t horizon) {
    if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
    const Environment env(EnvironmentSpec{spec});
    LossMatrix m;
    m.num_arms = env.num_arms();
    m.losses.resize(static_cast<std::size_t>(horizon) * m.num_arms);
    for (std::int64_t t = 1; t <= horizon; ++t) {
        env.losses_at(t, 0, std::span<double>(m.losses).subspan(static_cast<std::size_t>(t - 1) * m.num_arms,
                                                                m.num_arms));
    }
    return m;
}

}  // namespace bandit
