#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "bandit/core.hpp"

namespace bandit {

enum class LossFamily {
    kBernoulli,       // loss in {0, 1}, P(loss = 1) = mu
    kClippedUniform,  // uniform on [mu - h, mu + h], h = min(width, mu, 1 - mu)
};

struct StochasticSpec {
    std::vector<double> means;
    LossFamily family = LossFamily::kBernoulli;
    double width = 0.5;
};

/// Row-major T x K matrix of losses fixed before play.
struct LossMatrix {
    std::size_t num_arms = 0;
    std::vector<double> losses;

    std::int64_t horizon() const {
        return num_arms == 0 ? 0 : static_cast<std::int64_t>(losses.size() / num_arms);
    }
    std::span<const double> row(std::int64_t t) const {
        return std::span<const double>(losses).subspan(static_cast<std::size_t>(t - 1) * num_arms, num_arms);
    }
};

/// Arm 0 has loss `low` and the others `high` before round switch_round;
/// from then on arm K-1 has loss `low` and the others `high`.
struct SwitchingGenerator {
    std::size_t num_arms = 2;
    double low = 0.2;
    double high = 0.8;
    std::int64_t switch_round = 5000;
};

/// loss_t(a) = round(1/2 + 1/2 sin(2 pi t / period + 2 pi a / K)).
struct SinusoidalGenerator {
    std::size_t num_arms = 2;
    double period = 1000.0;
};

using AdversarialSpec = std::variant<LossMatrix, SwitchingGenerator, SinusoidalGenerator>;

/// The base process, except that on rounds 1..budget the best arm's loss is 1
/// and bad_arm's loss is 0.
struct ContaminatedSpec {
    StochasticSpec base;
    std::int64_t budget = 0;
    std::size_t bad_arm = 1;
};

using EnvironmentSpec = std::variant<StochasticSpec, AdversarialSpec, ContaminatedSpec>;

struct GroundTruth {
    std::vector<double> gaps;
    ArmId best_arm;
};

std::size_t num_arms(const EnvironmentSpec& spec);

/// Throws std::invalid_argument describing the first problem found.
void validate_spec(const EnvironmentSpec& spec);

/// Gaps and best arm (lowest index on ties) for stochastic and contaminated
/// specs; nullopt for adversarial ones.
std::optional<GroundTruth> ground_truth(const EnvironmentSpec& spec);

/// Validated, immutable environment. losses_at is a pure function of
/// (spec, t, key): stochastic losses for round t and arm a are drawn from the
/// counter (key, t, a), so a loss never depends on which rounds were queried
/// before or on what a policy played.
class Environment {
public:
    explicit Environment(EnvironmentSpec spec);

    const EnvironmentSpec& spec() const { return spec_; }
    std::size_t num_arms() const { return num_arms_; }
    const std::optional<GroundTruth>& truth() const { return truth_; }

    /// Largest valid round, or nullopt when unbounded.
    std::optional<std::int64_t> horizon() const;

    /// Fills out (size K) with the loss vector of round t >= 1.
    void losses_at(std::int64_t t, std::uint64_t key, std::span<double> out) const;

private:
    EnvironmentSpec spec_;
    std::size_t num_arms_;
    std::optional<GroundTruth> truth_;
};

std::vector<Loss> losses_at(const EnvironmentSpec& spec, std::int64_t t, std::uint64_t key);

/// One round per line, K losses separated by commas or whitespace. Blank
/// lines and lines starting with '#' are skipped.
LossMatrix read_loss_matrix(const std::filesystem::path& path);
LossMatrix parse_loss_matrix(const std::string& text);
void write_loss_matrix(const std::filesystem::path& path, const LossMatrix& matrix);

/// Materializes the first `horizon` rounds of a generator.
LossMatrix materialize(const AdversarialSpec& spec, std::int64_t horizon);

}  // namespace bandit
