#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace bandit {

/// Absolute tolerance on the sum of a probability vector.
inline constexpr double kProbSumTolerance = 1e-12;

struct ArmId {
    std::size_t index{0};

    constexpr ArmId() = default;
    constexpr explicit ArmId(std::size_t i) : index(i) {}

    friend constexpr bool operator==(ArmId, ArmId) = default;
    friend constexpr auto operator<=>(ArmId, ArmId) = default;
};

/// Throws std::out_of_range unless arm < num_arms.
void check_arm(ArmId arm, std::size_t num_arms);

/// A loss in [0, 1]. Construction rejects anything else, NaN included.
class Loss {
public:
    constexpr Loss() = default;
    explicit Loss(double v) : value_(v) {
        if (!(v >= 0.0 && v <= 1.0)) {
            throw std::invalid_argument("loss " + std::to_string(v) + " outside [0,1]");
        }
    }

    constexpr double value() const { return value_; }

private:
    double value_{0.0};
};

/// Nonnegative entries summing to one within kProbSumTolerance. The only way
/// to obtain one is through validate_distribution or the named factories.
class ProbVector {
public:
    static ProbVector uniform(std::size_t num_arms);
    static ProbVector point_mass(std::size_t num_arms, ArmId arm);

    std::size_t size() const { return probs_.size(); }
    double operator[](std::size_t a) const { return probs_[a]; }
    std::span<const double> probs() const { return probs_; }

private:
    explicit ProbVector(std::vector<double> p) : probs_(std::move(p)) {}
    friend ProbVector validate_distribution(std::span<const double> p);

    std::vector<double> probs_;
};

/// Accepts p when it is non-empty, every entry is finite and >= 0, and the
/// entries sum to 1 within kProbSumTolerance. Otherwise throws
/// std::invalid_argument naming the offending index or the deviation.
ProbVector validate_distribution(std::span<const double> p);

struct PlayRecord {
    std::int64_t round{1};
    ArmId arm;
    Loss loss;
};

// ---------------------------------------------------------------------------
// Random streams
//
// Every stream in the library is a SplitMix64 sequence: output i of a stream
// seeded with s is mix64(s + (i + 1) * golden_gamma). It is therefore both a
// counter-based generator (random access through keyed_bits) and trivially
// splittable (derive_stream_seed). Streams are cheap value types that are
// owned by exactly one replicate.
// ---------------------------------------------------------------------------

inline constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;

/// SplitMix64 finalizer; a bijection on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

class RandomStream {
public:
    using result_type = std::uint64_t;

    constexpr explicit RandomStream(std::uint64_t seed = 0) : state_(seed) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    constexpr result_type operator()() {
        state_ += kGoldenGamma;
        return mix64(state_);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    friend constexpr bool operator==(const RandomStream&, const RandomStream&) = default;

private:
    std::uint64_t state_;
};

/// Random-access bits for the counter (key, t, a). Used by environments so
/// that a loss depends only on where it sits in the loss matrix.
constexpr std::uint64_t keyed_bits(std::uint64_t key, std::uint64_t t, std::uint64_t a) {
    return mix64(mix64(key + t * kGoldenGamma) ^ (a * 0xd1b54a32d192ed03ULL + 0x8cb92ba72f3d8dd7ULL));
}

constexpr double bits_to_unit(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// Deterministic seed for the stream owned by (policy_id, replicate_id).
/// The two ids enter through different odd multipliers, so swapping them
/// changes the result.
constexpr std::uint64_t derive_stream_seed(std::uint64_t master_seed, std::uint64_t policy_id,
                                           std::uint64_t replicate_id) {
    std::uint64_t h = mix64(master_seed ^ 0x6a09e667f3bcc909ULL);
    h = mix64(h ^ mix64(policy_id * 0xbb67ae8584caa73bULL + 0x3c6ef372fe94f82bULL));
    h = mix64(h ^ mix64(replicate_id * 0xa54ff53a5f1d36f1ULL + 0x510e527fade682d1ULL));
    return h;
}

/// Inverse-CDF draw over arm index order. Arms with zero probability are
/// never returned, even when rounding leaves the cumulative sum below u.
ArmId sample_arm(std::span<const double> p, RandomStream& stream);

inline ArmId sample_arm(const ProbVector& p, RandomStream& stream) {
    return sample_arm(p.probs(), stream);
}

/// Lowest index among the minimal entries.
std::size_t argmin_lowest(std::span<const double> values);

}  // namespace bandit
