#include "bandit/core.hpp"

#include <cmath>
#include <sstream>

namespace bandit {

void check_arm(ArmId arm, std::size_t num_arms) {
    if (arm.index >= num_arms) {
        throw std::out_of_range("arm " + std::to_string(arm.index) + " out of range for K=" +
                                std::to_string(num_arms));
    }
}

ProbVector ProbVector::uniform(std::size_t num_arms) {
    if (num_arms == 0) throw std::invalid_argument("empty distribution");
    return ProbVector(std::vector<double>(num_arms, 1.0 / static_cast<double>(num_arms)));
}

ProbVector ProbVector::point_mass(std::size_t num_arms, ArmId arm) {
    check_arm(arm, num_arms);
    std::vector<double> p(num_arms, 0.0);
    p[arm.index] = 1.0;
    return ProbVector(std::move(p));
}

ProbVector validate_distribution(std::span<const double> p) {
    if (p.empty()) throw std::invalid_argument("empty distribution");
    double sum = 0.0;
    for (std::size_t a = 0; a < p.size(); ++a) {
        if (!std::isfinite(p[a]) || p[a] < 0.0) {
            std::ostringstream os;
            os << "invalid probability " << p[a] << " at index " << a;
            throw std::invalid_argument(os.str());
        }
        sum += p[a];
    }
    if (std::abs(sum - 1.0) > kProbSumTolerance) {
        std::ostringstream os;
        os.precision(17);
        os << "probabilities sum to " << sum << " (deviation " << sum - 1.0 << ")";
        throw std::invalid_argument(os.str());
    }
    return ProbVector(std::vector<double>(p.begin(), p.end()));
}

ArmId sample_arm(std::span<const double> p, RandomStream& stream) {
    const double u = stream.uniform();
    double cum = 0.0;
    std::size_t last_positive = 0;
    for (std::size_t a = 0; a < p.size(); ++a) {
        if (p[a] <= 0.0) continue;
        cum += p[a];
        last_positive = a;
        if (u < cum) return ArmId(a);
    }
    return ArmId(last_positive);
}

std::size_t argmin_lowest(std::span<const double> values) {
    std::size_t best = 0;
    for (std::size_t a = 1; a < values.size(); ++a) {
        if (values[a] < values[best]) best = a;
    }
    return best;
}

}  // namespace bandit
