#include "fsl/rng.hpp"

#include <cmath>

namespace fsl::rng {

double standard_normal(std::uint64_t seed, std::uint64_t realization, std::uint64_t step) {
    double u1 = uniform01(counter_hash(seed, realization, step, 0));
    double u2 = uniform01(counter_hash(seed, realization, step, 1));
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

}  // namespace fsl::rng
