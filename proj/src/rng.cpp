#include "qinterp/rng.hpp"

#include <cmath>
#include <numbers>

namespace qinterp {

double uniform_phase(std::mt19937_64& eng) {
    return 2.0 * std::numbers::pi * uniform01(eng);
}

double standard_normal(std::mt19937_64& eng) {
    double u1 = uniform01(eng);
    double u2 = uniform01(eng);
    while (u1 <= 0.0) u1 = uniform01(eng);  // guards log(0); consumes extra draws only then
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace qinterp
