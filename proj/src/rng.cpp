#include "txnembed/rng.hpp"

#include <cmath>

namespace txnembed::rng {

double Engine::normal() {
    // Box-Muller, one value per call. u1 is kept away from 0.
    double u1 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

}  // namespace txnembed::rng
