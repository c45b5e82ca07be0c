#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace bald {

// Portable seeded generator used for all stochastic simulation.
//
// The engine is std::mt19937_64, whose output stream is fully specified by
// the C++ standard, so integer draws are identical on every platform.
// Uniform doubles take the top 53 bits of one engine output; normals use the
// Box-Muller transform on two uniforms (pairs cached). Draw order is part of
// the contract: callers document their traversal order so seeded outputs are
// reproducible.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    // Uniform on [0, 1) with 53-bit resolution.
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Standard normal via Box-Muller; consumes two uniforms per pair.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();  // guard log(0)
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * M_PI * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

private:
    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace bald
