#pragma once

#include "dnls/lattice_maps.hpp"

#include <cmath>
#include <cstdint>
#include <random>

namespace testing {

// Deterministic generator for property tests.
class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

    /// epsilon in +-[1e-4, 1], A in the all-real window [-0.145, -0.11].
    dnls::ModelParams params() {
        const double mag = std::pow(10.0, uniform(-4.0, 0.0));
        return {integer(0, 1) ? mag : -mag, uniform(-0.145, -0.11)};
    }

    dnls::ModelParams positive_params() {
        return {std::pow(10.0, uniform(-4.0, 0.0)), uniform(-0.145, -0.115)};
    }

    /// States inside the non-wandering box of p.
    dnls::State4 state4(const dnls::ModelParams& p) {
        const double b = dnls::nonwandering_bound(p, 4);
        return {uniform(-b, b), uniform(-b, b), uniform(-b, b), uniform(-b, b)};
    }

    dnls::State2 state2(const dnls::ModelParams& p) {
        const double b = dnls::nonwandering_bound(p, 2);
        return {uniform(-b, b), uniform(-b, b)};
    }

private:
    std::mt19937_64 rng_;
};

inline constexpr double kPrintedX = 9.23324715725e-3;
inline constexpr double kPrintedY = 1.32738452775e-2;

inline dnls::State4 printed_point() { return {kPrintedX, kPrintedY, kPrintedY, kPrintedX}; }

inline const dnls::ModelParams kIllustrative{0.0004, -0.125};

}  // namespace testing
