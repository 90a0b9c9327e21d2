#pragma once

// Linearization of the 4-d map at its fixed points. Both characteristic
// polynomials are palindromic, so the spectrum splits into reciprocal pairs.

#include "dnls/lattice_maps.hpp"

#include <Eigen/Core>

#include <array>
#include <complex>
#include <string_view>

namespace dnls {

/// p(x) = x^4 + a x^3 + b x^2 + a x + 1
struct ReciprocalQuartic {
    double a = 0.0;
    double b = 0.0;

    std::complex<double> operator()(std::complex<double> x) const {
        return (((x + a) * x + b) * x + a) * x + 1.0;
    }
};

enum class FixedPointKind { Origin, Nontrivial };

enum class RootTest { AllReal, NotAllReal, Indeterminate };

enum class SpectrumClass { AllReal, TwoComplexPairs, Mixed };

std::string_view to_string(SpectrumClass c);
std::string_view to_string(RootTest t);

/// Eigenvalues are ordered (lambda1, lambda2, 1/lambda1, 1/lambda2) with
/// |lambda1| <= |lambda2| <= 1 when the origin is hyperbolic.
struct EigenSystem {
    std::array<std::complex<double>, 4> lambda{};
    /// Filled by eigenvectors_at_origin; unit Euclidean norm, proportional to
    /// the Vandermonde vector (1, l, l^2, l^3).
    std::array<Eigen::Vector4cd, 4> w{};
    bool hyperbolic = false;
    bool has_vectors = false;
    SpectrumClass classification = SpectrumClass::AllReal;

    bool all_real(double tol = 0.0) const;
};

/// Throws ConfigError for the nontrivial points unless epsilon A < 0.
ReciprocalQuartic characteristic_poly(const ModelParams& p, FixedPointKind at);

/// Real-root criterion for palindromic quartics, evaluated through the three
/// strict (b, a) conditions. Boundary equalities give Indeterminate.
RootTest sturm_real_root_test(const ReciprocalQuartic& q);

/// Closed-form discriminants of the characteristic polynomials (depend on A only).
double discriminant(const ModelParams& p, FixedPointKind at);

SpectrumClass classify_eigenvalues(double A, FixedPointKind at);

/// Solves through s = x + 1/x: s^2 + a s + (b - 2) = 0, then x^2 - s x + 1 = 0.
/// Pairing lambda[k+2] = 1/lambda[k] is exact by construction.
EigenSystem solve_reciprocal_quartic(const ReciprocalQuartic& q);

/// Unit-norm Vandermonde eigenvectors of Jf(0). Throws NumericalError if the
/// spectrum is not hyperbolic.
EigenSystem eigenvectors_at_origin(const ModelParams& p, EigenSystem es);

}  // namespace dnls
