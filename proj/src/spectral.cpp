#include "dnls/spectral.hpp"

#include "dnls/errors.hpp"

#include <algorithm>
#include <cmath>

namespace dnls {

namespace {

using cd = std::complex<double>;

constexpr double kUnitCircleTol = 1e-10;

// Roots of x^2 + c1 x + c0 without cancellation in the larger-magnitude root.
std::array<cd, 2> quadratic_roots(cd c1, cd c0) {
    const cd r = std::sqrt(c1 * c1 - 4.0 * c0);
    const cd big = (std::abs(-c1 + r) >= std::abs(-c1 - r)) ? (-c1 + r) / 2.0 : (-c1 - r) / 2.0;
    if (big == 0.0) return {cd{0.0}, cd{0.0}};
    return {big, c0 / big};
}

cd clean(cd z) {
    // Real inputs with real roots must produce exactly real output.
    return std::abs(z.imag()) <= 1e-14 * std::max(1.0, std::abs(z.real())) ? cd{z.real(), 0.0} : z;
}

}  // namespace

bool EigenSystem::all_real(double tol) const {
    return std::all_of(lambda.begin(), lambda.end(),
                       [tol](const cd& z) { return std::abs(z.imag()) <= tol; });
}

ReciprocalQuartic characteristic_poly(const ModelParams& p, FixedPointKind at) {
    if (p.A == 0.0 || !std::isfinite(p.A)) throw ConfigError("A must be nonzero");
    const double inv = 1.0 / p.A;
    if (at == FixedPointKind::Origin) return {inv, -2.0 * inv};
    if (!(p.epsilon * p.A < 0.0))
        throw ConfigError("nontrivial fixed points exist only for epsilon * A < 0");
    return {inv, -(6.0 + 2.0 * inv)};
}

RootTest sturm_real_root_test(const ReciprocalQuartic& q) {
    const double a = q.a, b = q.b;
    const double tol = 1e-14 * std::max({1.0, std::abs(a), std::abs(b)});
    const auto equal = [tol](double u, double v) { return std::abs(u - v) <= tol; };

    const double half_span = 0.5 * std::sqrt(4.0 + 4.0 * b + b * b);  // |b + 2| / 2
    if (equal(b, -2.0) || equal(b, 6.0) || equal(std::abs(a), half_span))
        return RootTest::Indeterminate;

    if (b < -2.0) return std::abs(a) < half_span ? RootTest::AllReal : RootTest::NotAllReal;
    if (b > 6.0) {
        const double inner = std::sqrt(-8.0 + 4.0 * b);
        if (equal(std::abs(a), inner)) return RootTest::Indeterminate;
        const bool second = -half_span < a && a < -inner;
        const bool third = inner < a && a < half_span;
        return (second || third) ? RootTest::AllReal : RootTest::NotAllReal;
    }
    return RootTest::NotAllReal;
}

double discriminant(const ModelParams& p, FixedPointKind at) {
    const double A = p.A;
    if (A == 0.0) throw ConfigError("A must be nonzero");
    const double A2 = A * A, A3 = A2 * A, A4 = A3 * A, A5 = A4 * A;
    if (at == FixedPointKind::Origin)
        return 4.0 * (-2.0 - 31.0 * A - 144.0 * A2 - 176.0 * A3 + 64.0 * A5) / A5;
    return 16.0 * (1.0 + 17.0 * A + 144.0 * A2 + 640.0 * A3 + 1536.0 * A4 + 1024.0 * A5) / A5;
}

std::string_view to_string(SpectrumClass c) {
    switch (c) {
        case SpectrumClass::AllReal: return "all-real";
        case SpectrumClass::TwoComplexPairs: return "two-complex-pairs";
        case SpectrumClass::Mixed: return "mixed";
    }
    return "unknown";
}

std::string_view to_string(RootTest t) {
    switch (t) {
        case RootTest::AllReal: return "all-real";
        case RootTest::NotAllReal: return "not-all-real";
        case RootTest::Indeterminate: return "indeterminate";
    }
    return "unknown";
}

SpectrumClass classify_eigenvalues(double A, FixedPointKind at) {
    if (A == 0.0 || !std::isfinite(A)) throw ConfigError("A must be nonzero");
    if (at == FixedPointKind::Origin) {
        const double lower = (-2.0 + std::sqrt(2.0)) / 4.0;
        if (A >= lower && A < 0.0) return SpectrumClass::AllReal;
        if (A > 0.0 && A <= 2.0) return SpectrumClass::Mixed;
        return SpectrumClass::TwoComplexPairs;
    }
    if (A > -1.0 && A < 0.0) return SpectrumClass::Mixed;
    return SpectrumClass::AllReal;
}

EigenSystem solve_reciprocal_quartic(const ReciprocalQuartic& q) {
    const auto s = quadratic_roots(cd{q.a}, cd{q.b - 2.0});

    EigenSystem es;
    std::array<cd, 2> stable{};
    for (int k = 0; k < 2; ++k) {
        const auto x = quadratic_roots(-s[k], cd{1.0});
        stable[k] = clean(x[1]);  // |x[1]| <= 1 since x[0] x[1] = 1
    }
    if (std::abs(stable[1]) < std::abs(stable[0])) std::swap(stable[0], stable[1]);

    for (int k = 0; k < 2; ++k) {
        es.lambda[k] = stable[k];
        es.lambda[k + 2] = clean(1.0 / stable[k]);
    }
    es.hyperbolic = std::all_of(es.lambda.begin(), es.lambda.end(), [](const cd& z) {
        return std::abs(std::abs(z) - 1.0) > kUnitCircleTol;
    });
    const auto n_real = std::count_if(es.lambda.begin(), es.lambda.end(),
                                      [](const cd& z) { return z.imag() == 0.0; });
    es.classification = n_real == 4   ? SpectrumClass::AllReal
                        : n_real == 0 ? SpectrumClass::TwoComplexPairs
                                      : SpectrumClass::Mixed;
    return es;
}

EigenSystem eigenvectors_at_origin(const ModelParams& p, EigenSystem es) {
    p.validate();
    if (!es.hyperbolic)
        throw NumericalError(NumericalFailure::NonHyperbolic,
                             "origin is not hyperbolic: an eigenvalue lies on the unit circle");
    for (int k = 0; k < 4; ++k) {
        const cd l = es.lambda[k];
        Eigen::Vector4cd v(1.0, l, l * l, l * l * l);
        es.w[k] = v / v.norm();
    }
    es.has_vectors = true;
    return es;
}

}  // namespace dnls
