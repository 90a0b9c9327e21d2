#include "dnls/errors.hpp"
#include "dnls/spectral.hpp"
#include "support.hpp"

#include <doctest.h>

#include <Eigen/Dense>

#include <algorithm>

using namespace dnls;
using cd = std::complex<double>;

namespace {

// Roots of x^4 + a x^3 + b x^2 + a x + 1 from the companion matrix.
Eigen::Vector4cd companion_roots(double a, double b) {
    Eigen::Matrix4d C = Eigen::Matrix4d::Zero();
    C(1, 0) = C(2, 1) = C(3, 2) = 1.0;
    C(0, 3) = -1.0;
    C(1, 3) = -a;
    C(2, 3) = -b;
    C(3, 3) = -a;
    return Eigen::EigenSolver<Eigen::Matrix4d>(C, false).eigenvalues();
}

bool all_roots_real(double a, double b) {
    const auto r = companion_roots(a, b);
    for (int i = 0; i < 4; ++i)
        if (std::abs(r[i].imag()) > 1e-6 * std::max(1.0, std::abs(r[i]))) return false;
    return true;
}

// Discriminant of c4 x^4 + c3 x^3 + c2 x^2 + c1 x + c0.
double generic_discriminant(double a, double b, double c, double d, double e) {
    return 256 * a * a * a * e * e * e - 192 * a * a * b * d * e * e - 128 * a * a * c * c * e * e +
           144 * a * a * c * d * d * e - 27 * a * a * d * d * d * d + 144 * a * b * b * c * e * e -
           6 * a * b * b * d * d * e - 80 * a * b * c * c * d * e + 18 * a * b * c * d * d * d +
           16 * a * c * c * c * c * e - 4 * a * c * c * c * d * d - 27 * b * b * b * b * e * e +
           18 * b * b * b * c * d * e - 4 * b * b * b * d * d * d - 4 * b * b * c * c * c * e +
           b * b * c * c * d * d;
}

double near_boundary(double a, double b) {
    const double half_span = 0.5 * std::abs(b + 2.0);
    double d = std::min({std::abs(b + 2.0), std::abs(b - 6.0), std::abs(std::abs(a) - half_span)});
    if (b > 6.0) d = std::min(d, std::abs(std::abs(a) - std::sqrt(4.0 * b - 8.0)));
    return d;
}

}  // namespace

TEST_CASE("characteristic polynomials") {
    const auto q = characteristic_poly({0.0004, -0.125}, FixedPointKind::Origin);
    CHECK(q.a == -8.0);
    CHECK(q.b == 16.0);
    const auto n = characteristic_poly({0.0004, -0.125}, FixedPointKind::Nontrivial);
    CHECK(n.a == -8.0);
    CHECK(n.b == 10.0);
    const auto q2 = characteristic_poly({0.0004, 2.0}, FixedPointKind::Origin);
    CHECK(q2.a == 0.5);
    CHECK(q2.b == -1.0);
    CHECK_THROWS_AS(characteristic_poly({0.0004, 0.125}, FixedPointKind::Nontrivial), ConfigError);
    CHECK_THROWS_AS(characteristic_poly({0.0004, 0.0}, FixedPointKind::Origin), ConfigError);
}

TEST_CASE("characteristic polynomial is det(x I - Jf) at the fixed points") {
    testing::Gen g(31);
    for (int k = 0; k < 50; ++k) {
        const ModelParams p{g.uniform(0.001, 1.0), g.uniform(-1.0, -0.01)};
        const auto fps = fixed_points(p);
        for (std::size_t i = 0; i < fps.size(); ++i) {
            const auto q = characteristic_poly(p, i == 0 ? FixedPointKind::Origin
                                                         : FixedPointKind::Nontrivial);
            const Matrix4 J = map4_jacobian(fps[i], p);
            for (double x : {-1.7, -0.3, 0.4, 2.2}) {
                const double det = (x * Matrix4::Identity() - J).determinant();
                const double val = q(cd{x}).real();
                CHECK(std::abs(det - val) <= 1e-9 * std::max(1.0, std::abs(val)));
            }
        }
    }
}

TEST_CASE("real-root test at hand-checked points") {
    CHECK(sturm_real_root_test({-8.0, 16.0}) == RootTest::AllReal);
    CHECK(sturm_real_root_test({0.5, 0.0}) == RootTest::NotAllReal);
    CHECK(sturm_real_root_test({0.5, -1.0}) == RootTest::Indeterminate);
    CHECK(sturm_real_root_test({0.0, -2.0}) == RootTest::Indeterminate);
    CHECK(sturm_real_root_test({1.0, 6.0}) == RootTest::Indeterminate);
}

TEST_CASE("real-root test agrees with companion-matrix root counting") {
    int compared = 0, skipped = 0;
    for (int i = 0; i <= 100; ++i)
        for (int j = 0; j <= 100; ++j) {
            const double a = -12.0 + 0.24 * i, b = -12.0 + 0.24 * j;
            const RootTest t = sturm_real_root_test({a, b});
            if (t == RootTest::Indeterminate || near_boundary(a, b) < 1e-6) {
                ++skipped;
                continue;
            }
            ++compared;
            INFO("a = " << a << ", b = " << b);
            CHECK((t == RootTest::AllReal) == all_roots_real(a, b));
        }
    CHECK(compared >= 10000 - 50);
    MESSAGE("skipped " << skipped << " boundary grid points");
}

TEST_CASE("closed-form discriminants against the generic quartic formula") {
    const ModelParams ill{0.0004, -0.125};
    CHECK(discriminant(ill, FixedPointKind::Origin) == doctest::Approx(4352.0).epsilon(1e-12));

    testing::Gen g(32);
    for (int k = 0; k < 100; ++k) {
        const double A = k % 2 ? g.uniform(-1.0, -0.01) : g.uniform(0.01, 3.0);
        const ModelParams p{A < 0 ? 0.1 : -0.1, A};
        for (FixedPointKind at : {FixedPointKind::Origin, FixedPointKind::Nontrivial}) {
            const auto q = characteristic_poly(p, at);
            const double ref = generic_discriminant(1.0, q.a, q.b, q.a, 1.0);
            const double got = discriminant(p, at);
            INFO("A = " << A);
            CHECK(std::abs(got - ref) <= 1e-9 * std::abs(ref));
        }
    }

    for (int k = 0; k <= 30; ++k) {
        const double A = -0.145 + 0.001 * k;
        CHECK(discriminant({0.1, A}, FixedPointKind::Origin) > 0.0);
    }
}

TEST_CASE("origin discriminant has a double zero at the all-real boundary") {
    // Two reciprocal pairs merge there, so the discriminant touches zero
    // without changing sign and grows quadratically on both sides.
    const double edge = (-2.0 + std::sqrt(2.0)) / 4.0;
    const auto D = [](double A) { return discriminant({0.1, A}, FixedPointKind::Origin); };
    CHECK(std::abs(D(edge)) <= 1e-9 * D(edge + 1e-2));
    for (double h : {1e-6, 1e-3, 1e-2}) {
        CHECK(D(edge - h) > 0.0);
        CHECK(D(edge + h) > 0.0);
    }
    CHECK(D(edge + 1e-3) / D(edge + 1e-6) == doctest::Approx(1e6).epsilon(0.1));
    CHECK(D(edge - 1e-3) / D(edge - 1e-6) == doctest::Approx(1e6).epsilon(0.1));
}

TEST_CASE("classification") {
    CHECK(classify_eigenvalues(-0.125, FixedPointKind::Origin) == SpectrumClass::AllReal);
    CHECK(classify_eigenvalues(1.0, FixedPointKind::Origin) == SpectrumClass::Mixed);
    CHECK(classify_eigenvalues(-0.5, FixedPointKind::Nontrivial) == SpectrumClass::Mixed);
    CHECK(classify_eigenvalues(-3.0, FixedPointKind::Origin) == SpectrumClass::TwoComplexPairs);
    CHECK(classify_eigenvalues(-0.2, FixedPointKind::Origin) == SpectrumClass::TwoComplexPairs);

    // Against companion-matrix roots away from the interval ends.
    testing::Gen g(33);
    for (int k = 0; k < 400; ++k) {
        const double A = g.uniform(-3.0, 3.0);
        if (std::abs(A) < 1e-3) continue;
        const double edges[] = {(-2.0 + std::sqrt(2.0)) / 4.0, 0.0, 2.0, -1.0};
        if (std::any_of(std::begin(edges), std::end(edges),
                        [&](double e) { return std::abs(A - e) < 1e-4; }))
            continue;
        for (FixedPointKind at : {FixedPointKind::Origin, FixedPointKind::Nontrivial}) {
            const ModelParams p{A < 0 ? 0.1 : -0.1, A};
            const auto q = characteristic_poly(p, at);
            const auto r = companion_roots(q.a, q.b);
            int n_real = 0;
            for (int i = 0; i < 4; ++i)
                if (std::abs(r[i].imag()) <= 1e-7 * std::max(1.0, std::abs(r[i]))) ++n_real;
            const SpectrumClass want = n_real == 4   ? SpectrumClass::AllReal
                                       : n_real == 0 ? SpectrumClass::TwoComplexPairs
                                                     : SpectrumClass::Mixed;
            INFO("A = " << A);
            CHECK(classify_eigenvalues(A, at) == want);
            CHECK(solve_reciprocal_quartic(q).classification == want);
        }
    }
}

TEST_CASE("palindromic solver") {
    const EigenSystem es = solve_reciprocal_quartic({-8.0, 16.0});
    CHECK(es.hyperbolic);
    CHECK(es.all_real());
    const auto ref = companion_roots(-8.0, 16.0);
    std::array<double, 4> sorted;
    for (int i = 0; i < 4; ++i) sorted[i] = ref[i].real();
    std::sort(sorted.begin(), sorted.end());
    CHECK(es.lambda[0].real() == doctest::Approx(sorted[0]).epsilon(1e-12));
    CHECK(es.lambda[1].real() == doctest::Approx(sorted[1]).epsilon(1e-12));
    CHECK(es.lambda[3].real() == doctest::Approx(sorted[2]).epsilon(1e-12));
    CHECK(es.lambda[2].real() == doctest::Approx(sorted[3]).epsilon(1e-12));
    CHECK(es.lambda[0].real() == doctest::Approx(0.191471).epsilon(1e-5));
    CHECK(es.lambda[1].real() == doctest::Approx(0.473398).epsilon(1e-5));

    const EigenSystem flat = solve_reciprocal_quartic({0.0, 2.0});
    CHECK_FALSE(flat.hyperbolic);
    CHECK_THROWS_AS(eigenvectors_at_origin(testing::kIllustrative, flat), NumericalError);

    testing::Gen g(34);
    for (int k = 0; k < 500; ++k) {
        const ReciprocalQuartic q{g.uniform(-12, 12), g.uniform(-12, 12)};
        const EigenSystem e = solve_reciprocal_quartic(q);
        cd prod{1.0};
        for (int i = 0; i < 4; ++i) {
            prod *= e.lambda[i];
            const double scale = std::pow(std::max(1.0, std::abs(e.lambda[i])), 4);
            CHECK(std::abs(q(e.lambda[i])) <= 1e-11 * scale * (1 + std::abs(q.a) + std::abs(q.b)));
        }
        CHECK(std::abs(prod - 1.0) <= 1e-12);
        CHECK(std::abs(e.lambda[0] * e.lambda[2] - 1.0) <= 1e-12);
        CHECK(std::abs(e.lambda[1] * e.lambda[3] - 1.0) <= 1e-12);
        CHECK(std::abs(e.lambda[0]) <= std::abs(e.lambda[1]));
    }
}

TEST_CASE("Vandermonde eigenvectors at the origin") {
    const ModelParams p = testing::kIllustrative;
    const EigenSystem es = eigenvectors_at_origin(
        p, solve_reciprocal_quartic(characteristic_poly(p, FixedPointKind::Origin)));
    REQUIRE(es.has_vectors);
    const Eigen::Matrix4cd J = map4_jacobian(State4::Zero(), p).cast<cd>();
    for (int k = 0; k < 4; ++k) {
        CHECK((J * es.w[k] - es.lambda[k] * es.w[k]).norm() <= 1e-11);
        CHECK(std::abs(es.w[k].norm() - 1.0) <= 1e-14);
    }
    const Eigen::Vector4cd dir = es.w[0] / es.w[0][0];
    CHECK(dir[1].real() == doctest::Approx(0.191471).epsilon(1e-5));
    CHECK(dir[2].real() == doctest::Approx(0.036661).epsilon(1e-4));
    CHECK(dir[3].real() == doctest::Approx(0.007019).epsilon(1e-3));

    // Reversal of a stable eigenvector spans the reciprocal eigenvector.
    for (int k = 0; k < 2; ++k) {
        const Eigen::Vector4cd rev = es.w[k].reverse();
        const cd ratio = rev[0] / es.w[k + 2][0];
        CHECK((rev - ratio * es.w[k + 2]).norm() <= 1e-12);
    }
}
