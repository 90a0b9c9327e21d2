#include "dnls/errors.hpp"
#include "dnls/soliton.hpp"
#include "support.hpp"

#include <doctest.h>

#include <algorithm>

using namespace dnls;
using testing::kIllustrative;

namespace {

struct Fixture {
    ManifoldSeries Pu, Ps;
    HomoclinicSolution sol;
    SolitonProfile profile;
};

const Fixture& illustrative() {
    static const Fixture f = [] {
        ManifoldSeries Pu = compute_manifold(kIllustrative, Branch::Unstable);
        ManifoldSeries Ps = compute_manifold(kIllustrative, Branch::Stable);
        HomoclinicSolution sol = *primary_solution(symmetric_search(Pu, Ps));
        SolitonProfile prof = build_profile(sol, Pu, Ps);
        return Fixture{std::move(Pu), std::move(Ps), sol, std::move(prof)};
    }();
    return f;
}

double at(const SolitonProfile& p, int n) {
    for (const auto& s : p.samples)
        if (s.n == n) return s.u;
    return 0.0;
}

}  // namespace

TEST_CASE("stationary residual on simple profiles") {
    CHECK(stationary_residual(std::vector<double>(9, 0.0), kIllustrative) == 0.0);
    CHECK_THROWS_AS(stationary_residual(std::vector<double>(4, 0.0), kIllustrative), ConfigError);

    // Hand-evaluated: a single spike c at the center of five sites.
    const double c = 0.1;
    const std::vector<double> spike{0, 0, c, 0, 0};
    const ModelParams p{0.5, -0.2};
    const double center = std::abs(c * c * c - 2 * p.epsilon * c);
    const double neighbor = std::abs(p.epsilon * c);
    const double far = std::abs(p.epsilon * p.A * c);
    CHECK(stationary_residual(spike, p) == doctest::Approx(std::max({center, neighbor, far})));
}

TEST_CASE("profile of the illustrative homoclinic") {
    const auto& f = illustrative();
    const SolitonProfile& prof = f.profile;
    CHECK(prof.floor_forward);
    CHECK(prof.floor_backward);
    CHECK(prof.residual_max <= 1e-9);
    CHECK(prof.residual_max == stationary_residual(prof));

    // Consecutive indices.
    for (std::size_t i = 1; i < prof.samples.size(); ++i)
        CHECK(prof.samples[i].n == prof.samples[i - 1].n + 1);

    // The homoclinic point sits at sites -1 .. 2.
    for (int i = 0; i < 4; ++i) CHECK(at(prof, i - 1) == doctest::Approx(f.sol.point[i]).epsilon(1e-9));

    // Single hump of amplitude ~1e-2, mirror symmetric about n = 1/2.
    double peak = 0.0;
    for (const auto& s : prof.samples) peak = std::max(peak, std::abs(s.u));
    CHECK(peak > 5e-3);
    CHECK(peak < 5e-2);
    for (const auto& s : prof.samples) CHECK(std::abs(s.u - at(prof, 1 - s.n)) <= 1e-10);

    // Tails decay monotonically beyond the hump.
    for (const auto& s : prof.samples)
        if (s.n >= 1 && std::abs(at(prof, s.n + 1)) > 1e-15)
            CHECK(std::abs(at(prof, s.n + 1)) < std::abs(s.u));
}

TEST_CASE("tail decay matches the slow stable eigenvalue") {
    const auto& f = illustrative();
    const double l2 = std::abs(f.Ps.rates()[1]);
    CHECK(l2 == doctest::Approx(0.4734).epsilon(1e-3));
    CHECK(std::abs(f.profile.decay_forward / l2 - 1.0) <= 0.05);
    CHECK(std::abs(f.profile.decay_backward / l2 - 1.0) <= 0.05);
}

TEST_CASE("negation and perturbation") {
    const auto& f = illustrative();
    std::vector<double> u = f.profile.values();
    std::vector<double> neg(u.size());
    std::transform(u.begin(), u.end(), neg.begin(), [](double x) { return -x; });
    CHECK(stationary_residual(neg, kIllustrative) == stationary_residual(u, kIllustrative));

    u[u.size() / 2] += 1e-3;
    CHECK(stationary_residual(u, kIllustrative) >= 0.5 * kIllustrative.epsilon * 1e-3);
}

TEST_CASE("a point off the manifolds is reported as divergence") {
    const auto& f = illustrative();
    HomoclinicSolution fake = f.sol;
    fake.point[0] += 1e-4;
    try {
        build_profile(fake, f.Pu, f.Ps);
        FAIL("expected divergence");
    } catch (const NumericalError& e) {
        CHECK(e.kind() == NumericalFailure::Divergence);
    }
    CHECK_THROWS_AS(build_profile(f.sol, f.Ps, f.Pu), ConfigError);
}

TEST_CASE("profiles across the scan window") {
    for (double eps : {0.01, 1.0})
        for (double A : {-0.145, -0.115}) {
            const ModelParams p{eps, A};
            const ManifoldSeries Pu = compute_manifold(p, Branch::Unstable);
            const ManifoldSeries Ps = compute_manifold(p, Branch::Stable);
            const auto sols = symmetric_search(Pu, Ps);
            REQUIRE_FALSE(sols.empty());
            for (const auto& s : sols) {
                const SolitonProfile prof = build_profile(s, Pu, Ps);
                INFO("epsilon = " << eps << ", A = " << A);
                CHECK(prof.floor_forward);
                CHECK(prof.floor_backward);
                CHECK(prof.residual_max <= 1e-9);
                CHECK(std::abs(prof.decay_forward / Ps.rates()[1] - 1.0) <= 0.05);
            }
        }
}

TEST_CASE("tail decay estimator") {
    std::vector<double> geo;
    for (int k = 0; k < 40; ++k) geo.push_back(std::pow(0.5, k));
    CHECK(tail_decay(geo, 1e-2, 1e-14) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(std::isnan(tail_decay({1.0, 0.5}, 1.0, 1e-14)));
}

TEST_CASE("planar portraits") {
    const auto seeds = default_portrait_seeds();
    REQUIRE(seeds.front().norm() == 0.0);
    for (const auto& s : seeds) CHECK(s.norm() <= 0.1);

    const auto neg = portrait_2d({-0.1, 0.0}, seeds, 100000);
    CHECK_FALSE(neg[0].escaped);
    for (std::size_t i = 1; i < neg.size(); ++i) CHECK(neg[i].escaped);

    const auto pos = portrait_2d({0.1, 0.0}, seeds, 10000);
    for (const auto& o : pos) {
        CHECK_FALSE(o.escaped);
        CHECK(o.states.size() == 10001);
    }
    for (const auto& s : pos[0].states) CHECK(s.norm() == 0.0);

    const auto wide = portrait_2d({2.0, 0.0}, seeds, 10000);
    for (const auto& o : wide) CHECK_FALSE(o.escaped);

    const auto serial = portrait_2d({0.1, 0.0}, seeds, 500, Execution::Serial);
    const auto parallel = portrait_2d({0.1, 0.0}, seeds, 500, Execution::Parallel);
    for (std::size_t i = 0; i < seeds.size(); ++i)
        CHECK((serial[i].states.back() - parallel[i].states.back()).norm() == 0.0);

    CHECK_THROWS_AS(portrait_2d({0.0, 0.0}, seeds, 10), ConfigError);
}
