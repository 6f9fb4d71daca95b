// M-P primitive tests: support/density/phase basics, the quadrature engine
// against closed forms over the full (a, y) grid, moments against the
// combinatorial oracle, and the derivative identities m4 = -m0', m3 = -m1'.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "oracles/narayana.hpp"
#include "oracles/frozen.hpp"
#include "spikeform/errors.hpp"
#include "spikeform/mp_core.hpp"

using namespace spikeform;

namespace {

constexpr double kPi = 3.14159265358979323846;

// the shared (a, y) grid: above-bulk spikes for every y, below-bulk only where
// the interval (0.05, 1-sqrt(y)-0.05) is nonempty
struct GridPoint {
    double a, y;
    bool above;
};

std::vector<GridPoint> spike_grid() {
    std::vector<GridPoint> g;
    const double ys[5] = {0.1, 0.25, 0.5, 2.0 / 3.0, 0.9};
    for (double y : ys) {
        const double sq = std::sqrt(y);
        const double lo = 1.1 + sq;
        for (int i = 0; i < 6; ++i) g.push_back({lo + (10.0 - lo) * i / 5.0, y, true});
        const double below_hi = 1.0 - sq - 0.05;
        if (below_hi > 0.05) {
            for (int i = 0; i < 3; ++i)
                g.push_back({0.05 + (below_hi - 0.05) * i / 2.0, y, false});
        }
    }
    return g;
}

// direct quadrature of g(x) * density(x) dx via the edge-absorbing
// substitution, independent of mp_integral's internals (plain midpoint-free
// Gauss-Legendre is fine after the substitution)
template <typename F>
double density_integral(F&& f, double y, int order = 400) {
    const double c = 1.0 + y;
    const double h = 2.0 * std::sqrt(y);
    // Chebyshev-like uniform trapezoid in t is accurate here because the
    // integrand is smooth and periodic-ish at the endpoints (cos^2 factor)
    double acc = 0.0;
    for (int i = 0; i < order; ++i) {
        const double t = -kPi / 2.0 + kPi * (i + 0.5) / order;
        const double x = c + h * std::sin(t);
        acc += f(x) * mp::mp_density(x, y) * h * std::cos(t);
    }
    return acc * kPi / order;
}

}  // namespace

TEST_CASE("mp_support endpoints") {
    auto s = mp::mp_support(2.0 / 3.0);
    CHECK(s.a_y == doctest::Approx(0.03367).epsilon(1e-3));
    CHECK(s.b_y == doctest::Approx(3.29966).epsilon(1e-5));

    auto q = mp::mp_support(0.25);
    CHECK(q.a_y == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(q.b_y == doctest::Approx(2.25).epsilon(1e-14));

    // degenerate-ratio trend: both endpoints approach 1
    auto tiny = mp::mp_support(1e-8);
    CHECK(std::fabs(tiny.a_y - 1.0) < 3e-4);
    CHECK(std::fabs(tiny.b_y - 1.0) < 3e-4);

    CHECK_THROWS_AS(mp::mp_support(0.0), DomainError);
    CHECK_THROWS_AS(mp::mp_support(1.0), DomainError);
    CHECK_THROWS_AS(mp::mp_support(-0.5), DomainError);
}

TEST_CASE("mp_density vanishes off support and integrates to one with mean one") {
    const double y = 2.0 / 3.0;
    auto s = mp::mp_support(y);
    CHECK(mp::mp_density(s.a_y - 0.01, y) == 0.0);
    CHECK(mp::mp_density(s.b_y + 0.01, y) == 0.0);
    CHECK(mp::mp_density(-1.0, y) == 0.0);
    CHECK(mp::mp_density(0.5 * (s.a_y + s.b_y), y) > 0.0);

    for (double yy : {0.1, 0.25, 0.5, 2.0 / 3.0, 0.9}) {
        const double total = density_integral([](double) { return 1.0; }, yy);
        const double mean = density_integral([](double x) { return x; }, yy);
        CHECK(std::fabs(total - 1.0) < 1e-10);
        CHECK(std::fabs(mean - 1.0) < 1e-10);
    }
}

TEST_CASE("phase map phi") {
    const double y = 2.0 / 3.0;
    CHECK(mp::phase_phi(9.0, y) == doctest::Approx(frozen::kPhi9).epsilon(1e-14));
    CHECK(mp::phase_phi(4.0, y) == doctest::Approx(frozen::kPhi4).epsilon(1e-14));
    CHECK_THROWS_AS(mp::phase_phi(1.0, y), PhaseError);

    // critical point maps exactly onto the bulk edge
    for (double yy : {0.1, 0.5, 0.9}) {
        const double crit = 1.0 + std::sqrt(yy);
        const double b = mp::mp_support(yy).b_y;
        CHECK(mp::phase_phi(crit, yy) == doctest::Approx(b).epsilon(1e-12));
    }

    // strictly increasing above the critical point, mapping into (b_y, inf)
    for (double yy : {0.1, 0.25, 0.5, 2.0 / 3.0, 0.9}) {
        const double b = mp::mp_support(yy).b_y;
        double prev = mp::phase_phi(1.0 + std::sqrt(yy) + 0.1, yy);
        CHECK(prev > b);
        for (int i = 1; i <= 20; ++i) {
            const double a = 1.0 + std::sqrt(yy) + 0.1 + 0.45 * i;
            const double cur = mp::phase_phi(a, yy);
            CHECK(cur > prev);
            prev = cur;
        }
    }
}

TEST_CASE("mp_integral matches pinned closed-form spot values") {
    const double y = 2.0 / 3.0;
    CHECK(std::fabs(mp::mp_integral(mp::Kind::M1, mp::phase_phi(9.0, y), y) - 0.125) < 1e-8);
    CHECK(std::fabs(mp::mp_integral(mp::Kind::M3, mp::phase_phi(4.0, y), y) - 0.12) < 1e-8);
    // decay at infinity
    CHECK(std::fabs(mp::mp_integral(mp::Kind::M0, 1e8, y)) < 1e-7);
}

TEST_CASE("mp_integral rejects lambda inside the support") {
    const double y = 0.5;
    auto s = mp::mp_support(y);
    CHECK_THROWS_AS(mp::mp_integral(mp::Kind::M0, 0.5 * (s.a_y + s.b_y), y), SupportError);
    CHECK_THROWS_AS(mp::mp_integral(mp::Kind::M4, s.a_y, y), SupportError);
    CHECK_THROWS_AS(mp::mp_integral(mp::Kind::M7, s.b_y, y), SupportError);
}

TEST_CASE("mp_integral_closed spot values") {
    const double y = 2.0 / 3.0;
    CHECK(mp::mp_integral_closed(mp::Kind::M0, 9.0, y) == doctest::Approx(3.0 / 26.0).epsilon(1e-14));
    CHECK(mp::mp_integral_closed(mp::Kind::M1, 9.0, y) == doctest::Approx(0.125).epsilon(1e-14));
    CHECK(mp::mp_integral_closed(mp::Kind::M5, 4.0, y) ==
          doctest::Approx(729.0 / 15625.0).epsilon(1e-13));
    CHECK(mp::mp_integral_closed(mp::Kind::M3, 4.0, y) == doctest::Approx(0.12).epsilon(1e-14));
    CHECK_THROWS_AS(mp::mp_integral_closed(mp::Kind::M0, 1.2, y), PhaseError);
    CHECK_THROWS_AS(mp::mp_integral_closed(mp::Kind::M0, -2.0, y), PhaseError);
    // 1e-9 guard just outside the bulk edge
    CHECK_THROWS_AS(mp::mp_integral_closed(mp::Kind::M0, 1.0 + std::sqrt(y) + 1e-10, y), PhaseError);
}

TEST_CASE("closed forms equal quadrature to 1e-8 across the full grid") {
    const mp::Kind kinds[9] = {mp::Kind::M0, mp::Kind::M1, mp::Kind::M2,       mp::Kind::M3,
                               mp::Kind::M4, mp::Kind::M5, mp::Kind::M6,       mp::Kind::M7,
                               mp::Kind::M3plusM7};
    const auto grid = spike_grid();
    CHECK(grid.size() >= 40);
    for (const auto& gp : grid) {
        const double lambda = mp::phase_phi(gp.a, gp.y);
        for (auto kind : kinds) {
            const double closed = mp::mp_integral_closed(kind, gp.a, gp.y);
            const double quad = mp::mp_integral(kind, lambda, gp.y);
            INFO("a=", gp.a, " y=", gp.y, " kind=", int(kind));
            CHECK(std::fabs(closed - quad) < 1e-8);
        }
    }
}

TEST_CASE("m0 and m4 positive above the bulk") {
    for (const auto& gp : spike_grid()) {
        if (!gp.above) continue;
        CHECK(mp::mp_integral_closed(mp::Kind::M0, gp.a, gp.y) > 0.0);
        CHECK(mp::mp_integral_closed(mp::Kind::M4, gp.a, gp.y) > 0.0);
    }
}

TEST_CASE("moments: normalization, mean, and the combinatorial oracle") {
    for (double y : {0.1, 0.25, 0.5, 2.0 / 3.0, 0.9}) {
        CHECK(mp::mp_moment(0, y) == 1.0);
        CHECK(std::fabs(mp::mp_moment(1, y) - 1.0) < 1e-12);
        CHECK(std::fabs(mp::mp_moment(2, y) - (1.0 + y)) < 1e-10);
        for (int m = 3; m <= 8; ++m) {
            const double ref = oracle::mp_moment_narayana(m, y);
            INFO("m=", m, " y=", y);
            CHECK(std::fabs(mp::mp_moment(m, y) - ref) < 1e-9 * std::max(1.0, ref));
        }
    }
    CHECK_THROWS_AS(mp::mp_moment(-1, 0.5), DomainError);
}

TEST_CASE("derivative identities m4 = -m0' and m3 = -m1'") {
    const double h = 1e-5;
    for (double y : {0.25, 2.0 / 3.0}) {
        for (double a : {2.5, 5.0, 9.0}) {
            const double l = mp::phase_phi(a, y);
            const double d0 = (mp::mp_integral(mp::Kind::M0, l + h, y) -
                               mp::mp_integral(mp::Kind::M0, l - h, y)) /
                              (2.0 * h);
            const double d1 = (mp::mp_integral(mp::Kind::M1, l + h, y) -
                               mp::mp_integral(mp::Kind::M1, l - h, y)) /
                              (2.0 * h);
            CHECK(std::fabs(mp::mp_integral(mp::Kind::M4, l, y) + d0) < 1e-5);
            CHECK(std::fabs(mp::mp_integral(mp::Kind::M3, l, y) + d1) < 1e-5);
        }
    }
}

TEST_CASE("mp_integrals_all bundles the individual calls") {
    const double y = 0.5;
    const double l = mp::phase_phi(6.0, y);
    auto all = mp::mp_integrals_all(l, y);
    CHECK(all.lambda == l);
    const mp::Kind kinds[8] = {mp::Kind::M0, mp::Kind::M1, mp::Kind::M2, mp::Kind::M3,
                               mp::Kind::M4, mp::Kind::M5, mp::Kind::M6, mp::Kind::M7};
    for (int i = 0; i < 8; ++i) CHECK(all.m[i] == mp::mp_integral(kinds[i], l, y));
}

TEST_CASE("domain validation is uniform across operations") {
    CHECK_THROWS_AS(mp::mp_density(1.0, 1.5), DomainError);
    CHECK_THROWS_AS(mp::mp_integral(mp::Kind::M0, 5.0, 0.0), DomainError);
    CHECK_THROWS_AS(mp::mp_integral_closed(mp::Kind::M0, 9.0, 1.0), DomainError);
    CHECK_THROWS_AS(mp::phase_phi(9.0, -1.0), DomainError);
    CHECK_THROWS_AS(mp::mp_moment(2, 2.0), DomainError);
}
