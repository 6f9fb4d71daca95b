// Tests for the sesquilinear-form covariance assembly: trace functionals
// against brute-force loops, block assembly against hand-computed moment
// tables, exact finite-n covariance identities checked by direct Monte Carlo,
// and the quadratic-form covariance against the scaled-moment formula.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cmath>
#include <cstddef>
#include <random>
#include <vector>

#include "spikeform/errors.hpp"
#include "spikeform/linalg.hpp"
#include "spikeform/sesquilinear.hpp"
#include "oracles/narayana.hpp"
#include "oracles/frozen.hpp"

using spikeform::la::Matrix;
using namespace spikeform::sesq;

namespace {

Matrix random_symmetric(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix A(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j <= i; ++j) {
            const double v = normal(gen);
            A(i, j) = v;
            A(j, i) = v;
        }
    return A;
}

// Brute-force trace functionals, written as plain loops independent of the
// library implementation.
TraceLimits brute_trace_limits(const Matrix& A, const Matrix& B) {
    const std::size_t n = A.rows();
    TraceLimits tl{0.0, 0.0, 0.0};
    for (std::size_t u = 0; u < n; ++u) tl.w += A(u, u) * B(u, u);
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = 0; v < n; ++v) {
            tl.theta += A(u, v) * B(u, v);
            tl.tau += A(u, v) * B(v, u);
        }
    tl.w /= static_cast<double>(n);
    tl.theta /= static_cast<double>(n);
    tl.tau /= static_cast<double>(n);
    return tl;
}

// Jointly Gaussian coordinate model used by the Monte Carlo checks:
//   x = (x_1, x_2) standard Gaussian with correlation rx,
//   y_l = rho_l x_l + sqrt(1 - rho_l^2) z_l,  z independent of x with
//   correlation rz.  All fourth moments follow from Isserlis' theorem.
struct GaussianPairModel {
    double rho1 = 0.6, rho2 = -0.3, rx = 0.5, rz = -0.4;

    JointMomentTable table() const {
        JointMomentTable t;
        t.K = 2;
        t.Exx = Matrix(2, 2);
        t.Eyy = Matrix(2, 2);
        t.Exy = Matrix(2, 2);
        t.F = Matrix(2, 2);
        const double rho[2] = {rho1, rho2};
        const double c[2] = {std::sqrt(1.0 - rho1 * rho1), std::sqrt(1.0 - rho2 * rho2)};
        for (std::size_t l = 0; l < 2; ++l)
            for (std::size_t m = 0; m < 2; ++m) {
                const double exx = (l == m) ? 1.0 : rx;
                const double rzz = (l == m) ? 1.0 : rz;
                t.Exx(l, m) = exx;
                t.Eyy(l, m) = rho[l] * rho[m] * exx + c[l] * c[m] * rzz;
                t.Exy(l, m) = rho[m] * exx;  // E[x_l y_m]
            }
        // Isserlis: E[x_l y_l x_m y_m] = Exy(l,l) Exy(m,m) + Exx(l,m) Eyy(l,m)
        //                                + Exy(l,m) Exy(m,l)
        for (std::size_t l = 0; l < 2; ++l)
            for (std::size_t m = 0; m < 2; ++m)
                t.F(l, m) = t.Exy(l, l) * t.Exy(m, m) + t.Exx(l, m) * t.Eyy(l, m) +
                            t.Exy(l, m) * t.Exy(m, l);
        return t;
    }

    // one sample of (x_1, x_2, y_1, y_2)
    void draw(std::mt19937_64& gen, double* x, double* y) const {
        std::normal_distribution<double> normal(0.0, 1.0);
        const double g1 = normal(gen), g2 = normal(gen);
        const double h1 = normal(gen), h2 = normal(gen);
        x[0] = g1;
        x[1] = rx * g1 + std::sqrt(1.0 - rx * rx) * g2;
        const double z1 = h1;
        const double z2 = rz * h1 + std::sqrt(1.0 - rz * rz) * h2;
        y[0] = rho1 * x[0] + std::sqrt(1.0 - rho1 * rho1) * z1;
        y[1] = rho2 * x[1] + std::sqrt(1.0 - rho2 * rho2) * z2;
    }
};

}  // namespace

TEST_CASE("trace limits: identity and signed-diagonal examples") {
    const std::size_t n = 8;
    Matrix I = Matrix::identity(n);
    TraceLimits tl = trace_limits_pair(I, I);
    CHECK(tl.w == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(tl.theta == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(tl.tau == doctest::Approx(1.0).epsilon(1e-15));

    Matrix D = Matrix::identity(n);
    D(n - 1, n - 1) = -1.0;  // diag(1, ..., 1, -1)
    tl = trace_limits_pair(I, D);
    const double expect = static_cast<double>(n - 2) / static_cast<double>(n);
    CHECK(tl.w == doctest::Approx(expect).epsilon(1e-15));
    CHECK(tl.theta == doctest::Approx(expect).epsilon(1e-15));
    CHECK(tl.tau == doctest::Approx(expect).epsilon(1e-15));
}

TEST_CASE("trace limits: random pair matches brute-force loops") {
    Matrix A = random_symmetric(7, 11);
    Matrix B = random_symmetric(7, 12);
    TraceLimits got = trace_limits_pair(A, B);
    TraceLimits want = brute_trace_limits(A, B);
    CHECK(got.w == doctest::Approx(want.w).epsilon(1e-13));
    CHECK(got.theta == doctest::Approx(want.theta).epsilon(1e-13));
    CHECK(got.tau == doctest::Approx(want.tau).epsilon(1e-13));
    // Real symmetric pair: theta and tau coincide.
    CHECK(got.theta == doctest::Approx(got.tau).epsilon(1e-13));
}

TEST_CASE("trace limits: shape and symmetry validation") {
    Matrix rect(3, 4);
    Matrix sq = Matrix::identity(4);
    CHECK_THROWS_AS(trace_limits_pair(rect, rect), spikeform::ShapeError);
    CHECK_THROWS_AS(trace_limits_pair(sq, Matrix::identity(5)), spikeform::ShapeError);

    Matrix asym = Matrix::identity(4);
    asym(0, 1) = 1e-6;  // asymmetric well beyond 1e-12
    CHECK_THROWS_AS(trace_limits_pair(asym, sq), spikeform::SymmetryError);
    CHECK_THROWS_AS(trace_limits_pair(sq, asym), spikeform::SymmetryError);
}

TEST_CASE("moment functionals: hand-computed table") {
    GaussianPairModel model;
    JointMomentTable t = model.table();
    MomentFunctionals mf = moment_functionals(t, 0, 1);
    CHECK(mf.rho_l == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(mf.rho_lp == doctest::Approx(-0.3).epsilon(1e-15));
    CHECK(mf.a2 == doctest::Approx(t.Exx(0, 1) * t.Eyy(0, 1)).epsilon(1e-15));
    CHECK(mf.a3 == doctest::Approx(t.Exy(0, 1) * t.Exy(1, 0)).epsilon(1e-15));
    // Jointly Gaussian coordinates: A1 = A2 + A3 by Isserlis.
    CHECK(mf.a1 == doctest::Approx(mf.a2 + mf.a3).epsilon(1e-12));
    CHECK_THROWS_AS(moment_functionals(t, 2, 0), spikeform::IndexError);
}

TEST_CASE("covariance blocks: quadratic form xAx with identity matrix") {
    // x = y standard normal, A = B = I_n: every entry of the 2x2 block equals
    // the classical Var((x^T x - n)/sqrt(n)) = E x^4 - 1 = 2.
    JointMomentTable t;
    t.K = 1;
    t.Exx = Matrix(1, 1);
    t.Eyy = Matrix(1, 1);
    t.Exy = Matrix(1, 1);
    t.F = Matrix(1, 1);
    t.Exx(0, 0) = t.Eyy(0, 0) = t.Exy(0, 0) = 1.0;
    t.F(0, 0) = 3.0;

    TraceLimits tl{1.0, 1.0, 1.0};
    CovBlock cb = covariance_blocks(tl, tl, tl, t);
    REQUIRE(cb.M.rows() == 2);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) CHECK(cb.M(i, j) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(cb.psd_ok);
    CHECK(cb.min_eig == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("covariance blocks: x = y Gaussian gives 2 tr(A^2)/n for any symmetric A") {
    Matrix A = random_symmetric(9, 21);
    TraceLimits tl = trace_limits_pair(A, A);

    JointMomentTable t;
    t.K = 1;
    t.Exx = Matrix(1, 1);
    t.Eyy = Matrix(1, 1);
    t.Exy = Matrix(1, 1);
    t.F = Matrix(1, 1);
    t.Exx(0, 0) = t.Eyy(0, 0) = t.Exy(0, 0) = 1.0;
    t.F(0, 0) = 3.0;

    CovBlock cb = covariance_blocks(tl, tl, tl, t);
    double tr_a2 = 0.0;
    for (std::size_t u = 0; u < A.rows(); ++u)
        for (std::size_t v = 0; v < A.rows(); ++v) tr_a2 += A(u, v) * A(v, u);
    CHECK(cb.M(0, 0) ==
          doctest::Approx(2.0 * tr_a2 / static_cast<double>(A.rows())).epsilon(1e-12));
}

TEST_CASE("covariance blocks: equal matrix sequences give four equal blocks") {
    GaussianPairModel model;
    JointMomentTable t = model.table();
    Matrix A = random_symmetric(6, 31);
    TraceLimits tl = trace_limits_pair(A, A);
    CovBlock cb = covariance_blocks(tl, tl, tl, t);
    REQUIRE(cb.M.rows() == 4);
    for (std::size_t l = 0; l < 2; ++l)
        for (std::size_t m = 0; m < 2; ++m) {
            CHECK(cb.M(l, m) == cb.M(l + 2, m + 2));
            CHECK(cb.M(l, m) == cb.M(l, m + 2));
        }
}

TEST_CASE("covariance blocks: exact symmetry and k-form consistency") {
    GaussianPairModel model;
    JointMomentTable t = model.table();
    Matrix A = random_symmetric(6, 41);
    Matrix B = random_symmetric(6, 42);
    TraceLimits tl_aa = trace_limits_pair(A, A);
    TraceLimits tl_bb = trace_limits_pair(B, B);
    TraceLimits tl_ab = trace_limits_pair(A, B);

    CovBlock two = covariance_blocks(tl_aa, tl_bb, tl_ab, t);
    std::vector<std::vector<TraceLimits>> table = {{tl_aa, tl_ab}, {tl_ab, tl_bb}};
    CovBlock k2 = k_form_covariance(table, t, 2);
    REQUIRE(two.M.rows() == k2.M.rows());
    for (std::size_t i = 0; i < two.M.rows(); ++i)
        for (std::size_t j = 0; j < two.M.cols(); ++j) {
            CHECK(two.M(i, j) == k2.M(i, j));
            CHECK(two.M(i, j) == two.M(j, i));  // bitwise symmetric by construction
        }
}

TEST_CASE("k-form covariance: three identity sequences, scalar normal coordinates") {
    JointMomentTable t;
    t.K = 1;
    t.Exx = Matrix(1, 1);
    t.Eyy = Matrix(1, 1);
    t.Exy = Matrix(1, 1);
    t.F = Matrix(1, 1);
    t.Exx(0, 0) = t.Eyy(0, 0) = t.Exy(0, 0) = 1.0;
    t.F(0, 0) = 3.0;
    TraceLimits tl{1.0, 1.0, 1.0};
    std::vector<std::vector<TraceLimits>> table(3, std::vector<TraceLimits>(3, tl));
    CovBlock cb = k_form_covariance(table, t, 3);
    REQUIRE(cb.M.rows() == 3);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) CHECK(cb.M(i, j) == doctest::Approx(2.0));
    CHECK(cb.psd_ok);
}

TEST_CASE("k-form covariance: dimension validation") {
    GaussianPairModel model;
    JointMomentTable t = model.table();
    TraceLimits tl{1.0, 1.0, 1.0};
    std::vector<std::vector<TraceLimits>> ragged = {{tl, tl}, {tl}};
    CHECK_THROWS_AS(k_form_covariance(ragged, t, 2), spikeform::DimensionError);
    std::vector<std::vector<TraceLimits>> ok = {{tl, tl}, {tl, tl}};
    CHECK_THROWS_AS(k_form_covariance(ok, t, 3), spikeform::DimensionError);

    JointMomentTable bad = t;
    bad.Exx = Matrix(1, 1);
    CHECK_THROWS_AS(k_form_covariance(ok, bad, 2), spikeform::DimensionError);

    JointMomentTable asym = model.table();
    asym.F(0, 1) += 1e-3;
    CHECK_THROWS_AS(k_form_covariance(ok, asym, 2), spikeform::SymmetryError);
}

TEST_CASE("covariance blocks: coordinate permutation equivariance") {
    GaussianPairModel model;
    JointMomentTable t = model.table();
    // Swap the two coordinates in the table.
    JointMomentTable s = t;
    for (std::size_t l = 0; l < 2; ++l)
        for (std::size_t m = 0; m < 2; ++m) {
            s.Exx(l, m) = t.Exx(1 - l, 1 - m);
            s.Eyy(l, m) = t.Eyy(1 - l, 1 - m);
            s.Exy(l, m) = t.Exy(1 - l, 1 - m);
            s.F(l, m) = t.F(1 - l, 1 - m);
        }
    Matrix A = random_symmetric(6, 51);
    Matrix B = random_symmetric(6, 52);
    TraceLimits tl_aa = trace_limits_pair(A, A);
    TraceLimits tl_bb = trace_limits_pair(B, B);
    TraceLimits tl_ab = trace_limits_pair(A, B);
    CovBlock orig = covariance_blocks(tl_aa, tl_bb, tl_ab, t);
    CovBlock perm = covariance_blocks(tl_aa, tl_bb, tl_ab, s);
    // Block structure: index (block * 2 + l) maps to (block * 2 + (1 - l)).
    for (std::size_t bi = 0; bi < 2; ++bi)
        for (std::size_t bj = 0; bj < 2; ++bj)
            for (std::size_t l = 0; l < 2; ++l)
                for (std::size_t m = 0; m < 2; ++m)
                    CHECK(orig.M(bi * 2 + l, bj * 2 + m) ==
                          doctest::Approx(perm.M(bi * 2 + (1 - l), bj * 2 + (1 - m)))
                              .epsilon(1e-15));
}

TEST_CASE("covariance blocks: PSD diagnostic flags an inconsistent moment table") {
    JointMomentTable t;
    t.K = 1;
    t.Exx = Matrix(1, 1);
    t.Eyy = Matrix(1, 1);
    t.Exy = Matrix(1, 1);
    t.F = Matrix(1, 1);
    t.Exx(0, 0) = t.Eyy(0, 0) = t.Exy(0, 0) = 1.0;
    t.F(0, 0) = -4.0;  // impossible joint moment: forces a negative variance
    TraceLimits tl{1.0, 1.0, 1.0};
    CovBlock cb = covariance_blocks(tl, tl, tl, t);
    CHECK_FALSE(cb.psd_ok);
    CHECK(cb.min_eig < -1e-10);
}

TEST_CASE("complex block entry: reduces to the real assembly and accepts complex input") {
    TraceLimits tl{0.4, 1.3, 1.1};
    const std::complex<double> r = block_entry_complex(tl, {2.0, 0.0}, {0.7, 0.0}, {0.5, 0.0});
    CHECK(r.imag() == 0.0);
    CHECK(r.real() == doctest::Approx(0.4 * 2.0 + (1.1 - 0.4) * 0.7 + (1.3 - 0.4) * 0.5));

    const std::complex<double> a1{1.0, 2.0}, a2{0.0, -1.0}, a3{0.5, 0.25};
    const std::complex<double> z = block_entry_complex(tl, a1, a2, a3);
    const std::complex<double> want =
        tl.w * a1 + (tl.tau - tl.w) * a2 + (tl.theta - tl.w) * a3;
    CHECK(std::abs(z - want) < 1e-15);
}

// ---------------------------------------------------------------------------
// Monte Carlo: for fixed matrices and exact moment tables, the assembled block
// is the exact finite-n covariance of the centered scaled forms, so the
// empirical covariance must land within a few standard errors.
// ---------------------------------------------------------------------------

TEST_CASE("Monte Carlo: joint covariance of two forms in two matrix sequences") {
    const std::size_t n = 60;
    const int R = 6000;
    GaussianPairModel model;
    JointMomentTable t = model.table();
    Matrix A = random_symmetric(n, 71);
    Matrix B = random_symmetric(n, 72);
    CovBlock cb = covariance_blocks(trace_limits_pair(A, A), trace_limits_pair(B, B),
                                    trace_limits_pair(A, B), t);

    std::mt19937_64 gen(20260816u);
    const double rho[2] = {model.rho1, model.rho2};
    double tr_a = 0.0, tr_b = 0.0;
    for (std::size_t u = 0; u < n; ++u) {
        tr_a += A(u, u);
        tr_b += B(u, u);
    }

    // samples[r] = (U_A(1), U_A(2), U_B(1), U_B(2))
    std::vector<std::array<double, 4>> samples(static_cast<std::size_t>(R));
    std::vector<double> x1(n), x2(n), y1(n), y2(n), ax(n);
    for (int r = 0; r < R; ++r) {
        for (std::size_t u = 0; u < n; ++u) {
            double xs[2], ys[2];
            model.draw(gen, xs, ys);
            x1[u] = xs[0];
            x2[u] = xs[1];
            y1[u] = ys[0];
            y2[u] = ys[1];
        }
        auto form = [&](const Matrix& M, const std::vector<double>& x,
                        const std::vector<double>& y, double rho_l, double tr_m) {
            spikeform::la::matvec(M, y.data(), ax.data());
            double s = 0.0;
            for (std::size_t u = 0; u < n; ++u) s += x[u] * ax[u];
            return (s - rho_l * tr_m) / std::sqrt(static_cast<double>(n));
        };
        samples[static_cast<std::size_t>(r)] = {
            form(A, x1, y1, rho[0], tr_a), form(A, x2, y2, rho[1], tr_a),
            form(B, x1, y1, rho[0], tr_b), form(B, x2, y2, rho[1], tr_b)};
    }

    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = i; j < 4; ++j) {
            double mean_i = 0.0, mean_j = 0.0;
            for (const auto& s : samples) {
                mean_i += s[i];
                mean_j += s[j];
            }
            mean_i /= R;
            mean_j /= R;
            double cov = 0.0, var_prod = 0.0;
            for (const auto& s : samples) {
                const double p = (s[i] - mean_i) * (s[j] - mean_j);
                cov += p;
                var_prod += p * p;
            }
            cov /= R;
            var_prod = var_prod / R - cov * cov;
            const double se = std::sqrt(std::max(var_prod, 1e-30) / R);
            INFO("entry (", i, ",", j, "): emp ", cov, " theory ", cb.M(i, j), " se ", se);
            CHECK(std::abs(cov - cb.M(i, j)) < 5.0 * se);
        }
    }
}

TEST_CASE("Monte Carlo: non-Gaussian quadratic form variance (uniform entries)") {
    // x = y with iid uniform(-sqrt(3), sqrt(3)) entries: variance 1, fourth
    // moment 9/5.  Checks the A1 functional away from the Gaussian case.
    const std::size_t n = 50;
    const int R = 8000;
    const double nu4 = 9.0 / 5.0;
    Matrix A = random_symmetric(n, 81);
    TraceLimits tl = trace_limits_pair(A, A);

    JointMomentTable t;
    t.K = 1;
    t.Exx = Matrix(1, 1);
    t.Eyy = Matrix(1, 1);
    t.Exy = Matrix(1, 1);
    t.F = Matrix(1, 1);
    t.Exx(0, 0) = t.Eyy(0, 0) = t.Exy(0, 0) = 1.0;
    t.F(0, 0) = nu4;
    CovBlock cb = covariance_blocks(tl, tl, tl, t);
    const double theory = cb.M(0, 0);

    std::mt19937_64 gen(7u);
    std::uniform_real_distribution<double> unif(-std::sqrt(3.0), std::sqrt(3.0));
    double tr_a = 0.0;
    for (std::size_t u = 0; u < n; ++u) tr_a += A(u, u);

    std::vector<double> x(n), ax(n), us(static_cast<std::size_t>(R));
    for (int r = 0; r < R; ++r) {
        for (std::size_t u = 0; u < n; ++u) x[u] = unif(gen);
        spikeform::la::matvec(A, x.data(), ax.data());
        double s = 0.0;
        for (std::size_t u = 0; u < n; ++u) s += x[u] * ax[u];
        us[static_cast<std::size_t>(r)] = (s - tr_a) / std::sqrt(static_cast<double>(n));
    }
    double mean = 0.0;
    for (double v : us) mean += v;
    mean /= R;
    double var = 0.0, m4 = 0.0;
    for (double v : us) {
        const double d = (v - mean) * (v - mean);
        var += d;
        m4 += d * d;
    }
    var /= R;
    m4 /= R;
    const double se = std::sqrt(std::max(m4 - var * var, 1e-30) / R);
    INFO("emp var ", var, " theory ", theory, " se ", se);
    CHECK(std::abs(var - theory) < 5.0 * se);
}

// ---------------------------------------------------------------------------
// Quadratic forms in powers of a sample covariance matrix
// ---------------------------------------------------------------------------

TEST_CASE("f_moment: scaled spectral moments") {
    const double y = 2.0 / 3.0;
    CHECK(f_moment(1, y) == doctest::Approx(frozen::kF1_y23).epsilon(1e-14));
    CHECK(f_moment(2, y) == doctest::Approx(frozen::kF2_y23).epsilon(1e-12));
    CHECK(f_moment(3, 0.5) ==
          doctest::Approx(0.5 * oracle::mp_moment_narayana(3, 0.5)).epsilon(1e-12));
    CHECK_THROWS_AS(f_moment(-1, y), spikeform::DomainError);
    CHECK_THROWS_AS(f_moment(2, 1.5), spikeform::DomainError);
}

TEST_CASE("quadform covariance: Gaussian entries, one power") {
    const double y = 2.0 / 3.0;
    CovBlock cb = quadform_covariance(1, y, 3.0);
    REQUIRE(cb.M.rows() == 2);
    // (nu4 - 1)/2 = 1 for Gaussian entries, so the f^2 terms cancel.
    CHECK(cb.M(0, 0) == doctest::Approx(frozen::kF2_y23).epsilon(1e-12));
    CHECK(cb.M(0, 1) == doctest::Approx(frozen::kF1_y23).epsilon(1e-12));
    CHECK(cb.M(1, 0) == doctest::Approx(frozen::kF1_y23).epsilon(1e-12));
    CHECK(cb.M(1, 1) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(cb.psd_ok);
}

TEST_CASE("quadform covariance: general entries against the direct formula") {
    const double y = 0.5;
    const double nu4 = 2.2;
    const int i = 3;
    CovBlock cb = quadform_covariance(i, y, nu4);
    REQUIRE(cb.M.rows() == 4);
    auto f = [&](int m) { return y * oracle::mp_moment_narayana(m, y); };
    const double he = 0.5 * (nu4 - 1.0);
    for (int m = 1; m <= i; ++m) {
        for (int l = 1; l <= i; ++l) {
            const double want = he * f(m) * f(l) + f(m + l) - f(m) * f(l);
            CHECK(cb.M(static_cast<std::size_t>(m - 1), static_cast<std::size_t>(l - 1)) ==
                  doctest::Approx(want).epsilon(1e-12));
        }
        CHECK(cb.M(static_cast<std::size_t>(m - 1), 3) == doctest::Approx(he * f(m)).epsilon(1e-12));
    }
    CHECK(cb.M(3, 3) == doctest::Approx(he).epsilon(1e-15));
    CHECK(cb.psd_ok);
    CHECK(cb.M.max_asymmetry() == 0.0);
}

TEST_CASE("quadform covariance: domain validation") {
    CHECK_THROWS_AS(quadform_covariance(0, 0.5, 3.0), spikeform::DomainError);
    CHECK_THROWS_AS(quadform_covariance(2, 0.5, 0.5), spikeform::DomainError);
    CHECK_THROWS_AS(quadform_covariance(2, 1.5, 3.0), spikeform::DomainError);
}
