// Covariance assembly for centered sesquilinear forms.
#include "spikeform/sesquilinear.hpp"

#include <cmath>
#include <string>

#include "spikeform/errors.hpp"
#include "spikeform/mp_core.hpp"

namespace spikeform::sesq {

namespace {

constexpr double kHermitianTol = 1e-12;
constexpr double kPsdFloor = -1e-10;

void require_symmetric(const la::Matrix& A, const char* name) {
    if (A.rows() != A.cols())
        throw ShapeError(std::string(name) + ": matrix must be square");
    const double scale = std::max(1.0, A.max_abs());
    if (A.max_asymmetry() > kHermitianTol * scale)
        throw SymmetryError(std::string(name) + ": matrix is not symmetric within 1e-12");
}

void validate_table(const JointMomentTable& m) {
    if (m.K == 0) throw DimensionError("joint moment table: K must be positive");
    auto check_dims = [&](const la::Matrix& t, const char* name) {
        if (t.rows() != m.K || t.cols() != m.K)
            throw DimensionError(std::string("joint moment table: ") + name + " must be K x K");
    };
    check_dims(m.Exx, "Exx");
    check_dims(m.Eyy, "Eyy");
    check_dims(m.Exy, "Exy");
    check_dims(m.F, "F");
    // Exx, Eyy, F are moment tables of symmetric index pairs.
    const double tol = 1e-12;
    auto check_sym = [&](const la::Matrix& t, const char* name) {
        if (t.max_asymmetry() > tol * std::max(1.0, t.max_abs()))
            throw SymmetryError(std::string("joint moment table: ") + name + " must be symmetric");
    };
    check_sym(m.Exx, "Exx");
    check_sym(m.Eyy, "Eyy");
    check_sym(m.F, "F");
}

// w A1 + (tau - w) A2 + (theta - w) A3 for one coordinate pair.
double block_entry(const TraceLimits& tl, const JointMomentTable& m, std::size_t l,
                   std::size_t lp) {
    const MomentFunctionals mf = moment_functionals(m, l, lp);
    return tl.w * mf.a1 + (tl.tau - tl.w) * mf.a2 + (tl.theta - tl.w) * mf.a3;
}

void finish_diagnostics(CovBlock& out) {
    // Exact symmetry by construction is asserted by tests; the PSD check is a
    // diagnostic (sampling the moment tables from data can leave the
    // assembled matrix slightly indefinite).
    la::EigenResult eig = la::jacobi_eigen(out.M);
    out.min_eig = eig.values.empty() ? 0.0 : eig.values.back();
    out.psd_ok = out.min_eig >= kPsdFloor;
}

}  // namespace

MomentFunctionals moment_functionals(const JointMomentTable& m, std::size_t l, std::size_t lp) {
    if (l >= m.K || lp >= m.K)
        throw IndexError("moment_functionals: coordinate index out of range");
    MomentFunctionals mf;
    mf.rho_l = m.Exy(l, l);
    mf.rho_lp = m.Exy(lp, lp);
    mf.a1 = m.F(l, lp) - mf.rho_l * mf.rho_lp;
    mf.a2 = m.Exx(l, lp) * m.Eyy(l, lp);
    mf.a3 = m.Exy(l, lp) * m.Exy(lp, l);
    return mf;
}

TraceLimits trace_limits_pair(const la::Matrix& A, const la::Matrix& B) {
    require_symmetric(A, "trace_limits_pair: A");
    require_symmetric(B, "trace_limits_pair: B");
    if (A.rows() != B.rows())
        throw ShapeError("trace_limits_pair: A and B must have the same dimension");
    const std::size_t n = A.rows();
    if (n == 0) throw ShapeError("trace_limits_pair: empty matrices");

    double w = 0.0;
    for (std::size_t u = 0; u < n; ++u) w += A(u, u) * B(u, u);

    // Real symmetric pair: tr[A B^*] = tr[A B] entrywise.
    double theta = 0.0;
    double tau = 0.0;
    for (std::size_t u = 0; u < n; ++u) {
        const double* arow = A.row(u);
        const double* brow = B.row(u);
        for (std::size_t v = 0; v < n; ++v) {
            theta += arow[v] * brow[v];  // A_uv * conj(B_uv)
            tau += arow[v] * B(v, u);    // A_uv * B_vu
        }
    }
    const double inv_n = 1.0 / static_cast<double>(n);
    return TraceLimits{w * inv_n, theta * inv_n, tau * inv_n};
}

CovBlock covariance_blocks(const TraceLimits& tl_AA, const TraceLimits& tl_BB,
                           const TraceLimits& tl_AB, const JointMomentTable& moments) {
    std::vector<std::vector<TraceLimits>> tl = {{tl_AA, tl_AB}, {tl_AB, tl_BB}};
    return k_form_covariance(tl, moments, 2);
}

CovBlock k_form_covariance(const std::vector<std::vector<TraceLimits>>& tl,
                           const JointMomentTable& moments, std::size_t k) {
    if (k == 0) throw DimensionError("k_form_covariance: k must be positive");
    if (tl.size() != k)
        throw DimensionError("k_form_covariance: trace-limit table must be k x k");
    for (const auto& row : tl)
        if (row.size() != k)
            throw DimensionError("k_form_covariance: trace-limit table must be k x k");
    validate_table(moments);
    const std::size_t K = moments.K;

    // Entries are assembled for i <= j only and mirrored, so the result is
    // exactly symmetric even when the tl table carries asymmetric noise.
    CovBlock out;
    out.M = la::Matrix(K * k, K * k);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i; j < k; ++j) {
            for (std::size_t l = 0; l < K; ++l) {
                for (std::size_t lp = 0; lp < K; ++lp) {
                    const double value = block_entry(tl[i][j], moments, l, lp);
                    out.M(i * K + l, j * K + lp) = value;
                    out.M(j * K + lp, i * K + l) = value;
                }
            }
        }
    }
    finish_diagnostics(out);
    return out;
}

std::complex<double> block_entry_complex(const TraceLimits& tl, std::complex<double> a1,
                                         std::complex<double> a2, std::complex<double> a3) {
    return tl.w * a1 + (tl.tau - tl.w) * a2 + (tl.theta - tl.w) * a3;
}

double f_moment(int m, double y) {
    if (m < 0) throw DomainError("f_moment: order must be nonnegative");
    return y * mp::mp_moment(m, y);
}

CovBlock quadform_covariance(int i, double y, double nu4) {
    if (i < 1) throw DomainError("quadform_covariance: need at least one power");
    if (nu4 < 1.0)
        throw DomainError("quadform_covariance: fourth moment below the unit-variance bound");
    // y is validated inside f_moment / mp_moment.
    const double half_excess = 0.5 * (nu4 - 1.0);
    std::vector<double> f(static_cast<std::size_t>(2 * i + 1));
    for (int m = 0; m <= 2 * i; ++m) f[static_cast<std::size_t>(m)] = f_moment(m, y);

    const std::size_t d = static_cast<std::size_t>(i) + 1;
    CovBlock out;
    out.M = la::Matrix(d, d);
    for (int m = 1; m <= i; ++m) {
        for (int l = 1; l <= i; ++l) {
            const double fm = f[static_cast<std::size_t>(m)];
            const double fl = f[static_cast<std::size_t>(l)];
            out.M(static_cast<std::size_t>(m - 1), static_cast<std::size_t>(l - 1)) =
                half_excess * fm * fl + f[static_cast<std::size_t>(m + l)] - fm * fl;
        }
        // Covariance with the norm coordinate s^T s - 1.
        out.M(static_cast<std::size_t>(m - 1), d - 1) =
            half_excess * f[static_cast<std::size_t>(m)];
        out.M(d - 1, static_cast<std::size_t>(m - 1)) =
            half_excess * f[static_cast<std::size_t>(m)];
    }
    out.M(d - 1, d - 1) = half_excess;
    finish_diagnostics(out);
    return out;
}

}  // namespace spikeform::sesq
