// Spiked-population asymptotics: theta/w limits, eigenvalue covariances, the
// joint eigenvector/eigenvalue law, and the paired-form limits behind it.
#include "spikeform/spiked_theory.hpp"

#include <cmath>
#include <cstddef>
#include <string>

#include "spikeform/errors.hpp"
#include "spikeform/mp_core.hpp"
#include "spikeform/sesquilinear.hpp"

namespace spikeform::spiked {

namespace {

struct Sqt {
    double s, q, t;
    double lambda;  // phi(a)
    double N;       // 1 + a y m3(phi(a)) = s t / q
};

Sqt sqt(double a, double y) {
    if (a <= 0.0) throw PhaseError("spike must be a positive population eigenvalue");
    if (mp::spike_in_bulk(a, y))
        throw PhaseError("spike lies inside the bulk interval; no detached eigenvalue");
    Sqt r;
    r.s = a - 1.0;
    r.q = r.s * r.s - y;
    r.t = a - 1.0 + y;
    r.lambda = mp::phase_phi(a, y);
    r.N = r.s * r.t / r.q;
    return r;
}

void check_model(const SpikeModel& model) {
    if (model.M == 0) throw DimensionError("spike model: M must be positive");
    if (model.Sigma.rows() != model.M || model.Sigma.cols() != model.M)
        throw DimensionError("spike model: Sigma must be M x M");
    const std::size_t m4 = model.M * model.M * model.M * model.M;
    if (model.E4.size() != m4)
        throw DimensionError("spike model: fourth-moment tensor must have M^4 entries");
}

void check_index(const SpikeModel& model, std::size_t i, const char* what) {
    if (i >= model.M) throw IndexError(std::string(what) + ": spike index out of range");
}

// theta/w for the (m, mp) spike pair of a model, dispatching on m == mp.
ThetaW pair_theta_w(const SpikeModel& model, double y, std::size_t m, std::size_t mp) {
    const double am = model.spike(m);
    if (m == mp) return theta_w_single(am, y);
    return theta_w_cross(am, model.spike(mp), y);
}

// The eigenvalue-level laws read Sigma(i,i) as the i-th spike, which is only
// meaningful with the spike block in its eigenbasis.
void require_eigenbasis(const SpikeModel& model, const char* what) {
    double off = 0.0, diag = 0.0;
    for (std::size_t i = 0; i < model.M; ++i) {
        diag = std::max(diag, std::abs(model.Sigma(i, i)));
        for (std::size_t j = 0; j < model.M; ++j)
            if (i != j) off = std::max(off, std::abs(model.Sigma(i, j)));
    }
    if (off > 1e-12 * std::max(1.0, diag))
        throw DomainError(std::string(what) +
                          ": spike covariance must be diagonal (spike eigenbasis)");
}

}  // namespace

// ----------------------------------------------------------------------
// theta / w
// ----------------------------------------------------------------------

ThetaW theta_w_single(double a, double y) {
    const Sqt r = sqt(a, y);
    return ThetaW{r.t * r.t / r.q, r.t * r.t / (r.s * r.s)};
}

ThetaW theta_w_single_integral(double a, double y) {
    const Sqt r = sqt(a, y);
    const double m1 = mp::mp_integral(mp::Kind::M1, r.lambda, y);
    const double m2 = mp::mp_integral(mp::Kind::M2, r.lambda, y);
    const double alpha = y * (1.0 + m1) / (r.lambda - y * (1.0 + m1));
    ThetaW out;
    out.theta = 1.0 + 2.0 * y * m1 + y * m2;
    out.w = 1.0 + 2.0 * y * m1 + alpha * alpha;
    return out;
}

ThetaW theta_w_cross(double a_i, double a_j, double y) {
    if (std::abs(a_i - a_j) < 1e-9)
        throw DegenerateSpikesError("cross limits need two distinct spikes");
    const Sqt ri = sqt(a_i, y);
    const Sqt rj = sqt(a_j, y);
    const double ss = ri.s * rj.s;
    const double tt = ri.t * rj.t;
    return ThetaW{tt / (ss - y), tt / ss};
}

ThetaW theta_w_cross_integral(double a_i, double a_j, double y) {
    if (std::abs(a_i - a_j) < 1e-9)
        throw DegenerateSpikesError("cross limits need two distinct spikes");
    const Sqt ri = sqt(a_i, y);
    const Sqt rj = sqt(a_j, y);
    const double li = ri.lambda, lj = rj.lambda;
    const double m1i = mp::mp_integral(mp::Kind::M1, li, y);
    const double m1j = mp::mp_integral(mp::Kind::M1, lj, y);
    ThetaW out;
    out.theta = 1.0 + y * m1i + y * m1j +
                y * (lj / (li - lj) * m1j + li / (lj - li) * m1i);
    out.w = 1.0 + y * m1i + y * m1j +
            y * y * (1.0 + m1i) * (1.0 + m1j) /
                ((li - y * (1.0 + m1i)) * (lj - y * (1.0 + m1j)));
    return out;
}

// ----------------------------------------------------------------------
// SpikeModel
// ----------------------------------------------------------------------

double SpikeModel::e4(std::size_t i, std::size_t j, std::size_t k, std::size_t l) const {
    if (i >= M || j >= M || k >= M || l >= M)
        throw IndexError("spike model: fourth-moment index out of range");
    return E4[((i * M + j) * M + k) * M + l];
}

double SpikeModel::spike(std::size_t i) const {
    if (i >= M) throw IndexError("spike model: spike index out of range");
    return Sigma(i, i);
}

SpikeModel gaussian_model(const std::vector<double>& spikes) {
    const std::size_t M = spikes.size();
    if (M == 0) throw DimensionError("gaussian_model: need at least one spike");
    SpikeModel model;
    model.M = M;
    model.Sigma = la::Matrix(M, M);
    for (std::size_t i = 0; i < M; ++i) model.Sigma(i, i) = spikes[i];
    model.E4.assign(M * M * M * M, 0.0);
    // Isserlis: E[x_i x_j x_k x_l] = S_ij S_kl + S_ik S_jl + S_il S_jk.
    for (std::size_t i = 0; i < M; ++i)
        for (std::size_t j = 0; j < M; ++j)
            for (std::size_t k = 0; k < M; ++k)
                for (std::size_t l = 0; l < M; ++l)
                    model.E4[((i * M + j) * M + k) * M + l] =
                        model.Sigma(i, j) * model.Sigma(k, l) +
                        model.Sigma(i, k) * model.Sigma(j, l) +
                        model.Sigma(i, l) * model.Sigma(j, k);
    return model;
}

SpikeModel independent_model(const std::vector<double>& spikes,
                             const std::vector<double>& fourth) {
    const std::size_t M = spikes.size();
    if (M == 0) throw DimensionError("independent_model: need at least one spike");
    if (fourth.size() != M)
        throw DimensionError("independent_model: need one fourth moment per spike");
    for (std::size_t i = 0; i < M; ++i) {
        if (spikes[i] <= 0.0) throw DomainError("independent_model: variances must be positive");
        if (fourth[i] < spikes[i] * spikes[i])
            throw DomainError("independent_model: E[xi^4] below the variance-squared bound");
    }
    SpikeModel model;
    model.M = M;
    model.Sigma = la::Matrix(M, M);
    for (std::size_t i = 0; i < M; ++i) model.Sigma(i, i) = spikes[i];
    model.E4.assign(M * M * M * M, 0.0);
    // Independent mean-zero coordinates: nonzero only when indices pair up.
    for (std::size_t i = 0; i < M; ++i)
        for (std::size_t j = 0; j < M; ++j)
            for (std::size_t k = 0; k < M; ++k)
                for (std::size_t l = 0; l < M; ++l) {
                    double v = 0.0;
                    if (i == j && j == k && k == l) {
                        v = fourth[i];
                    } else if (i == j && k == l && i != k) {
                        v = spikes[i] * spikes[k];
                    } else if (i == k && j == l && i != j) {
                        v = spikes[i] * spikes[j];
                    } else if (i == l && j == k && i != j) {
                        v = spikes[i] * spikes[j];
                    }
                    model.E4[((i * M + j) * M + k) * M + l] = v;
                }
    return model;
}

SpikeModel ellipse_model(double A, double B) {
    if (A <= 0.0 || B <= 0.0) throw DomainError("ellipse_model: semi-axes must be positive");
    SpikeModel model;
    model.M = 2;
    model.Sigma = la::Matrix(2, 2);
    model.Sigma(0, 0) = A * A / 4.0;
    model.Sigma(1, 1) = B * B / 4.0;
    model.E4.assign(16, 0.0);
    auto set = [&](std::size_t i, std::size_t j, std::size_t k, std::size_t l, double v) {
        model.E4[((i * 2 + j) * 2 + k) * 2 + l] = v;
    };
    set(0, 0, 0, 0, A * A * A * A / 8.0);
    set(1, 1, 1, 1, B * B * B * B / 8.0);
    const double cross = A * A * B * B / 24.0;  // E[X^2 Y^2]
    // all (2,2) index patterns across the two coordinates
    set(0, 0, 1, 1, cross);
    set(1, 1, 0, 0, cross);
    set(0, 1, 0, 1, cross);
    set(0, 1, 1, 0, cross);
    set(1, 0, 0, 1, cross);
    set(1, 0, 1, 0, cross);
    return model;
}

// ----------------------------------------------------------------------
// Eigenvalue-level asymptotics
// ----------------------------------------------------------------------

double cross_block_cov(const SpikeModel& model, double y, std::size_t m, std::size_t mp,
                       std::size_t i, std::size_t j, std::size_t ip, std::size_t jp) {
    check_model(model);
    check_index(model, m, "cross_block_cov");
    check_index(model, mp, "cross_block_cov");
    check_index(model, i, "cross_block_cov");
    check_index(model, j, "cross_block_cov");
    check_index(model, ip, "cross_block_cov");
    check_index(model, jp, "cross_block_cov");
    const ThetaW tw = pair_theta_w(model, y, m, mp);
    const double tmw = tw.theta - tw.w;
    return tw.w * (model.e4(i, j, ip, jp) - model.Sigma(i, j) * model.Sigma(ip, jp)) +
           tmw * model.Sigma(i, jp) * model.Sigma(ip, j) +
           tmw * model.Sigma(i, ip) * model.Sigma(j, jp);
}

double eigen_variance(const SpikeModel& model, double y, std::size_t i) {
    return eigen_joint_cov(model, y, i, i);
}

double eigen_joint_cov(const SpikeModel& model, double y, std::size_t i, std::size_t j) {
    check_model(model);
    check_index(model, i, "eigen_joint_cov");
    check_index(model, j, "eigen_joint_cov");
    require_eigenbasis(model, "eigen_joint_cov");
    const double cov_rr = cross_block_cov(model, y, i, j, i, i, j, j);
    const double ni = sqt(model.spike(i), y).N;
    const double nj = (i == j) ? ni : sqt(model.spike(j), y).N;
    return cov_rr / (ni * nj);
}

bool independence_condition(const SpikeModel& model, std::size_t i, std::size_t j) {
    check_model(model);
    check_index(model, i, "independence_condition");
    check_index(model, j, "independence_condition");
    if (i == j) throw IndexError("independence_condition: need two distinct spike indices");
    const double scale = std::max(1.0, std::abs(model.Sigma(i, i) * model.Sigma(j, j)));
    const double cov_xi = model.Sigma(i, j);
    const double cov_sq = model.e4(i, i, j, j) - model.Sigma(i, i) * model.Sigma(j, j);
    return std::abs(cov_xi) <= 1e-12 * scale && std::abs(cov_sq) <= 1e-12 * scale;
}

// ----------------------------------------------------------------------
// Eigenvector / eigenvalue joint law
// ----------------------------------------------------------------------

EigvecJoint eigvec_joint(double a, double y, double nu4) {
    const Sqt r = sqt(a, y);
    const double s = r.s, q = r.q, t = r.t;
    const double s2 = s * s, t2 = t * t;
    const double a2 = a * a;
    EigvecJoint out;
    out.mean_proj = q / (s * t);
    const double c11 = a2 * y * y * (a2 + y - 1.0) * (a2 + y - 1.0) / (s2 * s2 * t2 * t2);
    const double g11 = 2.0 * a2 * y * (t2 + y * a2) / (q * t2 * t2);
    out.v11 = c11 * nu4 + g11;
    const double c12 = y * a2 * (a2 - 1.0 + y) * q / (s2 * s2 * t2);
    const double g12 = 2.0 * a2 * a * y / (s * t2);
    out.v12 = c12 * nu4 + g12;
    out.v12_alt = c12 / (s2 * t2) * nu4 + g12;
    const double c22 = a2 * q * q / (s2 * s2);
    const double g22 = 2.0 * a2 * q / s2;
    out.v22 = c22 * nu4 + g22;
    return out;
}

// ----------------------------------------------------------------------
// Paired-form joint limits
// ----------------------------------------------------------------------

AbJoint abjoint_quantities(double a, double y) {
    const Sqt r = sqt(a, y);
    const double s = r.s, q = r.q, t = r.t;
    AbJoint out;
    out.lambda = r.lambda;
    out.alpha = y / s;
    out.beta = y / q;
    out.w1 = t * t / (s * s);
    out.w2 = y * y / (q * q);
    out.w3 = y * t / (s * q);
    out.tau1 = t * t / q;
    out.tau2 = y * s * s * s * s * (t * t + a * a * y) / (q * q * q * q * q);
    out.tau3 = a * y * t * s * s / (q * q * q);
    return out;
}

AbJoint abjoint_quantities_integral(double a, double y) {
    const Sqt r = sqt(a, y);
    const mp::MPIntegrals mi = mp::mp_integrals_all(r.lambda, y);
    const double m0 = mi.m[0], m1 = mi.m[1], m2 = mi.m[2], m3 = mi.m[3];
    const double m4 = mi.m[4], m6 = mi.m[6], m7 = mi.m[7];
    AbJoint out;
    out.lambda = r.lambda;
    out.alpha = y * (1.0 + m1) / (r.lambda - y * (1.0 + m1));
    out.beta = y * m4 / ((1.0 - y * m0) * (1.0 - y * m0));
    out.w1 = 1.0 + out.alpha * out.alpha + 2.0 * y * m1;
    out.w2 = out.beta * out.beta;
    out.w3 = out.alpha * out.beta + y * m3;
    out.tau1 = 1.0 + 2.0 * y * m1 + y * m2;
    out.tau2 = y * m6;
    out.tau3 = y * (m3 + m7);
    return out;
}

la::Matrix abjoint_blocks(double a, double y, double nu4) {
    const AbJoint j = abjoint_quantities(a, y);
    // Assemble through the generic covariance machinery: x = y = xi with
    // variance a and E[xi^4] = a^2 (3 + nu4).
    sesq::JointMomentTable table;
    table.K = 1;
    table.Exx = la::Matrix(1, 1);
    table.Eyy = la::Matrix(1, 1);
    table.Exy = la::Matrix(1, 1);
    table.F = la::Matrix(1, 1);
    table.Exx(0, 0) = table.Eyy(0, 0) = table.Exy(0, 0) = a;
    table.F(0, 0) = a * a * (3.0 + nu4);
    const sesq::TraceLimits tl_aa{j.w1, j.tau1, j.tau1};
    const sesq::TraceLimits tl_bb{j.w2, j.tau2, j.tau2};
    const sesq::TraceLimits tl_ab{j.w3, j.tau3, j.tau3};
    return sesq::covariance_blocks(tl_aa, tl_bb, tl_ab, table).M;
}

}  // namespace spikeform::spiked
