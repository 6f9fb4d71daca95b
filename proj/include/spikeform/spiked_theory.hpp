// Asymptotic laws for a spiked population covariance: take a population
// covariance diag(Sigma_M, I_p) whose M spike eigenvalues a_i lie outside
// [1 - sqrt(y), 1 + sqrt(y)], with p/n -> y in (0, 1).  Each spike sends a
// sample eigenvalue to lambda_i = phi(a_i) = a_i + y a_i / (a_i - 1), and the
// fluctuations of the sample eigenvalues and of the spike coordinates of the
// sample eigenvectors are jointly Gaussian with covariances assembled here.
//
// Conventions used throughout (s, q, t shorthand for a spike a):
//   s = a - 1,  q = s^2 - y,  t = a - 1 + y,  N = 1 + a y m3 = s t / q.
// Every limit has two independent routes: a closed rational in (s, q, t) and
// an integral route through the m0..m7 spectral integrals; tests require the
// two to agree to 1e-10 across a spike/ratio grid.
#pragma once

#include <cstddef>
#include <vector>

#include "spikeform/linalg.hpp"

namespace spikeform::spiked {

// ----------------------------------------------------------------------
// theta / w limits for quadratic forms in the resolvent at one or two
// sample-spike locations
// ----------------------------------------------------------------------

struct ThetaW {
    double theta;
    double w;
};

// Single spike: theta = t^2 / q, w = t^2 / s^2.
ThetaW theta_w_single(double a, double y);
// Same limits through the spectral integrals (theta = 1 + 2 y m1 + y m2,
// w = 1 + 2 y m1 + alpha^2 with alpha = y (1 + m1) / (lambda - y (1 + m1))).
ThetaW theta_w_single_integral(double a, double y);

// Two distinct spikes: theta = t_i t_j / (s_i s_j - y), w = t_i t_j / (s_i s_j).
// Throws DegenerateSpikesError when |a_i - a_j| < 1e-9.
ThetaW theta_w_cross(double a_i, double a_j, double y);
// Integral route via the partial-fraction two-point formula.
ThetaW theta_w_cross_integral(double a_i, double a_j, double y);

// ----------------------------------------------------------------------
// Spike coordinate model: covariance and fourth moments of the population
// coordinate vector xi on the spike block (in the spike eigenbasis for the
// eigenvalue-level laws).
// ----------------------------------------------------------------------

struct SpikeModel {
    std::size_t M = 0;
    la::Matrix Sigma;        // M x M covariance of xi
    std::vector<double> E4;  // flat fourth-moment tensor E[xi_i xi_j xi_k xi_l]

    double e4(std::size_t i, std::size_t j, std::size_t k, std::size_t l) const;
    double spike(std::size_t i) const;  // Sigma(i, i)
};

// Independent Gaussian coordinates with variances `spikes` (Isserlis fourth
// moments).
SpikeModel gaussian_model(const std::vector<double>& spikes);

// Independent coordinates with variances `spikes` and raw fourth moments
// E[xi_i^4] = `fourth[i]`.
SpikeModel independent_model(const std::vector<double>& spikes,
                             const std::vector<double>& fourth);

// Uniform distribution on the solid ellipse x^2/A^2 + y^2/B^2 <= 1:
// Sigma = diag(A^2/4, B^2/4), E[X^4] = A^4/8, E[X^2 Y^2] = A^2 B^2 / 24.
SpikeModel ellipse_model(double A, double B);

// ----------------------------------------------------------------------
// Eigenvalue-level asymptotics
// ----------------------------------------------------------------------

// Covariance of the limiting Gaussian matrix entries,
//   cov( R(lambda_m)(i, j), R(lambda_mp)(ip, jp) )
//     = w(m, mp) { E[xi_i xi_j xi_ip xi_jp] - Sigma_ij Sigma_ipjp }
//       + (theta - w) Sigma_ijp Sigma_ipj + (theta - w) Sigma_iip Sigma_jjp.
double cross_block_cov(const SpikeModel& model, double y, std::size_t m, std::size_t mp,
                       std::size_t i, std::size_t j, std::size_t ip, std::size_t jp);

// Asymptotic variance of sqrt(n) (l_i - lambda_i):
//   [ w (E[xi_i^4] - 3 a^2) + 2 theta a^2 ] / N^2.
double eigen_variance(const SpikeModel& model, double y, std::size_t i);

// Asymptotic covariance of sqrt(n) (l_i - lambda_i) and sqrt(n) (l_j - lambda_j);
// reduces to eigen_variance when i == j.  This is the n-free limit; divide by
// n for the raw-scale covariance of (l_i, l_j) at a finite sample size.
double eigen_joint_cov(const SpikeModel& model, double y, std::size_t i, std::size_t j);

// Two sample spike eigenvalues are asymptotically independent iff
// cov(xi_i, xi_j) = 0 and cov(xi_i^2, xi_j^2) = 0 (checked at 1e-12).
bool independence_condition(const SpikeModel& model, std::size_t i, std::size_t j);

// ----------------------------------------------------------------------
// Joint eigenvector / eigenvalue law for one spike
// ----------------------------------------------------------------------

// Limit law of ( sqrt(n) (u_i(i)^2 - q/(s t)), sqrt(n) (l_i - lambda_i) ) for
// a spike with standardized-coordinate excess kurtosis nu4 (Gaussian: 0):
// bivariate normal with covariance [v11 v12; v12 v22].
//
// v12 carries the value derived from the underlying block covariance by the
// delta method, with fourth-moment coefficient y a^2 (a^2 - 1 + y) q / (s^4 t^2).
// v12_alt keeps an alternative rendering of that coefficient with denominator
// s^6 t^4; it fails both the Cauchy-Schwarz bound and the block reconstruction
// (see tests), and is retained only for cross-checking against sources that
// print it.
struct EigvecJoint {
    double mean_proj;  // limit of u_i(i)^2: q / (s t)
    double v11;        // projection variance
    double v12;        // projection-eigenvalue covariance
    double v22;        // eigenvalue variance
    double v12_alt;    // alternative v12 display (inconsistent; see above)
};

EigvecJoint eigvec_joint(double a, double y, double nu4);

// ----------------------------------------------------------------------
// Joint limits for the two resolvent-derived matrix sequences that drive the
// eigenvector law (trace functionals and assembled 2x2 covariance blocks)
// ----------------------------------------------------------------------

struct AbJoint {
    double lambda;
    double alpha;  // limit diagonal of the first resolvent matrix: y/s at phi(a)
    double beta;   // limit diagonal of the second: y/q at phi(a)
    double w1, w2, w3;        // Hadamard-trace limits (AA, BB, AB)
    double tau1, tau2, tau3;  // product-trace limits; theta_i == tau_i here
};

AbJoint abjoint_quantities(double a, double y);           // closed rationals
AbJoint abjoint_quantities_integral(double a, double y);  // via m0..m7

// 2x2 covariance block [B11 B12; B12 B22] of the pair of centered scaled
// forms behind the eigenvector law, for spike a and standardized excess
// kurtosis nu4: B_uv = a^2 (w_uv nu4 + 2 tau_uv).
la::Matrix abjoint_blocks(double a, double y, double nu4);

}  // namespace spikeform::spiked
