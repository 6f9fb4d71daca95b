// Limiting covariance assembly for centered sesquilinear forms
//   U(l) = (1/sqrt(n)) [ x(l)^T A y(l) - rho(l) tr A ]
// evaluated jointly over coordinate pairs l and over one, two, or k matrix
// sequences.  The covariance of any entry pair is
//   w * A1 + (tau - w) * A2 + (theta - w) * A3
// with trace functionals (w, theta, tau) of the matrix pair and moment
// functionals (A1, A2, A3) of the coordinate pair.  Also the specialized
// covariance for powers of a sample covariance matrix (quadratic forms).
#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "spikeform/linalg.hpp"

namespace spikeform::sesq {

struct TraceLimits {
    double w;      // (1/n) tr[A o B]   (Hadamard: diagonal products)
    double theta;  // (1/n) tr[A B^*]
    double tau;    // (1/n) tr[A B]
};

// Population joint moments for K-dimensional coordinate pairs (x, y), real
// case.  Second-moment tables are K x K; F(l,l') = E[x_l y_l x_l' y_l'].
struct JointMomentTable {
    std::size_t K = 0;
    la::Matrix Exx;  // E[x_l x_l']
    la::Matrix Eyy;  // E[y_l y_l']
    la::Matrix Exy;  // E[x_l y_l'] (need not be symmetric)
    la::Matrix F;    // E[x_l y_l x_l' y_l']

    double rho(std::size_t l) const { return Exy(l, l); }
};

struct MomentFunctionals {
    double a1, a2, a3;
    double rho_l, rho_lp;
};

// A1 = F(l,l') - rho(l) rho(l'); A2 = Exx(l,l') Eyy(l,l');
// A3 = Exy(l,l') Exy(l',l)
MomentFunctionals moment_functionals(const JointMomentTable& m, std::size_t l, std::size_t lp);

struct CovBlock {
    la::Matrix M;
    double min_eig = 0.0;  // smallest eigenvalue of M (diagnostic)
    bool psd_ok = true;    // min_eig >= -1e-10
};

// Finite-n trace functionals of a real symmetric pair (the Hermitian check is
// a 1e-12 bound on the largest asymmetry).
TraceLimits trace_limits_pair(const la::Matrix& A, const la::Matrix& B);

// 2K x 2K covariance of (U(1..K), V(1..K)) for two matrix sequences A, B.
CovBlock covariance_blocks(const TraceLimits& tl_AA, const TraceLimits& tl_BB,
                           const TraceLimits& tl_AB, const JointMomentTable& moments);

// (K*k) x (K*k) covariance for k matrix sequences; tl must be a full k x k
// table with tl[i][j] describing the (i-th, j-th) matrix pair.
CovBlock k_form_covariance(const std::vector<std::vector<TraceLimits>>& tl,
                           const JointMomentTable& moments, std::size_t k);

// Single covariance entry with complex moment functionals (the complex-case
// assembly formula; the matrix APIs above cover the real case used by the
// Monte Carlo harness).
std::complex<double> block_entry_complex(const TraceLimits& tl, std::complex<double> a1,
                                         std::complex<double> a2, std::complex<double> a3);

// f(m) = y * moment_m(y): the scaled moment functional entering the
// quadratic-form covariance (the factor y, not y^m, is what the companion
// spectral distribution of the k x k Gram matrix produces; the Monte Carlo
// suite pins this down).
double f_moment(int m, double y);

// (i+1) x (i+1) covariance of the scaled vector
//   sqrt(n/2) * ( s^T (S S^T)^m s - centering, m = 1..i ;  s^T s - 1 )
// for a unit vector s independent of S with iid unit-variance entries of
// fourth moment nu4.
CovBlock quadform_covariance(int i, double y, double nu4);

}  // namespace spikeform::sesq
