// Monte Carlo engine: spiked-covariance experiments (sample top eigenpairs of
// (M+p) x (M+p) sample covariances over R replicates), quadratic-form
// experiments for powers of a Gram matrix, and the plain two-matrix
// sesquilinear-form experiment.  Replicates are seeded independently from
// (master_seed, replicate index), so results are bit-identical for any worker
// count; statistics come with jackknife standard errors and z-score verdicts.
#pragma once

#include <array>
#include <cstdint>
#include <cstddef>
#include <random>
#include <string>
#include <vector>

#include "spikeform/linalg.hpp"
#include "spikeform/sesquilinear.hpp"
#include "spikeform/spiked_theory.hpp"

namespace spikeform::sim {

// ----------------------------------------------------------------------
// Population distributions for the spike block
// ----------------------------------------------------------------------

enum class DistKind {
    GaussianDiag,    // independent Gaussian coordinates with given variances
    UniformEllipse,  // uniform on the solid ellipse with semi-axes (A, B)
    UniformIid,      // independent scaled-uniform coordinates (excess kurtosis -1.2)
};

struct PopulationDist {
    DistKind kind = DistKind::GaussianDiag;
    std::vector<double> spikes;  // variances (GaussianDiag / UniformIid)
    double A = 0.0, B = 0.0;     // ellipse semi-axes (UniformEllipse)

    std::size_t M() const;
    std::vector<double> spike_values() const;  // variances, any kind
    spiked::SpikeModel model() const;          // exact moment model
    double nu4(std::size_t i) const;           // standardized excess kurtosis
    void validate() const;                     // throws ConfigError
};

// ----------------------------------------------------------------------
// Spiked-covariance experiment
// ----------------------------------------------------------------------

enum class Solver { Auto, Jacobi };
enum class Centering { Empirical, Theoretical };

struct SpikedConfig {
    std::size_t p = 200;  // noise dimension
    std::size_t n = 300;  // sample size
    PopulationDist dist;
    int R = 10000;
    std::uint64_t master_seed = 1;
    int workers = 1;  // 0 = hardware concurrency
    Solver solver = Solver::Auto;

    double y() const { return static_cast<double>(p) / static_cast<double>(n); }
};

struct SpikedReplicate {
    int index = 0;             // original replicate index (stable across discards)
    std::vector<double> eig;   // top-M sample eigenvalues, descending
    std::vector<double> proj;  // squared spike coordinates u_i(i)^2 of the eigenvectors
};

struct SpikedResult {
    int R_requested = 0;
    int R_effective = 0;
    int R_discarded = 0;   // eigensolver failures (budget: 0.1% of requested)
    int sep_warnings = 0;  // smallest tracked eigenvalue near the bulk edge
    std::vector<SpikedReplicate> reps;  // ordered by replicate index

    bool budget_ok() const {
        return R_discarded * 1000 <= R_requested;
    }
};

SpikedResult run_spiked(const SpikedConfig& cfg);

// One replicate's data matrix: n rows, each a sample with M spike coordinates
// followed by p standard-normal noise coordinates.  n = 0 gives an empty
// matrix.  Exposed for sampler self-tests.
la::Matrix sample_population(const PopulationDist& dist, std::size_t p, std::size_t n,
                             std::mt19937_64& gen);

// S = (1/n) X^T X for row-per-sample X; exactly symmetric by construction.
la::Matrix sample_covariance(const la::Matrix& X);

// ----------------------------------------------------------------------
// Quadratic forms in powers of a Gram matrix
// ----------------------------------------------------------------------

struct QuadformConfig {
    std::size_t n = 400;
    std::size_t k = 267;  // y_n = k/n; the Gram matrix uses k-1 independent vectors
    int powers = 2;       // i: track (S1 S1^T)^m for m = 1..i
    int R = 2000;
    std::uint64_t master_seed = 1;
    int workers = 1;

    double y_n() const { return static_cast<double>(k) / static_cast<double>(n); }
};

struct QuadformResult {
    int R_requested = 0;
    int R_effective = 0;
    // Each replicate: sqrt(n/2) * (centered form values m = 1..powers, s1^T s1 - 1).
    std::vector<std::vector<double>> reps;
};

QuadformResult run_quadform(const QuadformConfig& cfg);

// ----------------------------------------------------------------------
// Two-matrix sesquilinear-form experiment (K = 2 coordinate pairs)
// ----------------------------------------------------------------------

// Coordinate model: two independent pairs (x_l, y_l) with x_l standard normal
// and y_l = rho_l x_l + sqrt(1 - rho_l^2) z_l.
struct FormsConfig {
    std::size_t n = 200;
    int R = 20000;
    std::uint64_t master_seed = 1;
    int workers = 1;
    double rho1 = 0.6;
    double rho2 = -0.3;
};

struct FormsResult {
    int R_requested = 0;
    int R_effective = 0;
    // Each replicate: (U_A(1), U_A(2), U_B(1), U_B(2)).
    std::vector<std::array<double, 4>> reps;
};

// A and B must be symmetric n x n; the centered scaled forms use their traces.
FormsResult run_forms(const FormsConfig& cfg, const la::Matrix& A, const la::Matrix& B);

// Exact joint moment table of the K = 2 coordinate model above.
sesq::JointMomentTable forms_moment_table(double rho1, double rho2);

// ----------------------------------------------------------------------
// Statistics: jackknife standard errors and distribution-shape summaries
// ----------------------------------------------------------------------

struct Stat {
    double value = 0.0;
    double se = 0.0;
};

Stat mean_se(const std::vector<double>& xs);
// Variance with empirical centering (unbiased sample variance) or theoretical
// centering at `center` (mean square about the constant).
Stat var_se(const std::vector<double>& xs, Centering centering, double center = 0.0);
Stat cov_se(const std::vector<double>& xs, const std::vector<double>& ys, Centering centering,
            double center_x = 0.0, double center_y = 0.0);

struct ShapeStats {
    double skewness = 0.0;
    double excess_kurtosis = 0.0;
};
ShapeStats shape_stats(const std::vector<double>& xs);

// ----------------------------------------------------------------------
// Verification targets
// ----------------------------------------------------------------------

enum class TargetKind {
    EigMean,     // mean of l_i vs phi(a_i)                        (raw scale)
    EigVar,      // n var(l_i) vs the asymptotic eigenvalue variance
    EigPairCov,  // n cov(l_i, l_j) vs the asymptotic joint covariance
    ProjMean,    // mean of u_i(i)^2 vs q/(s t)                    (raw scale)
    ProjVar,     // n var(u_i(i)^2) vs v11
    ProjEigCov,  // n cov(u_i(i)^2, l_i) vs v12
};

struct Target {
    TargetKind kind;
    std::size_t i = 0;  // spike index, 0-based
    std::size_t j = 0;  // second spike index (EigPairCov)
};

struct TargetResult {
    Target target;
    std::string label;
    // Asymptotic (n-scaled) and raw scales; for scale-free targets the two
    // coincide.  zscore and verdict are scale-invariant.
    double theory_asymptotic = 0.0, empirical_asymptotic = 0.0, se_asymptotic = 0.0;
    double theory_raw = 0.0, empirical_raw = 0.0, se_raw = 0.0;
    double zscore = 0.0;
    bool pass = false;
};

struct VerifyResult {
    std::vector<TargetResult> targets;
    bool budget_ok = true;
    bool no_targets = false;  // verification vacuous: warn, do not fail
    bool all_pass = false;
    double z_threshold = 4.0;
};

VerifyResult verify_spiked(const SpikedConfig& cfg, const SpikedResult& result,
                           const std::vector<Target>& targets, double z_threshold,
                           Centering centering);

// RNG seeded from (master_seed, replicate) with full 64-bit mixing.
std::mt19937_64 make_rng(std::uint64_t master_seed, std::uint64_t replicate);

}  // namespace spikeform::sim
