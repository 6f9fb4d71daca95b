// Dense row-major matrices and the two symmetric eigensolvers used by the
// Monte Carlo engine:
//   * jacobi_eigen  — cyclic Jacobi, the reference solver.  Off-diagonal
//     Frobenius threshold 1e-12 * ||S||_F, hard cap of 30 sweeps.
//   * topk_eigen    — block subspace iteration with Rayleigh-Ritz extraction
//     for the leading eigenpairs of a PSD matrix (the sample-covariance fast
//     path; falls back to Jacobi on non-convergence at the call site).
// Both return eigenvalues in descending order with the sign convention that
// each eigenvector's largest-magnitude entry is positive.
#pragma once

#include <cstddef>
#include <vector>

namespace spikeform::la {

class Matrix {
  public:
    Matrix() : rows_(0), cols_(0) {}
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    double* row(std::size_t i) { return data_.data() + i * cols_; }
    const double* row(std::size_t i) const { return data_.data() + i * cols_; }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }

    double frobenius() const;
    double max_abs() const;
    // max |A(i,j) - A(j,i)| over the square part; 0 for empty
    double max_asymmetry() const;

    Matrix transposed() const;

  private:
    std::size_t rows_, cols_;
    std::vector<double> data_;
};

Matrix matmul(const Matrix& A, const Matrix& B);

// y = A x
void matvec(const Matrix& A, const double* x, double* y);

struct EigenResult {
    std::vector<double> values;  // descending
    Matrix vectors_t;            // row i = eigenvector for values[i]
    int sweeps = 0;              // Jacobi sweeps actually used
};

// Cyclic Jacobi on a symmetric matrix.  Throws ConvergenceError if the
// off-diagonal norm is still above threshold after max_sweeps sweeps.
EigenResult jacobi_eigen(const Matrix& S, double tol_scale = 1e-12, int max_sweeps = 30);

struct TopkResult {
    std::vector<double> values;  // descending, size k
    Matrix vectors_t;            // k x n, row i = eigenvector
    bool converged = false;
    int iters = 0;
};

// Leading k eigenpairs of a PSD matrix by block subspace iteration.
// Residual target per pair: ||S v - theta v|| <= tol_scale * ||S||_F.
TopkResult topk_eigen(const Matrix& S, std::size_t k, double tol_scale = 1e-10,
                      int max_iters = 600, std::size_t guard = 2);

}  // namespace spikeform::la
