#include "spikeform/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "spikeform/errors.hpp"
#include "spikeform/kernels.hpp"

namespace spikeform::la {

double Matrix::frobenius() const {
    return std::sqrt(dot(data_.data(), data_.data(), data_.size()));
}

double Matrix::max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::fabs(v));
    return m;
}

double Matrix::max_asymmetry() const {
    double m = 0.0;
    const std::size_t n = std::min(rows_, cols_);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            m = std::max(m, std::fabs((*this)(i, j) - (*this)(j, i)));
    return m;
}

Matrix Matrix::transposed() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

Matrix matmul(const Matrix& A, const Matrix& B) {
    if (A.cols() != B.rows()) throw ShapeError("matmul: inner dimensions differ");
    Matrix C(A.rows(), B.cols());
    // C_i += A(i,k) * B_k, row-major friendly
    for (std::size_t i = 0; i < A.rows(); ++i)
        for (std::size_t k = 0; k < A.cols(); ++k)
            axpy(A(i, k), B.row(k), C.row(i), B.cols());
    return C;
}

void matvec(const Matrix& A, const double* x, double* y) {
    gemv(A.data(), A.rows(), A.cols(), x, y);
}

// ---------------------------------------------------------------- jacobi

namespace {

double offdiag_frobenius(const Matrix& S) {
    const std::size_t n = S.rows();
    double acc = 0.0;
    for (std::size_t p = 0; p < n; ++p)
        for (std::size_t q = p + 1; q < n; ++q) acc += 2.0 * S(p, q) * S(p, q);
    return std::sqrt(acc);
}

// descending sort + sign convention (largest-|entry| coordinate positive)
void finalize_pairs(std::vector<double>& vals, Matrix& vecs_t) {
    const std::size_t k = vals.size();
    const std::size_t n = vecs_t.cols();
    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return vals[a] > vals[b]; });
    std::vector<double> sorted_vals(k);
    Matrix sorted_vecs(k, n);
    for (std::size_t r = 0; r < k; ++r) {
        sorted_vals[r] = vals[order[r]];
        const double* src = vecs_t.row(order[r]);
        double* dst = sorted_vecs.row(r);
        std::size_t arg = 0;
        for (std::size_t j = 1; j < n; ++j)
            if (std::fabs(src[j]) > std::fabs(src[arg])) arg = j;
        const double flip = (src[arg] < 0.0) ? -1.0 : 1.0;
        for (std::size_t j = 0; j < n; ++j) dst[j] = flip * src[j];
    }
    vals = std::move(sorted_vals);
    vecs_t = std::move(sorted_vecs);
}

}  // namespace

EigenResult jacobi_eigen(const Matrix& S_in, double tol_scale, int max_sweeps) {
    if (S_in.rows() != S_in.cols()) throw ShapeError("jacobi_eigen: matrix not square");
    const std::size_t n = S_in.rows();
    Matrix S = S_in;
    Matrix Vt = Matrix::identity(n);

    EigenResult out;
    if (n == 0) return out;

    const double norm = S.frobenius();
    const double threshold = tol_scale * norm;

    int sweep = 0;
    if (norm > 0.0) {
        while (offdiag_frobenius(S) > threshold) {
            if (sweep >= max_sweeps)
                throw ConvergenceError("jacobi_eigen: off-diagonal norm above threshold after sweep cap");
            for (std::size_t p = 0; p < n; ++p) {
                for (std::size_t q = p + 1; q < n; ++q) {
                    const double spq = S(p, q);
                    if (spq == 0.0) continue;
                    const double theta = (S(q, q) - S(p, p)) / (2.0 * spq);
                    // smaller-magnitude root of t^2 + 2 t theta - 1 = 0
                    double t = 1.0 / (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                    if (theta < 0.0) t = -t;
                    const double c = 1.0 / std::sqrt(t * t + 1.0);
                    const double s = t * c;
                    // S <- G^T S G, applied as row then column rotation
                    rot_apply(S.row(p), S.row(q), n, c, s);
                    for (std::size_t r = 0; r < n; ++r) {
                        const double arp = S(r, p);
                        const double arq = S(r, q);
                        S(r, p) = c * arp - s * arq;
                        S(r, q) = s * arp + c * arq;
                    }
                    // eigenvectors accumulate the same row rotation
                    rot_apply(Vt.row(p), Vt.row(q), n, c, s);
                }
            }
            ++sweep;
        }
    }

    out.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.values[i] = S(i, i);
    out.vectors_t = std::move(Vt);
    out.sweeps = sweep;
    finalize_pairs(out.values, out.vectors_t);
    return out;
}

// ---------------------------------------------------------------- subspace iteration

namespace {

// modified Gram-Schmidt with one re-orthogonalization pass; columns of V
// stored as rows of Vt (b x n)
void orthonormalize_rows(Matrix& Vt) {
    const std::size_t b = Vt.rows();
    const std::size_t n = Vt.cols();
    for (std::size_t i = 0; i < b; ++i) {
        double* vi = Vt.row(i);
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t j = 0; j < i; ++j) {
                const double proj = dot(Vt.row(j), vi, n);
                axpy(-proj, Vt.row(j), vi, n);
            }
        }
        const double norm = std::sqrt(dot(vi, vi, n));
        if (norm > 0.0) {
            const double inv = 1.0 / norm;
            for (std::size_t t = 0; t < n; ++t) vi[t] *= inv;
        } else {
            // degenerate column: replace with a canonical vector not yet used
            for (std::size_t t = 0; t < n; ++t) vi[t] = 0.0;
            vi[(i * 7919u) % n] = 1.0;
        }
    }
}

}  // namespace

TopkResult topk_eigen(const Matrix& S, std::size_t k, double tol_scale, int max_iters,
                      std::size_t guard) {
    if (S.rows() != S.cols()) throw ShapeError("topk_eigen: matrix not square");
    const std::size_t n = S.rows();
    if (k == 0 || k > n) throw ShapeError("topk_eigen: k out of range");

    const std::size_t b = std::min(n, k + guard);
    const double norm = S.frobenius();
    const double rtol = tol_scale * norm;

    TopkResult out;
    out.values.assign(k, 0.0);
    out.vectors_t = Matrix(k, n);

    if (norm == 0.0) {  // zero matrix: any orthonormal set works
        for (std::size_t i = 0; i < k; ++i) out.vectors_t(i, i) = 1.0;
        out.converged = true;
        return out;
    }

    // start from the first b canonical vectors (spike mass concentrates there
    // for the covariance matrices this path serves)
    Matrix Vt(b, n);
    for (std::size_t i = 0; i < b; ++i) Vt(i, i) = 1.0;

    Matrix Yt(b, n);              // rows of Y = S * V
    Matrix H(b, b);               // Rayleigh quotient V^T S V
    std::vector<double> ritz(b);

    for (int iter = 1; iter <= max_iters; ++iter) {
        // Y = S V  (S symmetric: row i of Yt = S * v_i)
        for (std::size_t i = 0; i < b; ++i) matvec(S, Vt.row(i), Yt.row(i));

        // H = V^T S V, symmetric up to rounding; assemble symmetrically
        for (std::size_t i = 0; i < b; ++i)
            for (std::size_t j = i; j < b; ++j) {
                const double hij = dot(Vt.row(i), Yt.row(j), n);
                H(i, j) = hij;
                H(j, i) = hij;
            }

        EigenResult small = jacobi_eigen(H, 1e-14, 60);
        for (std::size_t i = 0; i < b; ++i) ritz[i] = small.values[i];

        // Ritz vectors z_i = V q_i and their residuals S z_i - theta z_i = Y q_i - theta V q_i
        Matrix Zt(b, n);
        bool all_ok = true;
        std::vector<double> resid(k, 0.0);
        for (std::size_t i = 0; i < b; ++i) {
            double* zi = Zt.row(i);
            for (std::size_t j = 0; j < b; ++j) axpy(small.vectors_t(i, j), Vt.row(j), zi, n);
        }
        for (std::size_t i = 0; i < k; ++i) {
            // r = Y q_i - theta_i z_i
            std::vector<double> r(n, 0.0);
            for (std::size_t j = 0; j < b; ++j) axpy(small.vectors_t(i, j), Yt.row(j), r.data(), n);
            axpy(-ritz[i], Zt.row(i), r.data(), n);
            resid[i] = std::sqrt(dot(r.data(), r.data(), n));
            if (resid[i] > rtol) all_ok = false;
        }

        if (all_ok) {
            for (std::size_t i = 0; i < k; ++i) {
                out.values[i] = ritz[i];
                double* dst = out.vectors_t.row(i);
                const double* src = Zt.row(i);
                for (std::size_t t = 0; t < n; ++t) dst[t] = src[t];
            }
            finalize_pairs(out.values, out.vectors_t);
            out.converged = true;
            out.iters = iter;
            return out;
        }

        // next subspace: orthonormalized power step (rotate toward Ritz basis first
        // so the leading directions keep improving even with clustered tails)
        for (std::size_t i = 0; i < b; ++i) {
            double* vi = Vt.row(i);
            for (std::size_t t = 0; t < n; ++t) vi[t] = 0.0;
            for (std::size_t j = 0; j < b; ++j) axpy(small.vectors_t(i, j), Yt.row(j), vi, n);
        }
        orthonormalize_rows(Vt);
        out.iters = iter;
    }

    out.converged = false;
    return out;
}

}  // namespace spikeform::la
