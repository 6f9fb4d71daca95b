// Low-level dense kernels behind the numerics: dot, axpy, plane rotation and
// row-major matrix-vector product.  Scalar reference implementations always
// exist; AVX2+FMA variants are compiled separately and selected at runtime.
// The active backend can be forced (tests pin both and compare outputs).
#pragma once

#include <cstddef>

namespace spikeform::la {

enum class Backend { Auto, Scalar, Avx2 };

// Select the backend for all subsequent kernel calls.  Auto re-probes the CPU.
// Requesting Avx2 on a machine without it falls back to Scalar.
void force_backend(Backend b);
Backend current_backend();
bool cpu_has_avx2();

// y . x over n entries
double dot(const double* x, const double* y, std::size_t n);

// y += alpha * x over n entries
void axpy(double alpha, const double* x, double* y, std::size_t n);

// In-place plane rotation of two rows: (a, b) <- (c*a - s*b, s*a + c*b)
void rot_apply(double* a, double* b, std::size_t n, double c, double s);

// y = A x for row-major A (rows x cols)
void gemv(const double* A, std::size_t rows, std::size_t cols,
          const double* x, double* y);

// Lower-triangle rank-1 accumulate: S[i*n+j] += alpha * x[i] * x[j], j <= i.
// The covariance accumulation hot loop.
void syr_lower(double* S, std::size_t n, double alpha, const double* x);

namespace detail {
// per-backend entry points (exposed for the equivalence tests)
double dot_scalar(const double* x, const double* y, std::size_t n);
void axpy_scalar(double alpha, const double* x, double* y, std::size_t n);
void rot_apply_scalar(double* a, double* b, std::size_t n, double c, double s);
#if defined(SPIKEFORM_HAVE_AVX2_BUILD)
double dot_avx2(const double* x, const double* y, std::size_t n);
void axpy_avx2(double alpha, const double* x, double* y, std::size_t n);
void rot_apply_avx2(double* a, double* b, std::size_t n, double c, double s);
#endif
}  // namespace detail

}  // namespace spikeform::la
