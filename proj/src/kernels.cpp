// Backend selection and the public kernel entry points.  gemv and syr_lower
// are built on dot/axpy so every backend shares one code path.
#include "spikeform/kernels.hpp"

namespace spikeform::la {

namespace {

struct Vtable {
    double (*dot)(const double*, const double*, std::size_t);
    void (*axpy)(double, const double*, double*, std::size_t);
    void (*rot)(double*, double*, std::size_t, double, double);
};

constexpr Vtable kScalar{detail::dot_scalar, detail::axpy_scalar, detail::rot_apply_scalar};
#if defined(SPIKEFORM_HAVE_AVX2_BUILD)
constexpr Vtable kAvx2{detail::dot_avx2, detail::axpy_avx2, detail::rot_apply_avx2};
#endif

bool probe_avx2() {
#if defined(SPIKEFORM_HAVE_AVX2_BUILD) && defined(__GNUC__)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

const Vtable* pick(Backend b) {
#if defined(SPIKEFORM_HAVE_AVX2_BUILD)
    if (b == Backend::Avx2 || (b == Backend::Auto && probe_avx2()))
        return probe_avx2() ? &kAvx2 : &kScalar;
#else
    (void)b;
#endif
    return &kScalar;
}

const Vtable* g_vtable = pick(Backend::Auto);
Backend g_backend = Backend::Auto;

}  // namespace

void force_backend(Backend b) {
    g_backend = b;
    g_vtable = pick(b);
}

Backend current_backend() {
    if (g_backend != Backend::Auto) return g_backend;
    return probe_avx2() ? Backend::Avx2 : Backend::Scalar;
}

bool cpu_has_avx2() { return probe_avx2(); }

double dot(const double* x, const double* y, std::size_t n) { return g_vtable->dot(x, y, n); }

void axpy(double alpha, const double* x, double* y, std::size_t n) { g_vtable->axpy(alpha, x, y, n); }

void rot_apply(double* a, double* b, std::size_t n, double c, double s) { g_vtable->rot(a, b, n, c, s); }

void gemv(const double* A, std::size_t rows, std::size_t cols, const double* x, double* y) {
    for (std::size_t r = 0; r < rows; ++r) y[r] = g_vtable->dot(A + r * cols, x, cols);
}

void syr_lower(double* S, std::size_t n, double alpha, const double* x) {
    for (std::size_t i = 0; i < n; ++i) g_vtable->axpy(alpha * x[i], x, S + i * n, i + 1);
}

}  // namespace spikeform::la
