#include "sift/kernels.hpp"

#include "sift/errors.hpp"

namespace sift::simd {

namespace detail {

double dot_scalar(const double* x, const double* y, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
    return acc;
}

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

double sum_scalar(const double* x, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i];
    return acc;
}

double sqdist_scalar(const double* x, const double* y, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = x[i] - y[i];
        acc += d * d;
    }
    return acc;
}

#if SIFT_HAVE_AVX2_SOURCES
double dot_avx2(const double* x, const double* y, std::size_t n);
void axpy_avx2(double a, const double* x, double* y, std::size_t n);
double sum_avx2(const double* x, std::size_t n);
double sqdist_avx2(const double* x, const double* y, std::size_t n);
#endif

}  // namespace detail

namespace {

bool cpu_has_avx2() {
#if SIFT_HAVE_AVX2_SOURCES && defined(__x86_64__)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Backend& backend_slot() {
    static Backend b = cpu_has_avx2() ? Backend::avx2 : Backend::scalar;
    return b;
}

}  // namespace

Backend active_backend() { return backend_slot(); }

bool backend_supported(Backend b) {
    return b == Backend::scalar || (b == Backend::avx2 && cpu_has_avx2());
}

void set_backend(Backend b) {
    if (!backend_supported(b)) throw ConfigError("kernel backend not supported on this machine");
    backend_slot() = b;
}

double dot(const double* x, const double* y, std::size_t n) {
#if SIFT_HAVE_AVX2_SOURCES
    if (backend_slot() == Backend::avx2) return detail::dot_avx2(x, y, n);
#endif
    return detail::dot_scalar(x, y, n);
}

void axpy(double a, const double* x, double* y, std::size_t n) {
#if SIFT_HAVE_AVX2_SOURCES
    if (backend_slot() == Backend::avx2) return detail::axpy_avx2(a, x, y, n);
#endif
    detail::axpy_scalar(a, x, y, n);
}

double sum(const double* x, std::size_t n) {
#if SIFT_HAVE_AVX2_SOURCES
    if (backend_slot() == Backend::avx2) return detail::sum_avx2(x, n);
#endif
    return detail::sum_scalar(x, n);
}

double squared_distance(const double* x, const double* y, std::size_t n) {
#if SIFT_HAVE_AVX2_SOURCES
    if (backend_slot() == Backend::avx2) return detail::sqdist_avx2(x, y, n);
#endif
    return detail::sqdist_scalar(x, y, n);
}

}  // namespace sift::simd
