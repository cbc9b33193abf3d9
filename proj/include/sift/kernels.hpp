#pragma once

#include <cstddef>

// Small dense kernels used by the numeric hot paths (proxy-model training,
// set-regressor forward/backward, nearest-neighbor distances).
//
// Each kernel has a scalar reference implementation and, on x86-64 with AVX2,
// a vectorized variant. The active variant is chosen once at runtime from CPU
// features and can be overridden programmatically (used by the equivalence
// tests). Contract between variants:
//   - axpy (elementwise) produces bit-identical results on every backend;
//     the AVX2 variant deliberately avoids FMA so rounding matches the
//     scalar mul+add reference.
//   - dot / sum / squared_distance are reductions; backends may reassociate,
//     so results agree only up to accumulation roundoff.

namespace sift::simd {

enum class Backend { scalar, avx2 };

// Backend selected at startup (best supported), or the last set_backend() value.
Backend active_backend();

// True if this binary and CPU can run the given backend.
bool backend_supported(Backend b);

// Override the dispatch. Throws ConfigError if the backend is unsupported.
void set_backend(Backend b);

// sum_i x[i] * y[i]
double dot(const double* x, const double* y, std::size_t n);

// y[i] += a * x[i]
void axpy(double a, const double* x, double* y, std::size_t n);

// sum_i x[i]
double sum(const double* x, std::size_t n);

// sum_i (x[i] - y[i])^2
double squared_distance(const double* x, const double* y, std::size_t n);

// y = W x for row-major W (rows x cols). Composed from dot.
inline void matvec(const double* W, std::size_t rows, std::size_t cols,
                   const double* x, double* y) {
    for (std::size_t r = 0; r < rows; ++r) y[r] = dot(W + r * cols, x, cols);
}

}  // namespace sift::simd
