#pragma once

#include <cstddef>

// Hot inner loops of the library: pointwise field algebra, complex-by-symbol
// products in spectral space, and reductions.  Every kernel has a scalar
// reference implementation; on x86-64 an AVX2 variant is compiled as well and
// selected at runtime.  Elementwise kernels are written so that the scalar and
// vector paths perform the same IEEE operations in the same per-element order
// (no FMA contraction), which keeps them bit-identical; reductions accumulate
// in a different order and are only equal up to roundoff.

namespace hwm::kernels {

struct Ops {
    // out[i] = a[i] + b[i] / a[i] - b[i] / a[i] * b[i]; aliasing out==a allowed
    void (*add)(double* out, const double* a, const double* b, std::size_t n);
    void (*sub)(double* out, const double* a, const double* b, std::size_t n);
    void (*mul)(double* out, const double* a, const double* b, std::size_t n);
    // out[i] = alpha * a[i]
    void (*scale)(double* out, const double* a, double alpha, std::size_t n);
    // out[i] += alpha * x[i]
    void (*axpy)(double* out, double alpha, const double* x, std::size_t n);
    // interleaved complex c scaled by a real symbol: c[k] *= s[k]
    void (*mul_complex_real)(double* c, const double* s, std::size_t n_complex);
    // interleaved complex c scaled by i*b[k] (purely imaginary symbol)
    void (*mul_complex_imag)(double* c, const double* b, std::size_t n_complex);
    // componentwise cross product of 3-vector fields, out = a x b
    void (*cross3)(double* ox, double* oy, double* oz,
                   const double* ax, const double* ay, const double* az,
                   const double* bx, const double* by, const double* bz,
                   std::size_t n);
    // pointwise dot product of 3-vector fields
    void (*dot3)(double* out,
                 const double* ax, const double* ay, const double* az,
                 const double* bx, const double* by, const double* bz,
                 std::size_t n);
    // pointwise renormalization of a 3-vector field to unit length (in place)
    void (*normalize3)(double* x, double* y, double* z, std::size_t n);
    double (*dot)(const double* a, const double* b, std::size_t n);
    double (*sum)(const double* a, std::size_t n);
    double (*max_abs)(const double* a, std::size_t n);
};

/** Scalar reference implementations; always available. */
const Ops& scalar_ops();

/** AVX2 implementations, or nullptr when unsupported by build or CPU. */
const Ops* avx2_ops();

/**
 * Table selected at startup: AVX2 when the CPU supports it, otherwise scalar.
 * The environment variable HWMLAB_KERNELS=scalar|avx2 forces a choice
 * (requesting avx2 on an unsupported CPU falls back to scalar).
 */
const Ops& active();

/** Name of the active table, "scalar" or "avx2". */
const char* active_name();

} // namespace hwm::kernels
