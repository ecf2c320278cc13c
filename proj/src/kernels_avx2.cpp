#include "hwm/kernels.hpp"

#include <cmath>
#include <immintrin.h>

// AVX2 variants.  Unaligned loads throughout (field storage is plain
// std::vector).  Elementwise kernels use mul/add/sub only, never FMA, so they
// round exactly like the scalar reference and the dispatch is semantically
// invisible.  Scalar tails repeat the reference per-element expressions.

namespace hwm::kernels {
namespace {

void add_(double* out, const double* a, const double* b, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(out + i, _mm256_add_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    for (; i < n; ++i) out[i] = a[i] + b[i];
}

void sub_(double* out, const double* a, const double* b, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(out + i, _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    for (; i < n; ++i) out[i] = a[i] - b[i];
}

void mul_(double* out, const double* a, const double* b, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    for (; i < n; ++i) out[i] = a[i] * b[i];
}

void scale_(double* out, const double* a, double alpha, std::size_t n) {
    const __m256d va = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(out + i, _mm256_mul_pd(va, _mm256_loadu_pd(a + i)));
    for (; i < n; ++i) out[i] = alpha * a[i];
}

void axpy_(double* out, double alpha, const double* x, std::size_t n) {
    const __m256d va = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d prod = _mm256_mul_pd(va, _mm256_loadu_pd(x + i));
        _mm256_storeu_pd(out + i, _mm256_add_pd(_mm256_loadu_pd(out + i), prod));
    }
    for (; i < n; ++i) out[i] += alpha * x[i];
}

void mul_complex_real_(double* c, const double* s, std::size_t n_complex) {
    std::size_t i = 0;
    for (; i + 2 <= n_complex; i += 2) {
        // two complex values [re0 im0 re1 im1] scaled by [s0 s0 s1 s1]
        const __m256d sd = _mm256_permute4x64_pd(
            _mm256_castpd128_pd256(_mm_loadu_pd(s + i)), 0x50);
        _mm256_storeu_pd(c + 2 * i, _mm256_mul_pd(_mm256_loadu_pd(c + 2 * i), sd));
    }
    for (; i < n_complex; ++i) {
        c[2 * i] *= s[i];
        c[2 * i + 1] *= s[i];
    }
}

void mul_complex_imag_(double* c, const double* b, std::size_t n_complex) {
    // (re, im) * (i b) = (-b im, b re); the sign flip is an exact xor
    const __m256d flip_even = _mm256_set_pd(0.0, -0.0, 0.0, -0.0);
    std::size_t i = 0;
    for (; i + 2 <= n_complex; i += 2) {
        const __m256d bd = _mm256_permute4x64_pd(
            _mm256_castpd128_pd256(_mm_loadu_pd(b + i)), 0x50);
        const __m256d d = _mm256_loadu_pd(c + 2 * i);
        const __m256d swapped = _mm256_permute_pd(d, 0x5); // [im0 re0 im1 re1]
        _mm256_storeu_pd(c + 2 * i,
                         _mm256_xor_pd(_mm256_mul_pd(bd, swapped), flip_even));
    }
    for (; i < n_complex; ++i) {
        const double re = c[2 * i];
        const double im = c[2 * i + 1];
        c[2 * i] = -b[i] * im;
        c[2 * i + 1] = b[i] * re;
    }
}

void cross3_(double* ox, double* oy, double* oz,
             const double* ax, const double* ay, const double* az,
             const double* bx, const double* by, const double* bz,
             std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d vax = _mm256_loadu_pd(ax + i), vay = _mm256_loadu_pd(ay + i),
                      vaz = _mm256_loadu_pd(az + i);
        const __m256d vbx = _mm256_loadu_pd(bx + i), vby = _mm256_loadu_pd(by + i),
                      vbz = _mm256_loadu_pd(bz + i);
        _mm256_storeu_pd(ox + i, _mm256_sub_pd(_mm256_mul_pd(vay, vbz), _mm256_mul_pd(vaz, vby)));
        _mm256_storeu_pd(oy + i, _mm256_sub_pd(_mm256_mul_pd(vaz, vbx), _mm256_mul_pd(vax, vbz)));
        _mm256_storeu_pd(oz + i, _mm256_sub_pd(_mm256_mul_pd(vax, vby), _mm256_mul_pd(vay, vbx)));
    }
    for (; i < n; ++i) {
        const double cx = ay[i] * bz[i] - az[i] * by[i];
        const double cy = az[i] * bx[i] - ax[i] * bz[i];
        const double cz = ax[i] * by[i] - ay[i] * bx[i];
        ox[i] = cx;
        oy[i] = cy;
        oz[i] = cz;
    }
}

void dot3_(double* out,
           const double* ax, const double* ay, const double* az,
           const double* bx, const double* by, const double* bz,
           std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d acc = _mm256_mul_pd(_mm256_loadu_pd(ax + i), _mm256_loadu_pd(bx + i));
        acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(ay + i), _mm256_loadu_pd(by + i)));
        acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(az + i), _mm256_loadu_pd(bz + i)));
        _mm256_storeu_pd(out + i, acc);
    }
    for (; i < n; ++i)
        out[i] = ax[i] * bx[i] + ay[i] * by[i] + az[i] * bz[i];
}

void normalize3_(double* x, double* y, double* z, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d vx = _mm256_loadu_pd(x + i), vy = _mm256_loadu_pd(y + i),
                      vz = _mm256_loadu_pd(z + i);
        __m256d r = _mm256_mul_pd(vx, vx);
        r = _mm256_add_pd(r, _mm256_mul_pd(vy, vy));
        r = _mm256_add_pd(r, _mm256_mul_pd(vz, vz));
        r = _mm256_sqrt_pd(r);
        _mm256_storeu_pd(x + i, _mm256_div_pd(vx, r));
        _mm256_storeu_pd(y + i, _mm256_div_pd(vy, r));
        _mm256_storeu_pd(z + i, _mm256_div_pd(vz, r));
    }
    for (; i < n; ++i) {
        const double r = std::sqrt(x[i] * x[i] + y[i] * y[i] + z[i] * z[i]);
        x[i] /= r;
        y[i] /= r;
        z[i] /= r;
    }
}

double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double dot_(const double* a, const double* b, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    double s = hsum(acc);
    for (; i < n; ++i) s += a[i] * b[i];
    return s;
}

double sum_(const double* a, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(a + i));
    double s = hsum(acc);
    for (; i < n; ++i) s += a[i];
    return s;
}

double max_abs_(const double* a, std::size_t n) {
    const __m256d mask = _mm256_set1_pd(-0.0);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        acc = _mm256_max_pd(acc, _mm256_andnot_pd(mask, _mm256_loadu_pd(a + i)));
    const __m128d lo = _mm256_castpd256_pd128(acc);
    const __m128d hi = _mm256_extractf128_pd(acc, 1);
    const __m128d m2 = _mm_max_pd(lo, hi);
    double m = _mm_cvtsd_f64(_mm_max_sd(m2, _mm_unpackhi_pd(m2, m2)));
    for (; i < n; ++i) {
        const double v = std::fabs(a[i]);
        if (v > m) m = v;
    }
    return m;
}

} // namespace

const Ops* avx2_ops_impl() {
    static const Ops ops = {
        add_, sub_, mul_, scale_, axpy_,
        mul_complex_real_, mul_complex_imag_,
        cross3_, dot3_, normalize3_,
        dot_, sum_, max_abs_,
    };
    return &ops;
}

} // namespace hwm::kernels
