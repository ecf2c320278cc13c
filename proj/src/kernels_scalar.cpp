#include "hwm/kernels.hpp"

#include <cmath>

namespace hwm::kernels {
namespace {

void add_(double* out, const double* a, const double* b, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = a[i] + b[i];
}

void sub_(double* out, const double* a, const double* b, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = a[i] - b[i];
}

void mul_(double* out, const double* a, const double* b, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

void scale_(double* out, const double* a, double alpha, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = alpha * a[i];
}

void axpy_(double* out, double alpha, const double* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] += alpha * x[i];
}

void mul_complex_real_(double* c, const double* s, std::size_t n_complex) {
    for (std::size_t i = 0; i < n_complex; ++i) {
        c[2 * i] *= s[i];
        c[2 * i + 1] *= s[i];
    }
}

void mul_complex_imag_(double* c, const double* b, std::size_t n_complex) {
    for (std::size_t i = 0; i < n_complex; ++i) {
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
    for (std::size_t i = 0; i < n; ++i) {
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
    for (std::size_t i = 0; i < n; ++i)
        out[i] = ax[i] * bx[i] + ay[i] * by[i] + az[i] * bz[i];
}

void normalize3_(double* x, double* y, double* z, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const double r = std::sqrt(x[i] * x[i] + y[i] * y[i] + z[i] * z[i]);
        x[i] /= r;
        y[i] /= r;
        z[i] /= r;
    }
}

double dot_(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

double sum_(const double* a, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i];
    return acc;
}

double max_abs_(const double* a, std::size_t n) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double v = std::fabs(a[i]);
        if (v > m) m = v;
    }
    return m;
}

} // namespace

const Ops& scalar_ops() {
    static const Ops ops = {
        add_, sub_, mul_, scale_, axpy_,
        mul_complex_real_, mul_complex_imag_,
        cross3_, dot3_, normalize3_,
        dot_, sum_, max_abs_,
    };
    return ops;
}

} // namespace hwm::kernels
