#include "hwm/field.hpp"

#include <cmath>
#include <utility>

#include "hwm/errors.hpp"
#include "hwm/kernels.hpp"

namespace hwm {

void require_same_grid(const TorusGrid& a, const TorusGrid& b) {
    if (a != b)
        throw ParameterOutOfRangeError("grid mismatch: " + a.describe() + " vs " + b.describe());
}

ScalarField::ScalarField(const TorusGrid& grid, std::vector<double> values)
    : grid_(grid), v_(std::move(values)) {
    if (v_.size() != grid_.total_points())
        throw ParameterOutOfRangeError("field size does not match grid point count");
}

double ScalarField::mean() const {
    return kernels::active().sum(v_.data(), v_.size()) / static_cast<double>(v_.size());
}

double ScalarField::max_abs() const {
    return kernels::active().max_abs(v_.data(), v_.size());
}

bool ScalarField::all_finite() const {
    for (double x : v_)
        if (!std::isfinite(x)) return false;
    return true;
}

ScalarField operator+(const ScalarField& a, const ScalarField& b) {
    require_same_grid(a.grid(), b.grid());
    ScalarField out(a.grid());
    kernels::active().add(out.data(), a.data(), b.data(), a.size());
    return out;
}

ScalarField operator-(const ScalarField& a, const ScalarField& b) {
    require_same_grid(a.grid(), b.grid());
    ScalarField out(a.grid());
    kernels::active().sub(out.data(), a.data(), b.data(), a.size());
    return out;
}

ScalarField operator*(const ScalarField& a, const ScalarField& b) {
    require_same_grid(a.grid(), b.grid());
    ScalarField out(a.grid());
    kernels::active().mul(out.data(), a.data(), b.data(), a.size());
    return out;
}

ScalarField operator*(double c, const ScalarField& a) {
    ScalarField out(a.grid());
    kernels::active().scale(out.data(), a.data(), c, a.size());
    return out;
}

ScalarField operator-(const ScalarField& a) { return -1.0 * a; }

double integral(const ScalarField& f) {
    return kernels::active().sum(f.data(), f.size()) * f.grid().cell_volume();
}

double inner(const ScalarField& f, const ScalarField& g) {
    require_same_grid(f.grid(), g.grid());
    return kernels::active().dot(f.data(), g.data(), f.size()) * f.grid().cell_volume();
}

ScalarField remove_mean(const ScalarField& f) {
    const double m = f.mean();
    ScalarField out(f.grid());
    for (std::size_t i = 0; i < f.size(); ++i) out[i] = f[i] - m;
    return out;
}

VectorField3::VectorField3(ScalarField x, ScalarField y, ScalarField z)
    : c_{std::move(x), std::move(y), std::move(z)} {
    require_same_grid(c_[0].grid(), c_[1].grid());
    require_same_grid(c_[0].grid(), c_[2].grid());
}

ScalarField VectorField3::magnitude() const {
    ScalarField out(grid());
    const std::size_t n = size();
    kernels::active().dot3(out.data(),
                           c_[0].data(), c_[1].data(), c_[2].data(),
                           c_[0].data(), c_[1].data(), c_[2].data(), n);
    for (std::size_t i = 0; i < n; ++i) out[i] = std::sqrt(out[i]);
    return out;
}

VectorField3 operator+(const VectorField3& a, const VectorField3& b) {
    return {a.component(0) + b.component(0), a.component(1) + b.component(1),
            a.component(2) + b.component(2)};
}

VectorField3 operator-(const VectorField3& a, const VectorField3& b) {
    return {a.component(0) - b.component(0), a.component(1) - b.component(1),
            a.component(2) - b.component(2)};
}

VectorField3 operator*(double c, const VectorField3& a) {
    return {c * a.component(0), c * a.component(1), c * a.component(2)};
}

VectorField3 operator-(const VectorField3& a) { return -1.0 * a; }

VectorField3 operator*(const ScalarField& s, const VectorField3& a) {
    return {s * a.component(0), s * a.component(1), s * a.component(2)};
}

VectorField3 cross(const VectorField3& a, const VectorField3& b) {
    require_same_grid(a.grid(), b.grid());
    VectorField3 out(a.grid());
    kernels::active().cross3(
        out.component(0).data(), out.component(1).data(), out.component(2).data(),
        a.component(0).data(), a.component(1).data(), a.component(2).data(),
        b.component(0).data(), b.component(1).data(), b.component(2).data(), a.size());
    return out;
}

ScalarField dot(const VectorField3& a, const VectorField3& b) {
    require_same_grid(a.grid(), b.grid());
    ScalarField out(a.grid());
    kernels::active().dot3(out.data(),
                           a.component(0).data(), a.component(1).data(), a.component(2).data(),
                           b.component(0).data(), b.component(1).data(), b.component(2).data(),
                           a.size());
    return out;
}

SphereField::SphereField(VectorField3 v) : v_(std::move(v)) {
    const std::size_t n = v_.size();
    const double* x = v_.component(0).data();
    const double* y = v_.component(1).data();
    const double* z = v_.component(2).data();
    for (std::size_t i = 0; i < n; ++i) {
        const double r = std::sqrt(x[i] * x[i] + y[i] * y[i] + z[i] * z[i]);
        // written so NaN fails the check as well
        if (!(std::fabs(r - 1.0) <= unit_tolerance))
            throw ParameterOutOfRangeError("sphere field constraint violated: | |u|-1 | = " +
                                           std::to_string(std::fabs(r - 1.0)) + " at point " +
                                           std::to_string(i));
    }
}

SphereField::SphereField(VectorField3 v, bool) : v_(std::move(v)) {}

SphereField SphereField::project(const VectorField3& v) {
    VectorField3 w = v;
    kernels::active().normalize3(w.component(0).data(), w.component(1).data(),
                                 w.component(2).data(), w.size());
    return SphereField(std::move(w));
}

} // namespace hwm
