#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "hwm/grid.hpp"

namespace hwm {

/**
 * Real scalar field sampled on a TorusGrid, stored row-major in physical
 * space.  Fields are value types; all operations return new fields and never
 * mutate their inputs.
 */
class ScalarField {
public:
    explicit ScalarField(const TorusGrid& grid)
        : grid_(grid), v_(grid.total_points(), 0.0) {}
    ScalarField(const TorusGrid& grid, std::vector<double> values);

    /** Sample fn(x) with x the point coordinates (dim() entries). */
    template <class F>
    static ScalarField from_function(const TorusGrid& grid, F&& fn) {
        ScalarField f(grid);
        grid.for_each_point([&](std::size_t i, const double* x) { f.v_[i] = fn(x); });
        return f;
    }

    const TorusGrid& grid() const { return grid_; }
    std::size_t size() const { return v_.size(); }
    double operator[](std::size_t i) const { return v_[i]; }
    double& operator[](std::size_t i) { return v_[i]; }
    const double* data() const { return v_.data(); }
    double* data() { return v_.data(); }
    const std::vector<double>& values() const { return v_; }

    double mean() const;
    double max_abs() const;
    bool all_finite() const;

private:
    TorusGrid grid_;
    std::vector<double> v_;
};

ScalarField operator+(const ScalarField& a, const ScalarField& b);
ScalarField operator-(const ScalarField& a, const ScalarField& b);
ScalarField operator*(const ScalarField& a, const ScalarField& b); // pointwise
ScalarField operator*(double c, const ScalarField& a);
ScalarField operator-(const ScalarField& a);

/** Throws ParameterOutOfRangeError unless a and b describe the same torus. */
void require_same_grid(const TorusGrid& a, const TorusGrid& b);

/** Sum of f over grid points times the cell volume. */
double integral(const ScalarField& f);
/** L^2 pairing integral of f*g. */
double inner(const ScalarField& f, const ScalarField& g);
ScalarField remove_mean(const ScalarField& f);

/** Triple of scalar fields regarded as an R^3-valued field. */
class VectorField3 {
public:
    explicit VectorField3(const TorusGrid& grid)
        : c_{ScalarField(grid), ScalarField(grid), ScalarField(grid)} {}
    VectorField3(ScalarField x, ScalarField y, ScalarField z);

    const TorusGrid& grid() const { return c_[0].grid(); }
    std::size_t size() const { return c_[0].size(); }
    const ScalarField& component(int i) const { return c_[i]; }
    ScalarField& component(int i) { return c_[i]; }

    /** Pointwise Euclidean magnitude |v(x)|. */
    ScalarField magnitude() const;

private:
    std::array<ScalarField, 3> c_;
};

VectorField3 operator+(const VectorField3& a, const VectorField3& b);
VectorField3 operator-(const VectorField3& a, const VectorField3& b);
VectorField3 operator*(double c, const VectorField3& a);
VectorField3 operator-(const VectorField3& a);
VectorField3 operator*(const ScalarField& s, const VectorField3& a); // pointwise scaling

VectorField3 cross(const VectorField3& a, const VectorField3& b);
ScalarField dot(const VectorField3& a, const VectorField3& b);

/**
 * Unit-sphere-valued field.  Construction validates the pointwise constraint
 * max_x | |u(x)| - 1 | <= unit_tolerance and finiteness.
 */
class SphereField {
public:
    static constexpr double unit_tolerance = 1e-12;

    explicit SphereField(VectorField3 v);
    /** Pointwise renormalization of v followed by validation. */
    static SphereField project(const VectorField3& v);

    const TorusGrid& grid() const { return v_.grid(); }
    const VectorField3& vec() const { return v_; }
    const ScalarField& component(int i) const { return v_.component(i); }

private:
    SphereField(VectorField3 v, bool); // already validated
    VectorField3 v_;
};

} // namespace hwm
