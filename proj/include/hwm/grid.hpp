#pragma once

#include <array>
#include <cstddef>
#include <string>

namespace hwm {

/**
 * Uniform rectangular grid on the periodic torus prod_j [0, L_j), dimension
 * 1..5.  Point (i_1,...,i_d) sits at x_j = i_j * L_j / N_j; storage is
 * row-major with the last axis fastest.  The Fourier lattice along axis j is
 * k_j = 2*pi*m_j / L_j with integer m_j in {-N_j/2, ..., N_j/2 - 1}.
 *
 * Real-to-complex transforms store the half spectrum: the last axis keeps
 * mode indices 0..N_d/2 and the conjugate half is implicit.
 */
class TorusGrid {
public:
    static constexpr int max_dim = 5;

    TorusGrid(const int* sizes, const double* lengths, int dim);
    TorusGrid(std::initializer_list<int> sizes, std::initializer_list<double> lengths);

    /** Cube with N points per axis and edge length L, dimension d. */
    static TorusGrid cubic(int dim, int n, double length);

    int dim() const { return dim_; }
    int size(int axis) const { return sizes_[axis]; }
    double length(int axis) const { return lengths_[axis]; }
    double spacing(int axis) const { return lengths_[axis] / sizes_[axis]; }
    std::size_t total_points() const { return total_points_; }
    /** Number of stored half-spectrum coefficients. */
    std::size_t total_modes() const { return total_modes_; }
    /** Volume of one grid cell, prod_j L_j / N_j. */
    double cell_volume() const { return cell_volume_; }
    double volume() const { return cell_volume_ * static_cast<double>(total_points_); }

    double coordinate(int axis, int index) const { return spacing(axis) * index; }

    /** m_j for a full-lattice storage index along axis j (negative past N/2). */
    int mode_number(int axis, int index) const {
        return index < sizes_[axis] - index ? index : index - sizes_[axis];
    }
    double wavenumber(int axis, int mode) const;

    void unravel(std::size_t flat, int* idx) const;
    std::size_t ravel(const int* idx) const;

    bool operator==(const TorusGrid& other) const;
    bool operator!=(const TorusGrid& other) const { return !(*this == other); }

    std::string describe() const; // e.g. "T^3 16x16x16 L=6.283,..."

    /**
     * Visit every stored half-spectrum coefficient in storage order.
     * Callback signature: f(std::size_t ci, const double* k, bool nyquist)
     * where k has dim() entries and nyquist flags |m_j| == N_j/2 on any axis.
     */
    template <class F>
    void for_each_mode(F&& f) const {
        int idx[max_dim] = {0, 0, 0, 0, 0};
        const int last = dim_ - 1;
        for (std::size_t ci = 0; ci < total_modes_; ++ci) {
            double k[max_dim] = {0.0, 0.0, 0.0, 0.0, 0.0};
            bool nyq = false;
            for (int j = 0; j < dim_; ++j) {
                const int half = sizes_[j] / 2;
                const int m = (j == last) ? idx[j]
                                          : (idx[j] <= half ? idx[j] : idx[j] - sizes_[j]);
                // the full-lattice index N/2 and the r2c index N/2 are both Nyquist
                if (m == half || m == -half) nyq = true;
                k[j] = two_pi * m / lengths_[j];
            }
            f(ci, static_cast<const double*>(k), nyq);
            for (int j = last; j >= 0; --j) {
                const int extent = (j == last) ? sizes_[j] / 2 + 1 : sizes_[j];
                if (++idx[j] < extent) break;
                idx[j] = 0;
            }
        }
    }

    /**
     * Visit every grid point in storage order.
     * Callback signature: f(std::size_t flat, const double* x).
     */
    template <class F>
    void for_each_point(F&& f) const {
        int idx[max_dim] = {0, 0, 0, 0, 0};
        for (std::size_t flat = 0; flat < total_points_; ++flat) {
            double x[max_dim] = {0.0, 0.0, 0.0, 0.0, 0.0};
            for (int j = 0; j < dim_; ++j) x[j] = spacing(j) * idx[j];
            f(flat, static_cast<const double*>(x));
            for (int j = dim_ - 1; j >= 0; --j) {
                if (++idx[j] < sizes_[j]) break;
                idx[j] = 0;
            }
        }
    }

    static constexpr double two_pi = 6.283185307179586476925286766559;

private:
    void validate() const;
    int dim_ = 0;
    std::array<int, max_dim> sizes_{};
    std::array<double, max_dim> lengths_{};
    std::size_t total_points_ = 0;
    std::size_t total_modes_ = 0;
    double cell_volume_ = 0.0;
};

} // namespace hwm
