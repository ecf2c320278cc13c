#pragma once

#include <complex>
#include <string>
#include <vector>

#include "hwm/field.hpp"
#include "hwm/grid.hpp"

namespace hwm {

/** What to do with the k = 0 coefficient when the symbol is singular there. */
enum class ZeroModePolicy {
    Zero,              // project the mean out of the result
    IdentityOnMean,    // pass the mean through unchanged
    ErrorIfMeanNonzero // throw MeanNotZeroError unless |mean f| <= 1e-10 * max|f|
};

enum class SymbolKind {
    FracLaplacian,     // |k|^s
    RieszPotential,    // |k|^{-s}, s > 0; the k = 0 mode follows the policy
    RieszTransform,    // -i k_j / |k|
    PartialDerivative, // i k_j
    Laplacian,         // -|k|^2
    WaveCos,           // cos(t |k|)
    WaveSinc           // sin(t |k|) / |k|, value t at k = 0
};

/**
 * Fourier multiplier descriptor.  Symbols are either real and even or purely
 * imaginary and odd in k; odd symbols zero every Nyquist mode (|m_j| = N_j/2),
 * where the sign of k_j is not representable.  Output realness is enforced
 * structurally by the half-spectrum transform.
 */
struct SpectralMultiplier {
    SymbolKind kind = SymbolKind::FracLaplacian;
    double order = 0.0; // s
    int axis = 0;       // j
    double time = 0.0;  // t
    ZeroModePolicy zero_mode = ZeroModePolicy::Zero;

    static SpectralMultiplier frac_laplacian(double s);
    static SpectralMultiplier riesz_potential(
        double s, ZeroModePolicy policy = ZeroModePolicy::ErrorIfMeanNonzero);
    static SpectralMultiplier riesz_transform(int axis,
                                              ZeroModePolicy policy = ZeroModePolicy::Zero);
    static SpectralMultiplier partial_derivative(int axis);
    static SpectralMultiplier laplacian();
    static SpectralMultiplier wave_cos(double t);
    static SpectralMultiplier wave_sinc(double t);

    /** Purely imaginary, odd-in-k symbol? */
    bool odd() const {
        return kind == SymbolKind::RieszTransform || kind == SymbolKind::PartialDerivative;
    }
    bool singular_at_zero() const {
        return kind == SymbolKind::RieszPotential || kind == SymbolKind::RieszTransform ||
               (kind == SymbolKind::FracLaplacian && order < 0.0);
    }
    /** Symbol value at wavevector k (k != 0 for singular kinds). */
    double real_symbol(const double* k, int dim) const;   // even kinds
    double imag_symbol(const double* k, int dim) const;   // odd kinds: symbol = i * this
    std::string describe() const;
};

/**
 * Transient half-spectrum of a real field.  Coefficients are the unnormalized
 * forward transform sum_x f(x) exp(-i k.x); inverse() divides by the point
 * count.  Layout matches TorusGrid::for_each_mode.
 */
class Spectrum {
public:
    explicit Spectrum(const TorusGrid& grid)
        : grid_(grid), c_(grid.total_modes(), {0.0, 0.0}) {}
    const TorusGrid& grid() const { return grid_; }
    std::size_t size() const { return c_.size(); }
    std::complex<double>& operator[](std::size_t i) { return c_[i]; }
    const std::complex<double>& operator[](std::size_t i) const { return c_[i]; }
    double* raw() { return reinterpret_cast<double*>(c_.data()); }
    const double* raw() const { return reinterpret_cast<const double*>(c_.data()); }

private:
    TorusGrid grid_;
    std::vector<std::complex<double>> c_;
};

Spectrum forward(const ScalarField& f);
ScalarField inverse(const Spectrum& s);

/** Apply a Fourier multiplier; one forward and one inverse transform. */
ScalarField apply_multiplier(const ScalarField& f, const SpectralMultiplier& m);
VectorField3 apply_multiplier(const VectorField3& v, const SpectralMultiplier& m);

// named convenience operators
ScalarField fractional_laplacian(const ScalarField& f, double s);
VectorField3 fractional_laplacian(const VectorField3& v, double s);
ScalarField riesz_potential(const ScalarField& f, double s);
ScalarField riesz_transform(const ScalarField& f, int axis);
ScalarField partial_derivative(const ScalarField& f, int axis);
ScalarField laplacian(const ScalarField& f);
VectorField3 laplacian(const VectorField3& v);
std::vector<ScalarField> gradient(const ScalarField& f);

} // namespace hwm
