#pragma once

#include "hwm/field.hpp"

namespace hwm {

/**
 * Bilinear Leibniz defect of the fractional derivative,
 *   H_s(f, g) = D^s(fg) - f D^s g - g D^s f.
 * Symmetric in (f, g) and H_s(f, const) = -const * D^s(1) = 0 up to
 * roundoff.  All spectral applications use the zero-at-zero convention.
 */
ScalarField leibniz(const ScalarField& f, const ScalarField& g, double s);

/**
 * Trilinear Leibniz defect
 *   H3_s(a, b, g) = D^s(abg) - a D^s(bg) - b D^s(ag) - g D^s(ab)
 *                 + ab D^s g + ag D^s b + bg D^s a.
 * On the grid D^s acts as a circulant with zero row sums, so
 * H3_s(a, b, g) = -sum_y M(x, y) (a(x)-a(y))(b(x)-b(y))(g(x)-g(y)),
 * which makes identities mixing pair and triple defects exact.
 */
ScalarField leibniz3(const ScalarField& a, const ScalarField& b,
                     const ScalarField& g, double s);

/**
 * Adjoint defect H*_s(f, g) = f D^s g - D^s f g - D^s(fg), defined by the
 * pairing  integral H*_s(f, g) h = integral g H_s(f, h).
 */
ScalarField adjoint_leibniz(const ScalarField& f, const ScalarField& g, double s);

/**
 * Iterated defect H_beta(H_alpha)(f, g) = D^beta H_alpha(f, g)
 * - H_alpha(D^beta f, g) - H_alpha(f, D^beta g).  Acting on e^(i xi x),
 * e^(i eta x) it multiplies by
 *   (|xi|^b - |eta|^b - |xi - eta|^b)(|xi|^a - |eta|^a - |xi - eta|^a)
 * on the combined mode xi + eta, with the middle sign convention fixed by
 * expanding both inner defects around the xi factor.
 */
ScalarField double_commutator(const ScalarField& f, const ScalarField& g,
                              double alpha, double beta);

/** Difference stencil used by the singular-integral quadratures. */
enum class QuadratureMode {
    SymmetricSecondDifference, // pairs +/- offsets; valid for s in (0, 2)
    FirstDifference,           // one-sided differences; valid for s in (0, 1)
};

struct KernelQuadratureConfig {
    QuadratureMode mode = QuadratureMode::SymmetricSecondDifference;
    /** Integration radius as a fraction of the period, in (0, 1/2]. */
    double truncation_radius = 0.5;
    /** Cells excluded around the singularity, >= 1. */
    double eps_cut_cells = 1.0;
    /** Periodic images summed into the kernel (plus an integral tail). */
    int kernel_images = 64;
};

/**
 * Direct midpoint quadrature of the singular integral
 *   Q(x) = integral (f(x)-f(y))(g(x)-g(y)) / |x-y|^{1+s} dy
 * on the 1d torus, with the kernel periodized over images.  No constant is
 * applied; leibniz_oracle fits one.  Throws UnsupportedDimensionError off
 * d = 1 and SupportTooWideError when the joint support of f and g covers
 * more than 1/8 of the period (the truncated kernel then sees its own
 * images and the comparison with the spectral defect degrades).
 */
ScalarField leibniz_quadrature(const ScalarField& f, const ScalarField& g,
                               double s, const KernelQuadratureConfig& cfg = {});

struct OracleFit {
    ScalarField scaled;    // c times the quadrature field
    double c = 0.0;        // fitted constant, H ~ c Q in least squares
    double residual = 0.0; // ||c Q - H||_2 / ||H||_2
};

/**
 * Fits the quadrature against the spectral defect: c minimizing
 * ||c Q - H_s(f,g)||_2, plus the relative residual.  The fitted c recovers
 * (minus) the normalization of the fractional Laplacian kernel.  Zero data
 * skips the fit and reports c = 0, residual = 0.
 */
OracleFit leibniz_oracle(const ScalarField& f, const ScalarField& g,
                         double s, const KernelQuadratureConfig& cfg = {});

enum class TripleKernelVariant {
    ThreeDifferences,      // |df| |dg| |dh| / |x-y|^{d+1}
    TwoDifferencesTimesH,  // |df| |dg| |h(y)| / |x-y|^{d+1}
};

/**
 * Pointwise trilinear singular integrals on the 1d torus with the
 * periodized kernel |x-y|^{-(d+1)}; absolute values make these positive
 * majorants rather than identities.  Trilinear in the amplitudes.
 */
ScalarField triple_kernel_value(const ScalarField& f, const ScalarField& g,
                                const ScalarField& h, TripleKernelVariant variant,
                                const KernelQuadratureConfig& cfg = {});

/**
 * Bilinear majorant integral |df| |dg| / |x-y|^{d+s} dy, periodized kernel,
 * 1d torus, s in (0, 1].
 */
ScalarField pair_kernel_value(const ScalarField& f, const ScalarField& g,
                              double s, const KernelQuadratureConfig& cfg = {});

} // namespace hwm
