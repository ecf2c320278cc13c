#pragma once

#include <array>
#include <cstdint>

#include "hwm/field.hpp"

namespace hwm {

/**
 * Deterministic random stream.  The uniform/normal mappings are implemented
 * by hand (bit shift and Box-Muller) so sequences are identical across
 * standard-library implementations for a given seed.
 */
class Rng {
public:
    explicit Rng(std::uint64_t seed);
    std::uint64_t next_u64();
    double uniform();  // [0, 1)
    double normal();   // standard normal

private:
    std::uint64_t s_[4];
    bool have_spare_ = false;
    double spare_ = 0.0;
};

/**
 * Mean-zero real field with spectrum supported on integer modes
 * 0 < max_j |m_j| <= kmax and amplitude profile (1 + |k|)^{-decay} with
 * seeded Gaussian coefficients.  The draw order is independent of the grid
 * resolution, so the same (seed, kmax, decay) describes the same continuum
 * field on any grid with N_j >= 2*kmax + 2.
 */
ScalarField random_band_limited(const TorusGrid& grid, std::uint64_t seed, int kmax,
                                double decay);
/** Same with the default decay exponent (d + 2) / 2. */
ScalarField random_band_limited(const TorusGrid& grid, std::uint64_t seed, int kmax);

VectorField3 random_band_limited3(const TorusGrid& grid, std::uint64_t seed, int kmax,
                                  double decay);

/**
 * Random sphere-valued field: pointwise renormalization of Q + w where w is a
 * band-limited perturbation rescaled to max |w| = amplitude.  Amplitudes are
 * clamped to 1/2 so Q + w stays away from the origin.
 */
SphereField random_sphere_field(const TorusGrid& grid, std::uint64_t seed, int kmax,
                                double decay, double amplitude,
                                const std::array<double, 3>& q = {0.0, 0.0, 1.0});
SphereField random_sphere_field(const TorusGrid& grid, std::uint64_t seed);

/**
 * The great-circle map u(x) = (cos(2 pi x_0 / L_0), sin(2 pi x_0 / L_0), 0),
 * constant along all other axes.
 */
SphereField equator_map(const TorusGrid& grid);

/**
 * Smooth localized bump exp(kappa * (cos(2 pi x_j / L_j) - 1)) multiplied over
 * axes; equals 1 at the origin and decays away from it.
 */
ScalarField periodic_bump(const TorusGrid& grid, double kappa);

/** Bump-perturbed constant map, the default initial datum for simulations. */
SphereField bump_sphere_field(const TorusGrid& grid, double amplitude, double kappa,
                              const std::array<double, 3>& q = {0.0, 0.0, 1.0},
                              const std::array<double, 3>& dir = {1.0, 0.0, 0.0});

} // namespace hwm
