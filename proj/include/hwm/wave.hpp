#pragma once

#include <vector>

#include "hwm/field.hpp"

namespace hwm {

struct WaveState {
    ScalarField position;
    ScalarField velocity;
};

/**
 * Exact propagator for v_tt = Lap v with v(0) = f, v_t(0) = g:
 *   v(t)^ = cos(t|k|) f^ + sin(t|k|)/|k| g^,
 * the zero mode following the |k| -> 0 limits (f^ + t g^, g^).
 * Negative t runs the flow backwards.
 */
WaveState free_wave(const ScalarField& f, const ScalarField& g, double t);

/**
 * Inhomogeneous solution of v_tt = Lap v + h at time t_final by Duhamel's
 * formula, the time integral approximated with the trapezoid rule on the
 * uniform grid s_j = j t_final/(M-1) carrying the forcing snapshots.
 * Second order in the snapshot spacing.
 */
WaveState duhamel(const ScalarField& f, const ScalarField& g,
                  const std::vector<ScalarField>& forcing, double t_final);

/**
 * Ratio of the two sides of the dispersive space-time bound
 *   || D^alpha v ||_{L^2_t L^{p,2}_x} <= C ( ||D^{d/2} f||_2
 *        + ||D^{d/2-1} g||_2 + integral_0^T ||D^{d/2-1} h(s)||_2 ds ),
 * p = 2d/(2 alpha - 1), v the Duhamel solution, time integrals by the
 * trapezoid rule on the forcing grid.  Requires d >= 4 and
 * alpha in (1/2, d + 1/2); returns 0 for identically zero data.
 */
double strichartz_quotient(const ScalarField& f, const ScalarField& g,
                           const std::vector<ScalarField>& forcing,
                           double t_final, double alpha);

} // namespace hwm
