#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "hwm/field.hpp"

namespace hwm {

/** Right-hand side u x D^1 u without the unit-length assumption. */
VectorField3 hwm_rhs_raw(const VectorField3& u);

/** Right-hand side of the sphere-valued flow, u x D^1 u. */
VectorField3 hwm_rhs(const SphereField& u);

enum class TimeStepper {
    LieMidpoint, // pointwise Rodrigues rotations, midpoint frequency
    Rk4Project,  // classical RK4 on raw fields, renormalized afterwards
};

std::string stepper_name(TimeStepper method);
TimeStepper stepper_from_name(const std::string& name);

/**
 * Rotates u(x) about omega(x) by the exact solution of du/dt = u x omega
 * over a time dt, pointwise.  Preserves |u| = 1 to roundoff.
 */
SphereField rotate_by_field(const SphereField& u, const VectorField3& omega, double dt);

/** Rigid rotation of every value about a fixed axis. */
SphereField rotate_about_axis(const SphereField& u, const std::array<double, 3>& axis,
                              double angle);

/**
 * One time step.  Emits a one-time stderr warning when dt * max |D^1 u|
 * exceeds 1 and throws StepUnstableError when the update leaves the
 * representable range.
 */
SphereField step(const SphereField& u, double dt, TimeStepper method);

struct Trajectory {
    std::vector<double> times;
    std::vector<SphereField> states;
};

/**
 * Integrates to t_final (rounded to a whole number of steps), storing
 * every store_every-th state plus the final one.
 */
Trajectory integrate(const SphereField& u0, double t_final, double dt,
                     TimeStepper method, std::size_t store_every = 1);

/** Conserved energy, integral of <u, D^1 u>. */
double conserved_energy(const SphereField& u);

/** Conserved total spin, componentwise integral of u. */
std::array<double, 3> total_spin(const SphereField& u);

/**
 * Second-order waveform of the flow, the five terms being
 *   u |grad u|^2, -u |D^1 u|^2, D^1 u <u, D^1 u>,
 *   u x D^1(u x D^1 u), -u x (u x (-Lap u)).
 */
VectorField3 waveform_rhs(const SphereField& u);
std::array<VectorField3, 5> waveform_rhs_terms(const SphereField& u);

/** Sum over components of ||grad w^i||_{L^2}^2. */
double dirichlet_energy_gradient(const VectorField3& w);

/** Sum over components of ||D^1 w^i||_{L^2}^2; equals the gradient form. */
double dirichlet_energy_halfwave(const VectorField3& w);

/**
 * Energy of the difference of two sphere flows,
 *   E = 1/2 ( sum_i ||grad (u - v)^i||_2^2 + ||du_dt - dv_dt||_2^2 ),
 * with the time derivatives supplied by the caller.
 */
double pair_energy(const SphereField& u, const SphereField& v,
                   const VectorField3& du_dt, const VectorField3& dv_dt);

/** Convenience overload taking the time derivatives from the flow itself. */
double pair_energy(const SphereField& u, const SphereField& v);

/**
 * Controlling functional
 *   Sigma = ||D^a u||^2_{L^p} + ||D^a v||^2_{L^p}
 *         + ||D^1 u||^2_{L^{2d,2}} + ||D^1 v||^2_{L^{2d,2}},
 * p = 2d/(2a - 1), applied to the pointwise magnitudes.  Requires
 * alpha in (1, d + 1/2).
 */
double sigma(const SphereField& u, const SphereField& v, double alpha);

struct GronwallConfig {
    double t_final = 0.5;
    double dt = 1e-3;
    double alpha = 1.25;
    double eps = 1e-3;
    std::array<double, 3> axis{1.0, 0.0, 0.0};
    TimeStepper method = TimeStepper::LieMidpoint;
    /** Energies below this floor are excluded from the log-slope fit. */
    double energy_floor = 1e-28;
};

struct EnergyTrace {
    std::vector<double> t;
    std::vector<double> energy;
    std::vector<double> sigma;
    double c_star = 0.0;       // max log-slope of E per unit integral of Sigma
    double bound_margin = 0.0; // max E_n / (E_0 exp(c_star I_n))
    GronwallConfig config;
};

/**
 * Evolves u0 and its eps-rotated copy, records E and Sigma along the way,
 * and fits the smallest constant for which
 *   E(t) <= E(0) exp( c integral_0^t Sigma )
 * holds interval by interval.  eps = 0 propagates a bitwise-identical
 * copy, so E vanishes identically; a nonzero eps whose rotation fixes u0
 * throws DegenerateEnergyError.
 */
EnergyTrace gronwall_experiment(const SphereField& u0, const GronwallConfig& cfg);

/** Max of E_n / (E_0 exp(c I_n)) over the trace for an external c. */
double gronwall_bound_ratio(const EnergyTrace& trace, double c);

void write_energy_trace_csv(const EnergyTrace& trace, const std::string& csv_path);
void write_energy_trace_sidecar(const EnergyTrace& trace, const std::string& json_path,
                                const std::map<std::string, std::string>& metadata);

} // namespace hwm
