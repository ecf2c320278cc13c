#include <doctest.h>

#include <array>
#include <cmath>

#include "hwm/dynamics.hpp"
#include "hwm/errors.hpp"
#include "hwm/norms.hpp"
#include "hwm/random_fields.hpp"
#include "hwm/transform.hpp"

using namespace hwm;

namespace {

constexpr double two_pi = TorusGrid::two_pi;

double max_component_diff(const VectorField3& a, const VectorField3& b) {
    double m = 0.0;
    for (int i = 0; i < 3; ++i) m = std::max(m, (a.component(i) - b.component(i)).max_abs());
    return m;
}

double l2_norm(const VectorField3& v) {
    return lp_norm(v.magnitude(), 2.0);
}

} // namespace

TEST_CASE("flow direction is pointwise orthogonal to the state") {
    for (int d : {1, 2}) {
        const TorusGrid g = TorusGrid::cubic(d, d == 1 ? 128 : 24, two_pi);
        const SphereField u = random_sphere_field(g, 400 + d, 5, 1.5, 0.4);
        const VectorField3 rhs = hwm_rhs(u);
        CHECK(dot(u.vec(), rhs).max_abs() <= 1e-13 * std::max(1.0, rhs.magnitude().max_abs()));
    }
}

TEST_CASE("equator map is stationary") {
    const TorusGrid g = TorusGrid::cubic(1, 64, two_pi);
    const SphereField eq = equator_map(g);
    CHECK(hwm_rhs(eq).magnitude().max_abs() <= 1e-12);

    const Trajectory traj = integrate(eq, 1.0, 1e-3, TimeStepper::LieMidpoint, 250);
    for (const SphereField& s : traj.states)
        CHECK(max_component_diff(s.vec(), eq.vec()) <= 1e-8);
}

TEST_CASE("pointwise unit length survives long integrations") {
    const TorusGrid g = TorusGrid::cubic(1, 64, two_pi);
    const SphereField u0 = random_sphere_field(g, 401, 6, 1.5, 0.4);
    const Trajectory traj = integrate(u0, 1.0, 1e-3, TimeStepper::LieMidpoint, 1000);
    const ScalarField mag = traj.states.back().vec().magnitude();
    double worst = 0.0;
    for (double m : mag.values()) worst = std::max(worst, std::abs(m - 1.0));
    CHECK(worst <= 1e-12);
}

TEST_CASE("the two steppers converge to each other at second order") {
    const TorusGrid g = TorusGrid::cubic(1, 64, two_pi);
    const SphereField u0 = random_sphere_field(g, 402, 5, 1.5, 0.3);
    auto gap = [&](double dt) {
        const Trajectory a = integrate(u0, 0.1, dt, TimeStepper::LieMidpoint, 1u << 30);
        const Trajectory b = integrate(u0, 0.1, dt, TimeStepper::Rk4Project, 1u << 30);
        return max_component_diff(a.states.back().vec(), b.states.back().vec());
    };
    const double g1 = gap(1e-3);
    const double g2 = gap(5e-4);
    CHECK(g1 / g2 == doctest::Approx(4.0).epsilon(0.3));
}

TEST_CASE("energy and spin are conserved with second-order drift") {
    const TorusGrid g = TorusGrid::cubic(1, 128, two_pi);
    const SphereField u0 = bump_sphere_field(g, 0.35, 3.0);
    const double e0 = conserved_energy(u0);
    const std::array<double, 3> s0 = total_spin(u0);

    auto drift = [&](double dt) {
        const Trajectory traj = integrate(u0, 0.5, dt, TimeStepper::LieMidpoint, 50);
        double de = 0.0, ds = 0.0;
        for (const SphereField& u : traj.states) {
            de = std::max(de, std::abs(conserved_energy(u) - e0) /
                                  std::max(1.0, std::abs(e0)));
            const std::array<double, 3> sp = total_spin(u);
            for (int c = 0; c < 3; ++c)
                ds = std::max(ds, std::abs(sp[c] - s0[c]) / std::max(1.0, std::abs(s0[c])));
        }
        return std::array<double, 2>{de, ds};
    };

    const auto d1 = drift(1e-3);
    const auto d2 = drift(5e-4);
    CHECK(d1[0] <= 1e-6);
    CHECK(d1[1] <= 1e-6);
    // The overall conserved-quantity drift is spin-dominated and halves at the
    // second-order rate; the energy component alone decays faster still.
    const double ratio = std::max(d1[0], d1[1]) / std::max(d2[0], d2[1]);
    CHECK(ratio >= 3.5);
    CHECK(ratio <= 4.5);
}

TEST_CASE("waveform of the equator map is the map itself") {
    const TorusGrid g = TorusGrid::cubic(1, 128, two_pi);
    const SphereField eq = equator_map(g);
    const VectorField3 w = waveform_rhs(eq);
    CHECK(max_component_diff(w, eq.vec()) <= 1e-9);
}

TEST_CASE("waveform closes the second-order equation along trajectories") {
    const TorusGrid g = TorusGrid::cubic(1, 128, two_pi);
    const SphereField u0 = bump_sphere_field(g, 0.3, 2.0);
    // states every 0.01 from a much finer integration
    const Trajectory traj = integrate(u0, 0.2, 1e-4, TimeStepper::LieMidpoint, 100);

    auto residual = [&](std::size_t center, std::size_t stride) {
        const double delta = traj.times[center + stride] - traj.times[center];
        const VectorField3& um = traj.states[center - stride].vec();
        const VectorField3& uc = traj.states[center].vec();
        const VectorField3& up = traj.states[center + stride].vec();
        const VectorField3 second = (1.0 / (delta * delta)) * (up - 2.0 * uc + um);
        const SphereField sc(uc);
        const VectorField3 rhs = laplacian(uc) + waveform_rhs(sc);
        return l2_norm(second - rhs);
    };

    const double r2 = residual(10, 2); // delta = 0.02
    const double r1 = residual(10, 1); // delta = 0.01
    const double ratio = r2 / r1;
    CHECK(ratio >= 3.5);
    CHECK(ratio <= 4.5);
}

TEST_CASE("dirichlet energy via gradients equals the half-wave form") {
    const TorusGrid g = TorusGrid::cubic(2, 32, two_pi);
    const VectorField3 w = random_band_limited3(g, 403, 6, 2.0);
    const double a = dirichlet_energy_gradient(w);
    const double b = dirichlet_energy_halfwave(w);
    CHECK(std::abs(a - b) <= 1e-11 * std::max(1.0, a));
}

TEST_CASE("difference energy is quadratic in the rotation angle") {
    const TorusGrid g = TorusGrid::cubic(1, 64, two_pi);
    const SphereField u0 = bump_sphere_field(g, 0.3, 2.0);
    GronwallConfig cfg;
    cfg.t_final = 0.02;
    cfg.dt = 1e-3;
    cfg.alpha = 1.25;
    cfg.eps = 1e-3;
    const EnergyTrace t1 = gronwall_experiment(u0, cfg);
    cfg.eps = 2e-3;
    const EnergyTrace t2 = gronwall_experiment(u0, cfg);
    REQUIRE(!t1.energy.empty());
    REQUIRE(t1.energy.size() == t1.t.size());
    REQUIRE(t1.energy.size() == t1.sigma.size());
    const double ratio = t2.energy.front() / t1.energy.front();
    CHECK(ratio >= 3.9);
    CHECK(ratio <= 4.1);
}

TEST_CASE("identical initial data stays identical") {
    const TorusGrid g = TorusGrid::cubic(1, 64, two_pi);
    const SphereField u0 = bump_sphere_field(g, 0.3, 2.0);
    GronwallConfig cfg;
    cfg.t_final = 0.05;
    cfg.eps = 0.0;
    const EnergyTrace tr = gronwall_experiment(u0, cfg);
    for (double e : tr.energy) CHECK(e == 0.0);
}

TEST_CASE("rotation-fixed perturbations are rejected") {
    const TorusGrid g = TorusGrid::cubic(1, 64, two_pi);
    // amplitude 0 leaves the constant map q = (0,0,1)
    const SphereField u0 = bump_sphere_field(g, 0.0, 2.0);
    GronwallConfig cfg;
    cfg.eps = 1e-3;
    cfg.axis = {0.0, 0.0, 1.0};
    cfg.t_final = 0.01;
    CHECK_THROWS_AS(gronwall_experiment(u0, cfg), DegenerateEnergyError);
}

TEST_CASE("sigma is symmetric and rotation invariant") {
    const TorusGrid g = TorusGrid::cubic(1, 128, two_pi);
    const SphereField u = random_sphere_field(g, 404, 5, 1.5, 0.35);
    const SphereField v = random_sphere_field(g, 405, 5, 1.5, 0.35);
    CHECK(sigma(u, v, 1.25) == sigma(v, u, 1.25));

    const std::array<double, 3> axis{0.3, -0.5, 0.81};
    const SphereField ru = rotate_about_axis(u, axis, 0.9);
    const SphereField rv = rotate_about_axis(v, axis, 0.9);
    const double s1 = sigma(u, v, 1.25);
    const double s2 = sigma(ru, rv, 1.25);
    CHECK(std::abs(s1 - s2) <= 1e-10 * std::max(1.0, s1));
    const double e1 = pair_energy(u, v);
    const double e2 = pair_energy(ru, rv);
    CHECK(std::abs(e1 - e2) <= 1e-10 * std::max(1.0, e1));

    CHECK_THROWS_AS(sigma(u, v, 0.9), ParameterOutOfRangeError);
    CHECK_THROWS_AS(sigma(u, v, 1.5), ParameterOutOfRangeError);
}

TEST_CASE("exchange rule holds along simulated pairs") {
    const TorusGrid g = TorusGrid::cubic(1, 64, two_pi);
    const SphereField u0 = random_sphere_field(g, 406, 5, 1.5, 0.3);
    const SphereField v0 = random_sphere_field(g, 407, 5, 1.5, 0.3);
    const Trajectory tu = integrate(u0, 0.05, 1e-3, TimeStepper::LieMidpoint, 10);
    const Trajectory tv = integrate(v0, 0.05, 1e-3, TimeStepper::LieMidpoint, 10);
    for (std::size_t i = 0; i < tu.states.size(); ++i) {
        const SphereField& u = tu.states[i];
        const SphereField& v = tv.states[i];
        const VectorField3 du = hwm_rhs(u);
        const VectorField3 dv = hwm_rhs(v);
        const VectorField3 w = u.vec() - v.vec();
        const double lhs = integral(dot(v.vec(), du - dv));
        const double rhs = -integral(dot(w, du));
        CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(lhs)));
        // pointwise orthogonality along the flow
        CHECK(dot(u.vec(), du).max_abs() <= 1e-12);
    }
}

TEST_CASE("step validation") {
    const TorusGrid g = TorusGrid::cubic(1, 64, two_pi);
    const SphereField u = equator_map(g);
    CHECK_THROWS_AS(step(u, 0.0, TimeStepper::LieMidpoint), ParameterOutOfRangeError);
    CHECK_THROWS_AS(step(u, -1e-3, TimeStepper::Rk4Project), ParameterOutOfRangeError);
    CHECK_THROWS_AS(stepper_from_name("verlet"), ParameterOutOfRangeError);
    CHECK(stepper_name(TimeStepper::LieMidpoint) == "lie_midpoint");
    CHECK(stepper_name(TimeStepper::Rk4Project) == "rk4_project");
}
