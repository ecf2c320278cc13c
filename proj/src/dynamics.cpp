#include "hwm/dynamics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include <json.hpp>

#include "hwm/errors.hpp"
#include "hwm/norms.hpp"
#include "hwm/transform.hpp"

namespace hwm {

VectorField3 hwm_rhs_raw(const VectorField3& u) {
    return cross(u, fractional_laplacian(u, 1.0));
}

VectorField3 hwm_rhs(const SphereField& u) {
    return hwm_rhs_raw(u.vec());
}

std::string stepper_name(TimeStepper method) {
    return method == TimeStepper::LieMidpoint ? "lie_midpoint" : "rk4_project";
}

TimeStepper stepper_from_name(const std::string& name) {
    if (name == "lie_midpoint") return TimeStepper::LieMidpoint;
    if (name == "rk4_project") return TimeStepper::Rk4Project;
    throw ParameterOutOfRangeError("unknown time stepper: " + name);
}

namespace {

/*
 * du/dt = u x omega rotates u about omega clockwise (seen from the tip of
 * omega), i.e. by angle -|omega| dt in the right-handed convention.
 */
VectorField3 rotate_raw(const VectorField3& u, const VectorField3& omega, double dt) {
    require_same_grid(u.grid(), omega.grid());
    const std::size_t n = u.grid().total_points();
    VectorField3 out(u.grid());
    const double* ux = u.component(0).data();
    const double* uy = u.component(1).data();
    const double* uz = u.component(2).data();
    const double* wx = omega.component(0).data();
    const double* wy = omega.component(1).data();
    const double* wz = omega.component(2).data();
    double* ox = out.component(0).data();
    double* oy = out.component(1).data();
    double* oz = out.component(2).data();
    for (std::size_t i = 0; i < n; ++i) {
        const double wn = std::sqrt(wx[i] * wx[i] + wy[i] * wy[i] + wz[i] * wz[i]);
        if (wn == 0.0) {
            ox[i] = ux[i];
            oy[i] = uy[i];
            oz[i] = uz[i];
            continue;
        }
        const double nx = wx[i] / wn, ny = wy[i] / wn, nz = wz[i] / wn;
        const double theta = wn * dt;
        const double c = std::cos(theta), s = std::sin(theta);
        const double cxx = ny * uz[i] - nz * uy[i];
        const double cyy = nz * ux[i] - nx * uz[i];
        const double czz = nx * uy[i] - ny * ux[i];
        const double proj = (nx * ux[i] + ny * uy[i] + nz * uz[i]) * (1.0 - c);
        ox[i] = ux[i] * c - cxx * s + nx * proj;
        oy[i] = uy[i] * c - cyy * s + ny * proj;
        oz[i] = uz[i] * c - czz * s + nz * proj;
    }
    return out;
}

void require_finite_update(const VectorField3& w) {
    for (int i = 0; i < 3; ++i)
        if (!w.component(i).all_finite())
            throw StepUnstableError("time step produced a non-finite value");
}

std::atomic<bool> cfl_warned{false};

void maybe_warn_cfl(double dt, const VectorField3& omega) {
    if (cfl_warned.load(std::memory_order_relaxed)) return;
    const double m = omega.magnitude().max_abs();
    if (dt * m > 1.0 && !cfl_warned.exchange(true))
        std::fprintf(stderr,
                     "hwm: warning: dt * max|D^1 u| = %.3g > 1, rotations are "
                     "under-resolved\n",
                     dt * m);
}

} // namespace

SphereField rotate_by_field(const SphereField& u, const VectorField3& omega, double dt) {
    VectorField3 out = rotate_raw(u.vec(), omega, dt);
    require_finite_update(out);
    return SphereField(std::move(out));
}

SphereField rotate_about_axis(const SphereField& u, const std::array<double, 3>& axis,
                              double angle) {
    const double an = std::sqrt(axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]);
    if (!(an > 0.0) || !std::isfinite(an))
        throw ParameterOutOfRangeError("rotation axis must be nonzero");
    VectorField3 omega(u.grid());
    for (int i = 0; i < 3; ++i) {
        ScalarField c(u.grid());
        std::fill(c.data(), c.data() + c.size(), axis[i] / an);
        omega.component(i) = c;
    }
    VectorField3 out = rotate_raw(u.vec(), omega, -angle);
    return SphereField::project(out);
}

SphereField step(const SphereField& u, double dt, TimeStepper method) {
    if (!(dt > 0.0) || !std::isfinite(dt))
        throw ParameterOutOfRangeError("step: dt must be positive");
    if (method == TimeStepper::LieMidpoint) {
        const VectorField3 w = fractional_laplacian(u.vec(), 1.0);
        maybe_warn_cfl(dt, w);
        const SphereField uhalf = rotate_by_field(u, w, 0.5 * dt);
        const VectorField3 wmid = fractional_laplacian(uhalf.vec(), 1.0);
        return rotate_by_field(u, wmid, dt);
    }
    const VectorField3& u0 = u.vec();
    const VectorField3 k1 = hwm_rhs_raw(u0);
    if (!cfl_warned.load(std::memory_order_relaxed))
        maybe_warn_cfl(dt, fractional_laplacian(u0, 1.0));
    const VectorField3 k2 = hwm_rhs_raw(u0 + (0.5 * dt) * k1);
    const VectorField3 k3 = hwm_rhs_raw(u0 + (0.5 * dt) * k2);
    const VectorField3 k4 = hwm_rhs_raw(u0 + dt * k3);
    VectorField3 raw = u0 + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    require_finite_update(raw);
    const ScalarField mag = raw.magnitude();
    double lo = mag[0];
    for (double m : mag.values()) lo = std::min(lo, m);
    if (!(lo > 1e-8))
        throw StepUnstableError("time step collapsed the field norm");
    return SphereField::project(raw);
}

Trajectory integrate(const SphereField& u0, double t_final, double dt,
                     TimeStepper method, std::size_t store_every) {
    if (!(dt > 0.0) || !(t_final >= 0.0))
        throw ParameterOutOfRangeError("integrate: need dt > 0 and t_final >= 0");
    if (store_every == 0) store_every = 1;
    const std::size_t n = static_cast<std::size_t>(std::llround(t_final / dt));
    Trajectory traj;
    SphereField u = u0;
    traj.times.push_back(0.0);
    traj.states.push_back(u);
    for (std::size_t i = 1; i <= n; ++i) {
        u = step(u, dt, method);
        if (i % store_every == 0 || i == n) {
            traj.times.push_back(static_cast<double>(i) * dt);
            traj.states.push_back(u);
        }
    }
    return traj;
}

double conserved_energy(const SphereField& u) {
    return integral(dot(u.vec(), fractional_laplacian(u.vec(), 1.0)));
}

std::array<double, 3> total_spin(const SphereField& u) {
    return {integral(u.vec().component(0)), integral(u.vec().component(1)),
            integral(u.vec().component(2))};
}

namespace {

ScalarField grad_square(const VectorField3& u) {
    const TorusGrid& grid = u.grid();
    ScalarField out(grid);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < grid.dim(); ++j) {
            const ScalarField dij = partial_derivative(u.component(i), j);
            out = out + dij * dij;
        }
    return out;
}

} // namespace

std::array<VectorField3, 5> waveform_rhs_terms(const SphereField& u) {
    const VectorField3& uv = u.vec();
    const VectorField3 du = fractional_laplacian(uv, 1.0);
    const VectorField3 lap = laplacian(uv);

    std::array<VectorField3, 5> terms{
        VectorField3(u.grid()), VectorField3(u.grid()), VectorField3(u.grid()),
        VectorField3(u.grid()), VectorField3(u.grid())};
    terms[0] = grad_square(uv) * uv;
    terms[1] = -1.0 * (dot(du, du) * uv);
    terms[2] = dot(uv, du) * du;
    terms[3] = cross(uv, fractional_laplacian(cross(uv, du), 1.0));
    terms[4] = -1.0 * cross(uv, cross(uv, -1.0 * lap));
    return terms;
}

VectorField3 waveform_rhs(const SphereField& u) {
    std::array<VectorField3, 5> t = waveform_rhs_terms(u);
    return t[0] + t[1] + t[2] + t[3] + t[4];
}

double dirichlet_energy_gradient(const VectorField3& w) {
    double e = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < w.grid().dim(); ++j) {
            const ScalarField d = partial_derivative(w.component(i), j);
            e += inner(d, d);
        }
    return e;
}

double dirichlet_energy_halfwave(const VectorField3& w) {
    double e = 0.0;
    for (int i = 0; i < 3; ++i) {
        const ScalarField d = fractional_laplacian(w.component(i), 1.0);
        e += inner(d, d);
    }
    return e;
}

double pair_energy(const SphereField& u, const SphereField& v,
                   const VectorField3& du_dt, const VectorField3& dv_dt) {
    require_same_grid(u.grid(), v.grid());
    const VectorField3 w = u.vec() - v.vec();
    const VectorField3 wt = du_dt - dv_dt;
    double time_part = 0.0;
    for (int i = 0; i < 3; ++i) time_part += inner(wt.component(i), wt.component(i));
    return 0.5 * (dirichlet_energy_gradient(w) + time_part);
}

double pair_energy(const SphereField& u, const SphereField& v) {
    return pair_energy(u, v, hwm_rhs(u), hwm_rhs(v));
}

double sigma(const SphereField& u, const SphereField& v, double alpha) {
    require_same_grid(u.grid(), v.grid());
    const double d = static_cast<double>(u.grid().dim());
    if (!(alpha > 1.0 && alpha < d + 0.5))
        throw ParameterOutOfRangeError("sigma: need alpha in (1, d + 1/2)");
    const double p = 2.0 * d / (2.0 * alpha - 1.0);
    double total = 0.0;
    for (const SphereField* fp : {&u, &v}) {
        const ScalarField ha = fractional_laplacian(fp->vec(), alpha).magnitude();
        const double na = lp_norm(ha, p);
        const ScalarField h1 = fractional_laplacian(fp->vec(), 1.0).magnitude();
        const double n1 = lorentz_norm(h1, 2.0 * d, 2.0);
        total += na * na + n1 * n1;
    }
    return total;
}

EnergyTrace gronwall_experiment(const SphereField& u0, const GronwallConfig& cfg) {
    if (!(cfg.eps >= 0.0) || !std::isfinite(cfg.eps))
        throw ParameterOutOfRangeError("gronwall: eps must be finite and >= 0");
    if (!(cfg.energy_floor > 0.0))
        throw ParameterOutOfRangeError("gronwall: energy_floor must be positive");

    SphereField u = u0;
    SphereField v = cfg.eps == 0.0 ? u0 : rotate_about_axis(u0, cfg.axis, cfg.eps);

    EnergyTrace trace;
    trace.config = cfg;
    const std::size_t n = static_cast<std::size_t>(std::llround(cfg.t_final / cfg.dt));
    trace.t.reserve(n + 1);
    trace.energy.reserve(n + 1);
    trace.sigma.reserve(n + 1);

    for (std::size_t i = 0; i <= n; ++i) {
        trace.t.push_back(static_cast<double>(i) * cfg.dt);
        trace.energy.push_back(pair_energy(u, v));
        trace.sigma.push_back(sigma(u, v, cfg.alpha));
        if (i == 0 && cfg.eps != 0.0 && trace.energy[0] == 0.0)
            throw DegenerateEnergyError("perturbation left the initial data fixed");
        if (i < n) {
            u = step(u, cfg.dt, cfg.method);
            v = step(v, cfg.dt, cfg.method);
        }
    }

    double c = 0.0;
    bool found = false;
    for (std::size_t i = 0; i + 1 < trace.energy.size(); ++i) {
        const double e0 = trace.energy[i], e1 = trace.energy[i + 1];
        if (!(e0 > cfg.energy_floor) || !(e1 > cfg.energy_floor)) continue;
        const double seg = 0.5 * cfg.dt * (trace.sigma[i] + trace.sigma[i + 1]);
        if (!(seg > 0.0)) continue;
        const double slope = (std::log(e1) - std::log(e0)) / seg;
        if (!found || slope > c) c = slope;
        found = true;
    }
    trace.c_star = found ? c : 0.0;
    trace.bound_margin = gronwall_bound_ratio(trace, trace.c_star);
    return trace;
}

double gronwall_bound_ratio(const EnergyTrace& trace, double c) {
    if (trace.energy.empty()) return 0.0;
    const double e0 = trace.energy.front();
    if (!(e0 > 0.0)) return 0.0;
    double integ = 0.0;
    double worst = 0.0;
    for (std::size_t i = 0; i < trace.energy.size(); ++i) {
        if (i > 0)
            integ += 0.5 * (trace.t[i] - trace.t[i - 1]) *
                     (trace.sigma[i] + trace.sigma[i - 1]);
        worst = std::max(worst, trace.energy[i] / (e0 * std::exp(c * integ)));
    }
    return worst;
}

void write_energy_trace_csv(const EnergyTrace& trace, const std::string& csv_path) {
    std::FILE* out = std::fopen(csv_path.c_str(), "wb");
    if (!out) throw Error("cannot open " + csv_path);
    std::fprintf(out, "t,E,Sigma,logE\n");
    for (std::size_t i = 0; i < trace.t.size(); ++i) {
        const double e = trace.energy[i];
        const double le = e > 0.0 ? std::log(e) : -std::numeric_limits<double>::infinity();
        std::fprintf(out, "%.17g,%.17g,%.17g,%.17g\n", trace.t[i], e, trace.sigma[i], le);
    }
    std::fclose(out);
}

void write_energy_trace_sidecar(const EnergyTrace& trace, const std::string& json_path,
                                const std::map<std::string, std::string>& metadata) {
    nlohmann::json j;
    j["dt"] = trace.config.dt;
    j["t_final"] = trace.config.t_final;
    j["alpha"] = trace.config.alpha;
    j["eps"] = trace.config.eps;
    j["axis"] = trace.config.axis;
    j["method"] = stepper_name(trace.config.method);
    j["energy_floor"] = trace.config.energy_floor;
    j["n_samples"] = trace.t.size();
    j["c_star"] = trace.c_star;
    j["bound_margin"] = trace.bound_margin;
    j["E0"] = trace.energy.empty() ? 0.0 : trace.energy.front();
    for (const auto& [k, v] : metadata) j[k] = v;
    std::ofstream out(json_path, std::ios::binary);
    if (!out) throw Error("cannot open " + json_path);
    out << j.dump(2) << "\n";
}

} // namespace hwm
