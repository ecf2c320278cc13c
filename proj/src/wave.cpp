#include "hwm/wave.hpp"

#include <cmath>
#include <limits>

#include "hwm/errors.hpp"
#include "hwm/norms.hpp"
#include "hwm/transform.hpp"

namespace hwm {

namespace {

std::vector<double> mode_norms(const TorusGrid& grid) {
    std::vector<double> kn(grid.total_modes());
    grid.for_each_mode([&](std::size_t ci, const double* k, bool) {
        double s = 0.0;
        for (int j = 0; j < grid.dim(); ++j) s += k[j] * k[j];
        kn[ci] = std::sqrt(s);
    });
    return kn;
}

double sinc_wave(double t, double kn) {
    return kn > 0.0 ? std::sin(t * kn) / kn : t;
}

void check_forcing(const TorusGrid& grid, const std::vector<ScalarField>& forcing,
                   double t_final) {
    if (forcing.size() < 2)
        throw ParameterOutOfRangeError("duhamel: need at least two forcing snapshots");
    if (!(t_final > 0.0) || !std::isfinite(t_final))
        throw ParameterOutOfRangeError("duhamel: t_final must be positive");
    for (const ScalarField& h : forcing) require_same_grid(grid, h.grid());
}

} // namespace

WaveState free_wave(const ScalarField& f, const ScalarField& g, double t) {
    require_same_grid(f.grid(), g.grid());
    if (!std::isfinite(t)) throw ParameterOutOfRangeError("free_wave: t must be finite");
    const TorusGrid& grid = f.grid();
    const Spectrum ff = forward(f);
    const Spectrum gg = forward(g);
    Spectrum pos(grid), vel(grid);
    const std::vector<double> kn = mode_norms(grid);
    for (std::size_t ci = 0; ci < kn.size(); ++ci) {
        const double c = std::cos(t * kn[ci]);
        const double s = sinc_wave(t, kn[ci]);
        pos[ci] = c * ff[ci] + s * gg[ci];
        vel[ci] = -kn[ci] * std::sin(t * kn[ci]) * ff[ci] + c * gg[ci];
    }
    return {inverse(pos), inverse(vel)};
}

WaveState duhamel(const ScalarField& f, const ScalarField& g,
                  const std::vector<ScalarField>& forcing, double t_final) {
    require_same_grid(f.grid(), g.grid());
    check_forcing(f.grid(), forcing, t_final);
    const TorusGrid& grid = f.grid();
    const std::size_t m = forcing.size();
    const double ds = t_final / static_cast<double>(m - 1);
    const std::vector<double> kn = mode_norms(grid);

    const Spectrum ff = forward(f);
    const Spectrum gg = forward(g);
    Spectrum pos(grid), vel(grid);
    for (std::size_t ci = 0; ci < kn.size(); ++ci) {
        const double c = std::cos(t_final * kn[ci]);
        pos[ci] = c * ff[ci] + sinc_wave(t_final, kn[ci]) * gg[ci];
        vel[ci] = -kn[ci] * std::sin(t_final * kn[ci]) * ff[ci] + c * gg[ci];
    }
    for (std::size_t j = 0; j < m; ++j) {
        const double w = ds * ((j == 0 || j == m - 1) ? 0.5 : 1.0);
        const double tau = t_final - static_cast<double>(j) * ds;
        const Spectrum hh = forward(forcing[j]);
        for (std::size_t ci = 0; ci < kn.size(); ++ci) {
            pos[ci] += w * sinc_wave(tau, kn[ci]) * hh[ci];
            vel[ci] += w * std::cos(tau * kn[ci]) * hh[ci];
        }
    }
    return {inverse(pos), inverse(vel)};
}

double strichartz_quotient(const ScalarField& f, const ScalarField& g,
                           const std::vector<ScalarField>& forcing,
                           double t_final, double alpha) {
    require_same_grid(f.grid(), g.grid());
    check_forcing(f.grid(), forcing, t_final);
    const TorusGrid& grid = f.grid();
    const double d = static_cast<double>(grid.dim());
    if (grid.dim() < 4)
        throw ParameterOutOfRangeError("strichartz_quotient: requires dimension >= 4");
    if (!(alpha > 0.5 && alpha < d + 0.5))
        throw ParameterOutOfRangeError("strichartz_quotient: need alpha in (1/2, d + 1/2)");
    const double p = 2.0 * d / (2.0 * alpha - 1.0);

    const std::size_t m = forcing.size();
    const double ds = t_final / static_cast<double>(m - 1);
    const std::vector<double> kn = mode_norms(grid);
    std::vector<double> ka(kn.size());
    for (std::size_t ci = 0; ci < kn.size(); ++ci)
        ka[ci] = kn[ci] > 0.0 ? std::pow(kn[ci], alpha) : 0.0;

    const Spectrum ff = forward(f);
    const Spectrum gg = forward(g);
    std::vector<Spectrum> hh;
    hh.reserve(m);
    for (const ScalarField& h : forcing) hh.push_back(forward(h));

    double lhs_sq = 0.0;
    Spectrum spec(grid);
    for (std::size_t k = 0; k < m; ++k) {
        const double tk = static_cast<double>(k) * ds;
        for (std::size_t ci = 0; ci < kn.size(); ++ci) {
            spec[ci] = std::cos(tk * kn[ci]) * ff[ci] + sinc_wave(tk, kn[ci]) * gg[ci];
        }
        for (std::size_t j = 0; j <= k && k > 0; ++j) {
            const double w = ds * ((j == 0 || j == k) ? 0.5 : 1.0);
            const double tau = tk - static_cast<double>(j) * ds;
            for (std::size_t ci = 0; ci < kn.size(); ++ci)
                spec[ci] += w * sinc_wave(tau, kn[ci]) * hh[j][ci];
        }
        for (std::size_t ci = 0; ci < kn.size(); ++ci) spec[ci] *= ka[ci];
        const double norm_k = lorentz_norm(inverse(spec), p, 2.0);
        const double wk = ds * ((k == 0 || k == m - 1) ? 0.5 : 1.0);
        lhs_sq += wk * norm_k * norm_k;
    }
    const double lhs = std::sqrt(lhs_sq);

    double rhs = lp_norm(fractional_laplacian(f, 0.5 * d), 2.0) +
                 lp_norm(fractional_laplacian(g, 0.5 * d - 1.0), 2.0);
    for (std::size_t j = 0; j < m; ++j) {
        const double w = ds * ((j == 0 || j == m - 1) ? 0.5 : 1.0);
        rhs += w * lp_norm(fractional_laplacian(forcing[j], 0.5 * d - 1.0), 2.0);
    }
    if (lhs == 0.0) return 0.0;
    if (rhs == 0.0) return std::numeric_limits<double>::infinity();
    return lhs / rhs;
}

} // namespace hwm
