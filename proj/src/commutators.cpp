#include "hwm/commutators.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "hwm/errors.hpp"
#include "hwm/transform.hpp"

namespace hwm {

ScalarField leibniz(const ScalarField& f, const ScalarField& g, double s) {
    require_same_grid(f.grid(), g.grid());
    // grouped so swapping f and g performs the identical IEEE operations
    return fractional_laplacian(f * g, s) -
           (f * fractional_laplacian(g, s) + g * fractional_laplacian(f, s));
}

ScalarField leibniz3(const ScalarField& a, const ScalarField& b,
                     const ScalarField& g, double s) {
    require_same_grid(a.grid(), b.grid());
    require_same_grid(a.grid(), g.grid());
    ScalarField out = fractional_laplacian(a * b * g, s);
    out = out - a * fractional_laplacian(b * g, s);
    out = out - b * fractional_laplacian(a * g, s);
    out = out - g * fractional_laplacian(a * b, s);
    out = out + (a * b) * fractional_laplacian(g, s);
    out = out + (a * g) * fractional_laplacian(b, s);
    out = out + (b * g) * fractional_laplacian(a, s);
    return out;
}

ScalarField adjoint_leibniz(const ScalarField& f, const ScalarField& g, double s) {
    require_same_grid(f.grid(), g.grid());
    return f * fractional_laplacian(g, s) - fractional_laplacian(f, s) * g -
           fractional_laplacian(f * g, s);
}

ScalarField double_commutator(const ScalarField& f, const ScalarField& g,
                              double alpha, double beta) {
    require_same_grid(f.grid(), g.grid());
    if (!(alpha > 0.0 && alpha <= 1.0) || !(beta > 0.0 && beta <= 1.0))
        throw ParameterOutOfRangeError("double_commutator: alpha, beta must lie in (0, 1]");
    ScalarField inner = leibniz(f, g, alpha);
    return fractional_laplacian(inner, beta) -
           leibniz(fractional_laplacian(f, beta), g, alpha) -
           leibniz(f, fractional_laplacian(g, beta), alpha);
}

namespace {

void validate_quadrature(const TorusGrid& grid, const KernelQuadratureConfig& cfg) {
    if (grid.dim() != 1)
        throw UnsupportedDimensionError("kernel quadrature implemented for d = 1 only");
    if (!(cfg.truncation_radius > 0.0 && cfg.truncation_radius <= 0.5))
        throw ParameterOutOfRangeError("truncation_radius must lie in (0, 1/2]");
    if (!(cfg.eps_cut_cells >= 1.0))
        throw ParameterOutOfRangeError("eps_cut_cells must be >= 1");
    if (cfg.kernel_images < 0)
        throw ParameterOutOfRangeError("kernel_images must be >= 0");
}

/*
 * K[j] approximates sum over all periodic images of |j dx + m L|^(-e).
 * The explicit sum covers |m| <= M; the remainder is replaced by the
 * midpoint integral tail, which is O(M^(-e)) accurate.
 */
std::vector<double> periodic_kernel(const TorusGrid& grid, double e, int images) {
    const std::size_t n = grid.size(0);
    const double dx = grid.spacing(0);
    const double length = grid.length(0);
    std::vector<double> k(n, 0.0);
    for (std::size_t j = 1; j < n; ++j) {
        const double h = static_cast<double>(j) * dx;
        if (images == 0) {
            k[j] = std::pow(std::min(h, length - h), -e);
            continue;
        }
        double s = 0.0;
        for (int m = -images; m <= images; ++m)
            s += std::pow(std::abs(h + m * length), -e);
        const double edge = (images + 0.5) * length;
        s += (std::pow(edge + h, 1.0 - e) + std::pow(edge - h, 1.0 - e)) /
             ((e - 1.0) * length);
        k[j] = s;
    }
    return k;
}

/* Offsets allowed by the truncation radius and singularity cut. */
struct StencilEntry {
    std::size_t offset;
    double weight; // kernel value times dx
};

std::vector<StencilEntry> build_stencil(const TorusGrid& grid, double exponent,
                                        const KernelQuadratureConfig& cfg,
                                        bool half_range) {
    const std::size_t n = grid.size(0);
    const double dx = grid.spacing(0);
    const double length = grid.length(0);
    const std::vector<double> k = periodic_kernel(grid, exponent, cfg.kernel_images);
    std::vector<StencilEntry> st;
    const std::size_t jmax = half_range ? n / 2 : n - 1;
    for (std::size_t j = 1; j <= jmax; ++j) {
        const double h = static_cast<double>(j) * dx;
        const double r = std::min(h, length - h);
        if (r < cfg.eps_cut_cells * dx) continue;
        if (r > cfg.truncation_radius * length) continue;
        st.push_back({j, k[j] * dx});
    }
    return st;
}

double support_diameter(const ScalarField& f, const ScalarField& g) {
    const std::size_t n = f.size();
    const double thresh = 1e-13 * std::max(f.max_abs(), g.max_abs());
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < n; ++i)
        if (std::abs(f[i]) > thresh || std::abs(g[i]) > thresh) idx.push_back(i);
    if (idx.empty()) return 0.0;
    std::size_t max_gap = idx.front() + n - idx.back();
    for (std::size_t k = 1; k < idx.size(); ++k)
        max_gap = std::max(max_gap, idx[k] - idx[k - 1]);
    return static_cast<double>(n - max_gap + 1) * f.grid().spacing(0);
}

} // namespace

ScalarField leibniz_quadrature(const ScalarField& f, const ScalarField& g,
                               double s, const KernelQuadratureConfig& cfg) {
    require_same_grid(f.grid(), g.grid());
    validate_quadrature(f.grid(), cfg);
    if (cfg.mode == QuadratureMode::FirstDifference) {
        if (!(s > 0.0 && s < 1.0))
            throw ParameterOutOfRangeError("first-difference quadrature needs s in (0, 1)");
    } else {
        if (!(s > 0.0 && s < 2.0))
            throw ParameterOutOfRangeError("symmetric quadrature needs s in (0, 2)");
    }
    const TorusGrid& grid = f.grid();
    const std::size_t n = grid.size(0);
    const double diam = support_diameter(f, g);
    if (diam > grid.length(0) / 8.0)
        throw SupportTooWideError("joint support spans more than 1/8 of the period");

    const bool symmetric = cfg.mode == QuadratureMode::SymmetricSecondDifference;
    const std::vector<StencilEntry> st = build_stencil(grid, 1.0 + s, cfg, symmetric);
    const double* fa = f.data();
    const double* ga = g.data();
    ScalarField out(grid);
    double* oa = out.data();

    if (!symmetric) {
        for (std::size_t i = 0; i < n; ++i) {
            double acc = 0.0;
            for (const StencilEntry& e : st) {
                std::size_t y = i + e.offset;
                if (y >= n) y -= n;
                acc += (fa[i] - fa[y]) * (ga[i] - ga[y]) * e.weight;
            }
            oa[i] = acc;
        }
        return out;
    }

    for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (const StencilEntry& e : st) {
            std::size_t yp = i + e.offset;
            if (yp >= n) yp -= n;
            std::size_t ym = i + n - e.offset;
            if (ym >= n) ym -= n;
            double pair = (fa[i] - fa[yp]) * (ga[i] - ga[yp]);
            if (yp != ym) pair += (fa[i] - fa[ym]) * (ga[i] - ga[ym]);
            acc += pair * e.weight;
        }
        oa[i] = acc;
    }
    return out;
}

OracleFit leibniz_oracle(const ScalarField& f, const ScalarField& g,
                         double s, const KernelQuadratureConfig& cfg) {
    const ScalarField q = leibniz_quadrature(f, g, s, cfg);
    const ScalarField h = leibniz(f, g, s);
    const double qq = inner(q, q);
    const double hh = inner(h, h);
    const double c = qq > 0.0 ? inner(q, h) / qq : 0.0;
    OracleFit fit{c * q, c, 0.0};
    if (hh > 0.0) {
        const ScalarField resid = fit.scaled - h;
        fit.residual = std::sqrt(inner(resid, resid) / hh);
    }
    return fit;
}

ScalarField triple_kernel_value(const ScalarField& f, const ScalarField& g,
                                const ScalarField& h, TripleKernelVariant variant,
                                const KernelQuadratureConfig& cfg) {
    require_same_grid(f.grid(), g.grid());
    require_same_grid(f.grid(), h.grid());
    validate_quadrature(f.grid(), cfg);
    const TorusGrid& grid = f.grid();
    const double exponent = static_cast<double>(grid.dim()) + 1.0;
    const std::vector<StencilEntry> st = build_stencil(grid, exponent, cfg, false);
    const std::size_t n = grid.size(0);
    const double* fa = f.data();
    const double* ga = g.data();
    const double* ha = h.data();
    ScalarField out(grid);
    double* oa = out.data();
    const bool three = variant == TripleKernelVariant::ThreeDifferences;
    for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (const StencilEntry& e : st) {
            std::size_t y = i + e.offset;
            if (y >= n) y -= n;
            const double dfg = std::abs(fa[i] - fa[y]) * std::abs(ga[i] - ga[y]);
            acc += dfg * (three ? std::abs(ha[i] - ha[y]) : std::abs(ha[y])) * e.weight;
        }
        oa[i] = acc;
    }
    return out;
}

ScalarField pair_kernel_value(const ScalarField& f, const ScalarField& g,
                              double s, const KernelQuadratureConfig& cfg) {
    require_same_grid(f.grid(), g.grid());
    validate_quadrature(f.grid(), cfg);
    if (!(s > 0.0 && s <= 1.0))
        throw ParameterOutOfRangeError("pair_kernel_value needs s in (0, 1]");
    const TorusGrid& grid = f.grid();
    const double exponent = static_cast<double>(grid.dim()) + s;
    const std::vector<StencilEntry> st = build_stencil(grid, exponent, cfg, false);
    const std::size_t n = grid.size(0);
    const double* fa = f.data();
    const double* ga = g.data();
    ScalarField out(grid);
    double* oa = out.data();
    for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (const StencilEntry& e : st) {
            std::size_t y = i + e.offset;
            if (y >= n) y -= n;
            acc += std::abs(fa[i] - fa[y]) * std::abs(ga[i] - ga[y]) * e.weight;
        }
        oa[i] = acc;
    }
    return out;
}

} // namespace hwm
