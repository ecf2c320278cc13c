#include "hwm/transform.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <tuple>

#include <fftw3.h>

#include "hwm/errors.hpp"
#include "hwm/kernels.hpp"

namespace hwm {

namespace {

// ---------------------------------------------------------------------------
// FFTW plan cache.  Plans are created once per grid shape with FFTW_ESTIMATE
// (deterministic, no measurement) and FFTW_UNALIGNED so the new-array execute
// functions accept ordinary vector storage.  Plan creation is serialized;
// execution on distinct arrays is thread-safe.
// ---------------------------------------------------------------------------

struct PlanSet {
    fftw_plan r2c = nullptr;
    fftw_plan c2r = nullptr;
    ~PlanSet() {
        if (r2c) fftw_destroy_plan(r2c);
        if (c2r) fftw_destroy_plan(c2r);
    }
};

using GridKey = std::pair<std::vector<int>, std::vector<double>>;

GridKey key_of(const TorusGrid& g) {
    GridKey k;
    for (int j = 0; j < g.dim(); ++j) {
        k.first.push_back(g.size(j));
        k.second.push_back(g.length(j));
    }
    return k;
}

std::mutex& plan_mutex() {
    static std::mutex m;
    return m;
}

const PlanSet& plans_for(const TorusGrid& g) {
    static std::map<GridKey, std::unique_ptr<PlanSet>> cache;
    std::lock_guard<std::mutex> lock(plan_mutex());
    auto& slot = cache[key_of(g)];
    if (!slot) {
        slot = std::make_unique<PlanSet>();
        int n[TorusGrid::max_dim];
        for (int j = 0; j < g.dim(); ++j) n[j] = g.size(j);
        std::vector<double> real_buf(g.total_points());
        std::vector<std::complex<double>> cplx_buf(g.total_modes());
        auto* cb = reinterpret_cast<fftw_complex*>(cplx_buf.data());
        const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
        slot->r2c = fftw_plan_dft_r2c(g.dim(), n, real_buf.data(), cb, flags);
        slot->c2r = fftw_plan_dft_c2r(g.dim(), n, cb, real_buf.data(), flags);
        if (!slot->r2c || !slot->c2r) throw Error("fftw plan creation failed for " + g.describe());
    }
    return *slot;
}

// ---------------------------------------------------------------------------
// Symbol tables.  A multiplier application multiplies the half spectrum by a
// per-mode table that already carries the 1/N normalization of the inverse
// transform and the zero-mode / Nyquist policy.  Tables for time-independent
// multipliers are cached per (grid, multiplier); wave symbols change with t
// and are built per call.
// ---------------------------------------------------------------------------

struct SymbolKey {
    GridKey grid;
    int kind;
    double order;
    int axis;
    int policy;
    bool operator<(const SymbolKey& o) const {
        return std::tie(grid, kind, order, axis, policy) <
               std::tie(o.grid, o.kind, o.order, o.axis, o.policy);
    }
};

std::shared_ptr<const std::vector<double>> build_table(const TorusGrid& g,
                                                       const SpectralMultiplier& m) {
    const double norm = 1.0 / static_cast<double>(g.total_points());
    auto table = std::make_shared<std::vector<double>>(g.total_modes());
    const bool odd = m.odd();
    g.for_each_mode([&](std::size_t ci, const double* k, bool nyquist) {
        if (odd && nyquist) {
            (*table)[ci] = 0.0;
            return;
        }
        double k2 = 0.0;
        for (int j = 0; j < g.dim(); ++j) k2 += k[j] * k[j];
        if (k2 == 0.0) {
            // Non-singular symbols take their natural value at k = 0; singular
            // ones are decided by the zero-mode policy.
            double v;
            if (m.singular_at_zero())
                v = (m.zero_mode == ZeroModePolicy::IdentityOnMean) ? 1.0 : 0.0;
            else
                v = odd ? m.imag_symbol(k, g.dim()) : m.real_symbol(k, g.dim());
            (*table)[ci] = v * norm;
            return;
        }
        (*table)[ci] = (odd ? m.imag_symbol(k, g.dim()) : m.real_symbol(k, g.dim())) * norm;
    });
    return table;
}

std::shared_ptr<const std::vector<double>> table_for(const TorusGrid& g,
                                                     const SpectralMultiplier& m) {
    if (m.kind == SymbolKind::WaveCos || m.kind == SymbolKind::WaveSinc) return build_table(g, m);
    static std::map<SymbolKey, std::shared_ptr<const std::vector<double>>> cache;
    static std::mutex mtx;
    const SymbolKey key{key_of(g), static_cast<int>(m.kind), m.order, m.axis,
                        static_cast<int>(m.zero_mode)};
    std::lock_guard<std::mutex> lock(mtx);
    auto& slot = cache[key];
    if (!slot) slot = build_table(g, m);
    return slot;
}

void validate(const TorusGrid& g, const SpectralMultiplier& m) {
    if ((m.kind == SymbolKind::RieszTransform || m.kind == SymbolKind::PartialDerivative) &&
        (m.axis < 0 || m.axis >= g.dim()))
        throw ParameterOutOfRangeError("multiplier axis " + std::to_string(m.axis) +
                                       " outside grid dimension " + std::to_string(g.dim()));
    if (m.kind == SymbolKind::RieszPotential && !(m.order > 0.0))
        throw ParameterOutOfRangeError("riesz potential order must be positive, got s = " +
                                       std::to_string(m.order));
    if (!std::isfinite(m.order) || !std::isfinite(m.time))
        throw ParameterOutOfRangeError("multiplier parameters must be finite");
    if (m.odd() && m.zero_mode == ZeroModePolicy::IdentityOnMean)
        throw ParameterOutOfRangeError(
            "identity-on-mean is not a real operation for the odd multiplier " + m.describe());
}

} // namespace

SpectralMultiplier SpectralMultiplier::frac_laplacian(double s) {
    SpectralMultiplier m;
    m.kind = SymbolKind::FracLaplacian;
    m.order = s;
    return m;
}

SpectralMultiplier SpectralMultiplier::riesz_potential(double s, ZeroModePolicy policy) {
    SpectralMultiplier m;
    m.kind = SymbolKind::RieszPotential;
    m.order = s;
    m.zero_mode = policy;
    return m;
}

SpectralMultiplier SpectralMultiplier::riesz_transform(int axis, ZeroModePolicy policy) {
    SpectralMultiplier m;
    m.kind = SymbolKind::RieszTransform;
    m.axis = axis;
    m.zero_mode = policy;
    return m;
}

SpectralMultiplier SpectralMultiplier::partial_derivative(int axis) {
    SpectralMultiplier m;
    m.kind = SymbolKind::PartialDerivative;
    m.axis = axis;
    return m;
}

SpectralMultiplier SpectralMultiplier::laplacian() {
    SpectralMultiplier m;
    m.kind = SymbolKind::Laplacian;
    return m;
}

SpectralMultiplier SpectralMultiplier::wave_cos(double t) {
    SpectralMultiplier m;
    m.kind = SymbolKind::WaveCos;
    m.time = t;
    return m;
}

SpectralMultiplier SpectralMultiplier::wave_sinc(double t) {
    SpectralMultiplier m;
    m.kind = SymbolKind::WaveSinc;
    m.time = t;
    return m;
}

double SpectralMultiplier::real_symbol(const double* k, int dim) const {
    double k2 = 0.0;
    for (int j = 0; j < dim; ++j) k2 += k[j] * k[j];
    const double kn = std::sqrt(k2);
    switch (kind) {
        case SymbolKind::FracLaplacian:
            if (kn == 0.0) return order == 0.0 ? 1.0 : 0.0;
            return std::pow(kn, order);
        case SymbolKind::RieszPotential:
            return std::pow(kn, -order);
        case SymbolKind::Laplacian:
            return -k2;
        case SymbolKind::WaveCos:
            return std::cos(time * kn);
        case SymbolKind::WaveSinc:
            return kn == 0.0 ? time : std::sin(time * kn) / kn;
        default:
            throw Error("real_symbol called on odd multiplier " + describe());
    }
}

double SpectralMultiplier::imag_symbol(const double* k, int dim) const {
    switch (kind) {
        case SymbolKind::PartialDerivative:
            return k[axis];
        case SymbolKind::RieszTransform: {
            double k2 = 0.0;
            for (int j = 0; j < dim; ++j) k2 += k[j] * k[j];
            const double kn = std::sqrt(k2);
            return kn == 0.0 ? 0.0 : -k[axis] / kn;
        }
        default:
            throw Error("imag_symbol called on even multiplier " + describe());
    }
}

std::string SpectralMultiplier::describe() const {
    std::ostringstream os;
    switch (kind) {
        case SymbolKind::FracLaplacian: os << "frac_laplacian(s=" << order << ")"; break;
        case SymbolKind::RieszPotential: os << "riesz_potential(s=" << order << ")"; break;
        case SymbolKind::RieszTransform: os << "riesz_transform(axis=" << axis << ")"; break;
        case SymbolKind::PartialDerivative: os << "partial_derivative(axis=" << axis << ")"; break;
        case SymbolKind::Laplacian: os << "laplacian"; break;
        case SymbolKind::WaveCos: os << "wave_cos(t=" << time << ")"; break;
        case SymbolKind::WaveSinc: os << "wave_sinc(t=" << time << ")"; break;
    }
    return os.str();
}

Spectrum forward(const ScalarField& f) {
    const PlanSet& plans = plans_for(f.grid());
    Spectrum out(f.grid());
    std::vector<double> in(f.values()); // r2c may not preserve its input
    fftw_execute_dft_r2c(plans.r2c, in.data(), reinterpret_cast<fftw_complex*>(out.raw()));
    return out;
}

ScalarField inverse(const Spectrum& s) {
    const PlanSet& plans = plans_for(s.grid());
    ScalarField out(s.grid());
    // c2r destroys its input, so work on a copy and normalize afterwards
    std::vector<std::complex<double>> tmp(s.size());
    std::copy(s.raw(), s.raw() + 2 * s.size(), reinterpret_cast<double*>(tmp.data()));
    fftw_execute_dft_c2r(plans.c2r, reinterpret_cast<fftw_complex*>(tmp.data()), out.data());
    const double norm = 1.0 / static_cast<double>(s.grid().total_points());
    kernels::active().scale(out.data(), out.data(), norm, out.size());
    return out;
}

ScalarField apply_multiplier(const ScalarField& f, const SpectralMultiplier& m) {
    const TorusGrid& g = f.grid();
    validate(g, m);
    if (m.singular_at_zero() && m.zero_mode == ZeroModePolicy::ErrorIfMeanNonzero) {
        const double mean = f.mean();
        if (std::fabs(mean) > 1e-10 * f.max_abs())
            throw MeanNotZeroError("singular multiplier " + m.describe() +
                                   " applied to field with mean " + std::to_string(mean));
    }
    const PlanSet& plans = plans_for(g);
    auto table = table_for(g, m);

    std::vector<double> in(f.values());
    std::vector<std::complex<double>> spec(g.total_modes());
    auto* cb = reinterpret_cast<fftw_complex*>(spec.data());
    fftw_execute_dft_r2c(plans.r2c, in.data(), cb);

    auto* sd = reinterpret_cast<double*>(spec.data());
    if (m.odd())
        kernels::active().mul_complex_imag(sd, table->data(), spec.size());
    else
        kernels::active().mul_complex_real(sd, table->data(), spec.size());

    ScalarField out(g);
    fftw_execute_dft_c2r(plans.c2r, cb, out.data());
    return out;
}

VectorField3 apply_multiplier(const VectorField3& v, const SpectralMultiplier& m) {
    return {apply_multiplier(v.component(0), m), apply_multiplier(v.component(1), m),
            apply_multiplier(v.component(2), m)};
}

ScalarField fractional_laplacian(const ScalarField& f, double s) {
    return apply_multiplier(f, SpectralMultiplier::frac_laplacian(s));
}

VectorField3 fractional_laplacian(const VectorField3& v, double s) {
    return apply_multiplier(v, SpectralMultiplier::frac_laplacian(s));
}

ScalarField riesz_potential(const ScalarField& f, double s) {
    return apply_multiplier(f, SpectralMultiplier::riesz_potential(s));
}

ScalarField riesz_transform(const ScalarField& f, int axis) {
    return apply_multiplier(f, SpectralMultiplier::riesz_transform(axis));
}

ScalarField partial_derivative(const ScalarField& f, int axis) {
    return apply_multiplier(f, SpectralMultiplier::partial_derivative(axis));
}

ScalarField laplacian(const ScalarField& f) {
    return apply_multiplier(f, SpectralMultiplier::laplacian());
}

VectorField3 laplacian(const VectorField3& v) {
    return apply_multiplier(v, SpectralMultiplier::laplacian());
}

std::vector<ScalarField> gradient(const ScalarField& f) {
    std::vector<ScalarField> out;
    out.reserve(f.grid().dim());
    for (int j = 0; j < f.grid().dim(); ++j) out.push_back(partial_derivative(f, j));
    return out;
}

} // namespace hwm
