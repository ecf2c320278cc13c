#include "hwm/random_fields.hpp"

#include <cmath>
#include <complex>

#include "hwm/errors.hpp"
#include "hwm/transform.hpp"

namespace hwm {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

constexpr double kTwoPi = 6.283185307179586476925286766559;

} // namespace

Rng::Rng(std::uint64_t seed) {
    std::uint64_t x = seed;
    for (auto& s : s_) s = splitmix64(x);
}

std::uint64_t Rng::next_u64() {
    // xoshiro256++
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double Rng::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double Rng::normal() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    const double u1 = 1.0 - uniform(); // (0, 1], keeps log finite
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    have_spare_ = true;
    spare_ = r * std::sin(kTwoPi * u2);
    return r * std::cos(kTwoPi * u2);
}

namespace {

// Canonical representative of a conjugate mode pair: positive last component,
// or (on the m_last = 0 plane) positive first nonzero component.
bool canonical_mode(const int* m, int dim) {
    if (m[dim - 1] > 0) return true;
    if (m[dim - 1] < 0) return false;
    for (int j = 0; j < dim - 1; ++j) {
        if (m[j] > 0) return true;
        if (m[j] < 0) return false;
    }
    return false; // the mean mode
}

std::size_t half_spectrum_index(const TorusGrid& g, const int* m) {
    std::size_t flat = 0;
    for (int j = 0; j < g.dim(); ++j) {
        const int extent = (j == g.dim() - 1) ? g.size(j) / 2 + 1 : g.size(j);
        const int idx = m[j] >= 0 ? m[j] : m[j] + g.size(j);
        flat = flat * static_cast<std::size_t>(extent) + static_cast<std::size_t>(idx);
    }
    return flat;
}

} // namespace

ScalarField random_band_limited(const TorusGrid& grid, std::uint64_t seed, int kmax,
                                double decay) {
    if (kmax < 1) throw ParameterOutOfRangeError("band limit kmax must be >= 1");
    for (int j = 0; j < grid.dim(); ++j)
        if (grid.size(j) < 2 * kmax + 2)
            throw ParameterOutOfRangeError("grid too coarse for band limit " +
                                           std::to_string(kmax) + ": N = " +
                                           std::to_string(grid.size(j)));
    Rng rng(seed);
    Spectrum spec(grid);
    const double scale = static_cast<double>(grid.total_points());
    const int d = grid.dim();

    // Lexicographic sweep over the mode cube; draws happen for every mode so
    // the stream position is independent of which modes are canonical.
    int m[TorusGrid::max_dim];
    for (int j = 0; j < d; ++j) m[j] = -kmax;
    while (true) {
        const double a = rng.normal();
        const double b = rng.normal();
        if (canonical_mode(m, d)) {
            double k2 = 0.0;
            for (int j = 0; j < d; ++j) {
                const double kj = grid.wavenumber(j, m[j]);
                k2 += kj * kj;
            }
            const double amp = std::pow(1.0 + std::sqrt(k2), -decay) * 0.5;
            const std::complex<double> c{amp * a, amp * b};
            spec[half_spectrum_index(grid, m)] += scale * c;
            if (m[d - 1] == 0) {
                int neg[TorusGrid::max_dim];
                for (int j = 0; j < d; ++j) neg[j] = -m[j];
                spec[half_spectrum_index(grid, neg)] += scale * std::conj(c);
            }
        }
        int j = d - 1;
        for (; j >= 0; --j) {
            if (++m[j] <= kmax) break;
            m[j] = -kmax;
        }
        if (j < 0) break;
    }
    return inverse(spec);
}

ScalarField random_band_limited(const TorusGrid& grid, std::uint64_t seed, int kmax) {
    return random_band_limited(grid, seed, kmax, 0.5 * (grid.dim() + 2));
}

VectorField3 random_band_limited3(const TorusGrid& grid, std::uint64_t seed, int kmax,
                                  double decay) {
    return {random_band_limited(grid, seed + 0x9e3779b97f4a7c15ULL, kmax, decay),
            random_band_limited(grid, seed + 0x3c6ef372fe94f82aULL, kmax, decay),
            random_band_limited(grid, seed + 0xdaa66d2c7ddf743fULL, kmax, decay)};
}

SphereField random_sphere_field(const TorusGrid& grid, std::uint64_t seed, int kmax,
                                double decay, double amplitude,
                                const std::array<double, 3>& q) {
    const double qn = std::sqrt(q[0] * q[0] + q[1] * q[1] + q[2] * q[2]);
    if (!(qn > 0.0)) throw ParameterOutOfRangeError("base direction must be nonzero");
    const double amp = std::min(std::fabs(amplitude), 0.5);
    VectorField3 w = random_band_limited3(grid, seed, kmax, decay);
    const double wmax = w.magnitude().max_abs();
    VectorField3 v(grid);
    const double s = wmax > 0.0 ? amp / wmax : 0.0;
    for (int i = 0; i < 3; ++i) {
        ScalarField comp = s * w.component(i);
        for (std::size_t p = 0; p < comp.size(); ++p) comp[p] += q[i] / qn;
        v.component(i) = std::move(comp);
    }
    return SphereField::project(v);
}

SphereField random_sphere_field(const TorusGrid& grid, std::uint64_t seed) {
    int nmin = grid.size(0);
    for (int j = 1; j < grid.dim(); ++j) nmin = std::min(nmin, grid.size(j));
    const int kmax = std::max(1, nmin / 4);
    return random_sphere_field(grid, seed, kmax, 0.5 * (grid.dim() + 2), 0.4);
}

SphereField equator_map(const TorusGrid& grid) {
    const double w = kTwoPi / grid.length(0);
    VectorField3 v(grid);
    v.component(0) = ScalarField::from_function(grid, [&](const double* x) {
        return std::cos(w * x[0]);
    });
    v.component(1) = ScalarField::from_function(grid, [&](const double* x) {
        return std::sin(w * x[0]);
    });
    return SphereField(std::move(v));
}

ScalarField periodic_bump(const TorusGrid& grid, double kappa) {
    return ScalarField::from_function(grid, [&](const double* x) {
        double e = 0.0;
        for (int j = 0; j < grid.dim(); ++j)
            e += std::cos(kTwoPi * x[j] / grid.length(j)) - 1.0;
        return std::exp(kappa * e);
    });
}

SphereField bump_sphere_field(const TorusGrid& grid, double amplitude, double kappa,
                              const std::array<double, 3>& q, const std::array<double, 3>& dir) {
    const double qn = std::sqrt(q[0] * q[0] + q[1] * q[1] + q[2] * q[2]);
    if (!(qn > 0.0)) throw ParameterOutOfRangeError("base direction must be nonzero");
    // orthonormalize the perturbation direction against q
    double e[3];
    double proj = (dir[0] * q[0] + dir[1] * q[1] + dir[2] * q[2]) / (qn * qn);
    for (int i = 0; i < 3; ++i) e[i] = dir[i] - proj * q[i];
    const double en = std::sqrt(e[0] * e[0] + e[1] * e[1] + e[2] * e[2]);
    if (!(en > 0.0))
        throw ParameterOutOfRangeError("perturbation direction parallel to base direction");
    const double amp = std::min(std::fabs(amplitude), 0.5);
    ScalarField bump = periodic_bump(grid, kappa);
    VectorField3 v(grid);
    for (int i = 0; i < 3; ++i) {
        ScalarField comp = (amp * e[i] / en) * bump;
        for (std::size_t p = 0; p < comp.size(); ++p) comp[p] += q[i] / qn;
        v.component(i) = std::move(comp);
    }
    return SphereField::project(v);
}

} // namespace hwm
