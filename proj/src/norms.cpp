#include "hwm/norms.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include <json.hpp>

#include "hwm/errors.hpp"
#include "hwm/kernels.hpp"
#include "hwm/transform.hpp"

namespace hwm {

double lp_norm(const ScalarField& f, double p) {
    if (std::isinf(p) && p > 0) return f.max_abs();
    if (!(p >= 1.0) || !std::isfinite(p))
        throw ParameterOutOfRangeError("lp_norm: p must be in [1, inf]");
    const double* a = f.data();
    const std::size_t n = f.size();
    const double dv = f.grid().cell_volume();
    double s = 0.0;
    if (p == 1.0) {
        for (std::size_t i = 0; i < n; ++i) s += std::abs(a[i]);
    } else if (p == 2.0) {
        s = kernels::active().dot(a, a, n);
    } else {
        for (std::size_t i = 0; i < n; ++i) s += std::pow(std::abs(a[i]), p);
    }
    return std::pow(s * dv, 1.0 / p);
}

double lorentz_norm(const ScalarField& f, double p, double q) {
    if (!(p > 1.0) || !std::isfinite(p))
        throw ParameterOutOfRangeError("lorentz_norm: p must be in (1, inf)");
    const bool qinf = std::isinf(q) && q > 0;
    if (!qinf && !(q >= 1.0 && std::isfinite(q)))
        throw ParameterOutOfRangeError("lorentz_norm: q must be in [1, inf]");

    std::vector<double> a(f.size());
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = std::abs(f[i]);
    std::sort(a.begin(), a.end(), std::greater<double>());
    const double dv = f.grid().cell_volume();

    if (qinf) {
        double best = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (a[i] == 0.0) break;
            const double t = static_cast<double>(i + 1) * dv;
            best = std::max(best, std::pow(t, 1.0 / p) * a[i]);
        }
        return best;
    }

    const double r = q / p;
    double s = 0.0;
    double t_lo = 0.0, pow_lo = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double t_hi = static_cast<double>(i + 1) * dv;
        const double pow_hi = std::pow(t_hi, r);
        if (a[i] > 0.0) s += std::pow(a[i], q) * (pow_hi - pow_lo) / r;
        t_lo = t_hi;
        pow_lo = pow_hi;
    }
    (void)t_lo;
    return std::pow(s, 1.0 / q);
}

namespace {

double safe_ratio(double lhs, double rhs) {
    if (lhs == 0.0) return 0.0;
    if (rhs == 0.0) return std::numeric_limits<double>::infinity();
    return lhs / rhs;
}

} // namespace

double sobolev_quotient(const ScalarField& f, double alpha, double p) {
    const double d = static_cast<double>(f.grid().dim());
    if (!(alpha > 0.0 && alpha < d))
        throw ParameterOutOfRangeError("sobolev_quotient: need 0 < alpha < d");
    if (!(p > 1.0 && p < d / alpha))
        throw ParameterOutOfRangeError("sobolev_quotient: need 1 < p < d/alpha");
    const double pstar = d * p / (d - alpha * p);
    const double lhs = lp_norm(f, pstar);
    const double rhs = lp_norm(fractional_laplacian(f, alpha), p);
    return safe_ratio(lhs, rhs);
}

double gn_quotient(const ScalarField& f, double beta, double p) {
    if (!(beta > 0.0 && beta < 1.0))
        throw ParameterOutOfRangeError("gn_quotient: need beta in (0, 1)");
    if (!(p > 1.0) || !std::isfinite(p))
        throw ParameterOutOfRangeError("gn_quotient: need p in (1, inf)");
    const double lhs = lp_norm(fractional_laplacian(f, beta), p / beta);
    const double rhs = std::pow(f.max_abs(), 1.0 - beta) *
                       std::pow(lp_norm(fractional_laplacian(f, 1.0), p), beta);
    return safe_ratio(lhs, rhs);
}

double gns_quotient(const ScalarField& f, double beta, double p) {
    const double d = static_cast<double>(f.grid().dim());
    const bool low = beta > 0.0 && beta <= 0.5 && p >= 2.0 * d / beta;
    const bool high = beta > 0.5 && beta <= 1.0 && p >= 2.0 * d / beta &&
                      p <= 2.0 * d / (2.0 * beta - 1.0);
    if (!(low || high) || !std::isfinite(p))
        throw ParameterOutOfRangeError("gns_quotient: (beta, p) outside admissible range");
    const double theta = 2.0 * (beta - d / p);
    const double lhs = lp_norm(fractional_laplacian(f, beta), p);
    const double rhs = std::pow(f.max_abs(), 1.0 - theta) *
                       std::pow(lp_norm(fractional_laplacian(f, 1.0), 2.0 * d), theta);
    return safe_ratio(lhs, rhs);
}

void QuotientReport::finalize() {
    max = 0.0;
    median = 0.0;
    if (quotients.empty()) return;
    std::vector<double> s = quotients;
    std::sort(s.begin(), s.end());
    max = s.back();
    const std::size_t n = s.size();
    median = (n % 2 == 1) ? s[n / 2] : 0.5 * (s[n / 2 - 1] + s[n / 2]);
}

std::string QuotientReport::to_json_string() const {
    nlohmann::json j;
    j["inequality"] = inequality;
    j["params"] = params;
    j["n_samples"] = n_samples;
    j["seed"] = seed;
    j["grid"] = grid;
    j["quotients"] = quotients;
    j["max"] = max;
    j["median"] = median;
    return j.dump(2);
}

void QuotientReport::write(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("QuotientReport: cannot open " + path);
    out << to_json_string() << "\n";
}

} // namespace hwm
