#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hwm/field.hpp"

namespace hwm {

/**
 * Grid quadrature L^p norm (sum |f|^p * cell volume)^{1/p}; p = infinity
 * returns max |f|.  Requires p >= 1.
 */
double lp_norm(const ScalarField& f, double p);

/**
 * Lorentz norm via the decreasing rearrangement of |f| on cells of equal
 * measure.  The rearrangement is piecewise constant, so the quasi-norm
 *   ( integral_0^V (t^{1/p} f*(t))^q dt/t )^{1/q}
 * is evaluated in closed form cell by cell; q = infinity takes the sup of
 * t^{1/p} f*(t) over cell right endpoints.  Requires p in (1, inf) and
 * q in [1, inf].  lorentz_norm(f, p, p) agrees with lp_norm(f, p).
 */
double lorentz_norm(const ScalarField& f, double p, double q);

/**
 * Ratio of the two sides of the homogeneous Sobolev bound
 *   ||f||_{L^{dp/(d - alpha p)}} <= C ||D^alpha f||_{L^p},
 * no constant included.  Requires alpha in (0, d) and p in (1, d/alpha).
 * Returns 0 for the zero field.
 */
double sobolev_quotient(const ScalarField& f, double alpha, double p);

/**
 * Interpolation bound ||D^beta f||_{L^{p/beta}} <= C ||f||_inf^{1-beta}
 * ||D^1 f||_{L^p}^beta.  Requires beta in (0, 1), p in (1, inf).
 */
double gn_quotient(const ScalarField& f, double beta, double p);

/**
 * Endpoint interpolation bound ||D^beta f||_{L^p} <= C ||f||_inf^{1-theta}
 * ||D^1 f||_{L^{2d}}^theta with theta = 2(beta - d/p).  Admissible ranges:
 * beta in (0, 1/2] with p >= 2d/beta, or beta in (1/2, 1] with
 * p in [2d/beta, 2d/(2 beta - 1)].
 */
double gns_quotient(const ScalarField& f, double beta, double p);

/** Sampling statistics for one inequality over a seeded field family. */
struct QuotientReport {
    std::string inequality;
    std::map<std::string, double> params;
    int n_samples = 0;
    std::uint64_t seed = 0;
    std::string grid;
    std::vector<double> quotients;
    double max = 0.0;
    double median = 0.0;

    /** Fills max/median from quotients. */
    void finalize();
    std::string to_json_string() const;
    void write(const std::string& path) const;
};

} // namespace hwm
