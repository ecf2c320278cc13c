#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "hwm/errors.hpp"
#include "hwm/norms.hpp"
#include "hwm/random_fields.hpp"
#include "hwm/transform.hpp"

using namespace hwm;

namespace {
constexpr double two_pi = TorusGrid::two_pi;
}

TEST_CASE("lp norms of closed-form fields") {
    const TorusGrid g = TorusGrid::cubic(1, 256, two_pi);
    const ScalarField c =
        ScalarField::from_function(g, [](const double* x) { return std::cos(x[0]); });
    // ||cos||_2 = sqrt(pi) on [0, 2pi), exact for the trapezoid-free grid sum
    CHECK(lp_norm(c, 2.0) == doctest::Approx(std::sqrt(two_pi / 2.0)).epsilon(1e-13));
    CHECK(lp_norm(c, std::numeric_limits<double>::infinity()) ==
          doctest::Approx(1.0).epsilon(1e-13));
    // ||cos||_1 = 4 on [0, 2pi); the midpoint-style sum converges at N^-2
    CHECK(lp_norm(c, 1.0) == doctest::Approx(4.0).epsilon(1e-4));
    CHECK(lp_norm(c, 4.0) ==
          doctest::Approx(std::pow(two_pi * 3.0 / 8.0, 0.25)).epsilon(1e-12));
}

TEST_CASE("lorentz norm of a single-cell indicator") {
    const TorusGrid g = TorusGrid::cubic(1, 64, 1.0);
    ScalarField f(g);
    f.data()[13] = 1.0;
    const double dx = g.cell_volume();
    // integral_0^dx t^{q/p - 1} dt * (p/q)^... with p = 2, q = 1: 2 sqrt(dx)
    CHECK(lorentz_norm(f, 2.0, 1.0) == doctest::Approx(2.0 * std::sqrt(dx)).epsilon(1e-13));
    // q = infinity: sup over right endpoints of t^{1/p}
    CHECK(lorentz_norm(f, 2.0, std::numeric_limits<double>::infinity()) ==
          doctest::Approx(std::sqrt(dx)).epsilon(1e-13));
}

TEST_CASE("lorentz(p, p) collapses to lp") {
    const TorusGrid g = TorusGrid::cubic(2, 24, two_pi);
    const ScalarField f = random_band_limited(g, 99, 6, 1.0);
    for (double p : {1.5, 2.0, 4.0, 6.0})
        CHECK(lorentz_norm(f, p, p) == doctest::Approx(lp_norm(f, p)).epsilon(1e-10));
}

TEST_CASE("norms are homogeneous and permutation invariant") {
    const TorusGrid g = TorusGrid::cubic(1, 128, two_pi);
    const ScalarField f = random_band_limited(g, 100, 10, 1.0);
    const double l = lorentz_norm(f, 3.0, 2.0);
    CHECK(lorentz_norm(-2.5 * f, 3.0, 2.0) == doctest::Approx(2.5 * l).epsilon(1e-13));
    CHECK(lp_norm(-2.5 * f, 3.0) == doctest::Approx(2.5 * lp_norm(f, 3.0)).epsilon(1e-13));

    // rearrangement invariance: shuffling the samples changes nothing
    ScalarField shuffled = f;
    std::mt19937_64 mt(7);
    std::shuffle(shuffled.data(), shuffled.data() + shuffled.size(), mt);
    CHECK(lorentz_norm(shuffled, 3.0, 2.0) == l);
    CHECK(lorentz_norm(shuffled, 2.5, std::numeric_limits<double>::infinity()) ==
          lorentz_norm(f, 2.5, std::numeric_limits<double>::infinity()));
}

TEST_CASE("zero fields give zero norms and quotients") {
    const TorusGrid g = TorusGrid::cubic(3, 8, two_pi);
    const ScalarField z(g);
    CHECK(lp_norm(z, 2.0) == 0.0);
    CHECK(lorentz_norm(z, 2.0, 1.0) == 0.0);
    CHECK(sobolev_quotient(z, 1.0, 2.0) == 0.0);
    CHECK(gn_quotient(z, 0.5, 2.0) == 0.0);
    CHECK(gns_quotient(z, 0.5, 12.0) == 0.0);
}

TEST_CASE("norm hypotheses are enforced") {
    const TorusGrid g = TorusGrid::cubic(1, 64, two_pi);
    const ScalarField f = random_band_limited(g, 101, 6, 1.0);
    CHECK_THROWS_AS(lp_norm(f, 0.5), ParameterOutOfRangeError);
    CHECK_THROWS_AS(lorentz_norm(f, 1.0, 2.0), ParameterOutOfRangeError);
    CHECK_THROWS_AS(lorentz_norm(f, 2.0, 0.5), ParameterOutOfRangeError);
    // d = 1: sobolev needs alpha < d and p < d/alpha
    CHECK_THROWS_AS(sobolev_quotient(f, 1.0, 2.0), ParameterOutOfRangeError);
    CHECK_THROWS_AS(sobolev_quotient(f, 0.25, 8.0), ParameterOutOfRangeError);
    CHECK_THROWS_AS(gn_quotient(f, 1.0, 2.0), ParameterOutOfRangeError);
    CHECK_THROWS_AS(gn_quotient(f, 0.0, 2.0), ParameterOutOfRangeError);
    // gns: beta = 0.5 needs p >= 2d/beta = 4d
    CHECK_THROWS_AS(gns_quotient(f, 0.5, 2.0), ParameterOutOfRangeError);
    CHECK_THROWS_AS(gns_quotient(f, 1.5, 12.0), ParameterOutOfRangeError);
}

TEST_CASE("sobolev quotient is scale invariant in amplitude") {
    const TorusGrid g = TorusGrid::cubic(3, 16, two_pi);
    const ScalarField f = random_band_limited(g, 102, 4, 2.0);
    const double q1 = sobolev_quotient(f, 1.0, 2.0);
    const double q2 = sobolev_quotient(17.0 * f, 1.0, 2.0);
    CHECK(q1 > 0.0);
    CHECK(q2 == doctest::Approx(q1).epsilon(1e-12));
}

TEST_CASE("quotient report serializes and survives finalize") {
    QuotientReport qr;
    qr.inequality = "demo";
    qr.params = {{"alpha", 1.0}};
    qr.n_samples = 4;
    qr.seed = 77;
    qr.grid = "T^1 64";
    qr.quotients = {1.0, 4.0, 2.0, 3.0};
    qr.finalize();
    CHECK(qr.max == 4.0);
    CHECK(qr.median == doctest::Approx(2.5));
    const std::string path = "qr_test.json";
    qr.write(path);
    std::ifstream in(path);
    REQUIRE(in.good());
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(text.find("\"demo\"") != std::string::npos);
    CHECK(text.find("\"max\"") != std::string::npos);
    std::filesystem::remove(path);
}
