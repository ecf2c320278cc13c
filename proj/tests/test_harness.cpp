#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "hwm/commutators.hpp"
#include "hwm/errors.hpp"
#include "hwm/harness.hpp"
#include "hwm/random_fields.hpp"
#include "hwm/transform.hpp"

using namespace hwm;

namespace {

constexpr double two_pi = TorusGrid::two_pi;

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("config parsing") {
    const Config cfg = Config::from_text(
        "# experiment setup\n"
        "n = 128\n"
        "length=6.0   # trailing comment\n"
        "  label =  unit circle  \n"
        "eps_list = 1e-2, 1e-3,1e-4\n"
        "flag = true\n"
        "\n");
    CHECK(cfg.get_int("n", 0) == 128);
    CHECK(cfg.get_double("length", 0.0) == 6.0);
    CHECK(cfg.get_string("label", "") == "unit circle");
    CHECK(cfg.get_bool("flag", false));
    CHECK(cfg.get_double("absent", 2.5) == 2.5);
    const std::vector<double> eps = cfg.get_double_list("eps_list", {});
    REQUIRE(eps.size() == 3);
    CHECK(eps[1] == 1e-3);

    CHECK_THROWS_AS(Config::from_text("just a bare token\n"), ConfigError);
    CHECK_THROWS_AS(Config::from_text("n = 12abc\n").get_int("n", 0), ConfigError);
    CHECK_THROWS_AS(Config::from_text("x = nope\n").get_double("x", 0.0), ConfigError);
    CHECK_THROWS_AS(cfg.restrict_keys({"n", "length"}), ConfigError);
    CHECK_NOTHROW(cfg.restrict_keys({"n", "length", "label", "eps_list", "flag"}));
}

TEST_CASE("great-circle constraint pairing is constant one") {
    const TorusGrid g = TorusGrid::cubic(1, 256, two_pi);
    const SphereField u = equator_map(g);
    const ScalarField lhs = dot(u.vec(), fractional_laplacian(u.vec(), 1.0));
    ScalarField rhs(g);
    for (int i = 0; i < 3; ++i) {
        const ScalarField& c = u.component(i);
        rhs = rhs - 0.5 * leibniz(c, c, 1.0);
    }
    ScalarField one = ScalarField::from_function(g, [](const double*) { return 1.0; });
    CHECK((lhs - one).max_abs() <= 1e-10);
    CHECK((rhs - one).max_abs() <= 1e-10);
}

TEST_CASE("triple product rule on constant vectors is exact") {
    const TorusGrid g = TorusGrid::cubic(1, 16, two_pi);
    Rng rng(42);
    auto const_vec = [&]() {
        VectorField3 v(g);
        for (int i = 0; i < 3; ++i) {
            const double c = rng.normal();
            v.component(i) = ScalarField::from_function(g, [c](const double*) { return c; });
        }
        return v;
    };
    const VectorField3 a = const_vec(), b = const_vec(), c = const_vec();
    const VectorField3 lhs = cross(a, cross(b, c));
    const VectorField3 rhs = dot(c, a) * b - dot(a, b) * c;
    for (int i = 0; i < 3; ++i)
        CHECK((lhs.component(i) - rhs.component(i)).max_abs() <= 1e-15);
}

TEST_CASE("identity sweep passes on seeded random pairs") {
    const Config cfg = Config::from_text(
        "dim = 1\nn = 256\nseeds = 3\nseed = 11\nkmax = 6\n");
    const Report rep = run_identities(cfg, "out/test_identities");
    CHECK(rep.pass());
    bool found_i = false;
    for (const CheckResult& r : rep.results) {
        CHECK(r.pass);
        if (r.name == "determinant_cancellation") {
            found_i = true;
            CHECK(r.value <= 1e-8);
        }
    }
    CHECK(found_i);
    // ten identities plus the completeness row
    CHECK(rep.results.size() == 11);
    std::filesystem::remove_all("out/test_identities");
}

TEST_CASE("report files carry the full result set") {
    Report rep;
    rep.subcommand = "demo";
    rep.config_echo["n"] = "8";
    rep.results.push_back({"alpha", true, 0.5, 1.0, "ok"});
    rep.results.push_back({"beta", false, 2.0, 1.0, ""});
    rep.notes.push_back("a note");
    CHECK(!rep.pass());

    write_report(rep, "out/test_report");
    const nlohmann::json j = nlohmann::json::parse(slurp("out/test_report/report.json"));
    CHECK(j["subcommand"] == "demo");
    CHECK(j["pass"] == false);
    CHECK(j["config_echo"]["n"] == "8");
    REQUIRE(j["results"].size() == 2);
    CHECK(j["results"][0]["name"] == "alpha");
    CHECK(j["results"][1]["pass"] == false);
    CHECK(j["notes"][0] == "a note");
    std::filesystem::remove_all("out/test_report");
}

TEST_CASE("simulate runs are deterministic byte for byte") {
    const Config cfg = Config::from_text(
        "dim = 1\nn = 32\ninitial = bump\namplitude = 0.3\nkappa = 2.0\n"
        "t_final = 0.02\ndt = 1e-3\nstore_every = 5\n");
    const Report r1 = run_simulate(cfg, "out/test_sim_a");
    const Report r2 = run_simulate(cfg, "out/test_sim_b");
    CHECK(r1.pass());
    CHECK(r2.pass());
    CHECK(slurp("out/test_sim_a/trajectory.csv") == slurp("out/test_sim_b/trajectory.csv"));
    std::filesystem::remove_all("out/test_sim_a");
    std::filesystem::remove_all("out/test_sim_b");
}

TEST_CASE("subcommand dispatch") {
    const Config cfg;
    CHECK_THROWS_AS(run_subcommand("frobnicate", cfg, "out/never"), ConfigError);
    CHECK_THROWS_AS(Config::from_file("out/definitely_missing.cfg"), ConfigError);
}

TEST_CASE("parallel loops cover every index once and surface exceptions") {
    std::vector<int> hits(101, 0);
    parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; });
    for (int h : hits) CHECK(h == 1);
    CHECK_THROWS_AS(parallel_for(4, [](std::size_t i) {
        if (i == 3) throw ParameterOutOfRangeError("boom");
    }), ParameterOutOfRangeError);
}
