#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "hwm/harness.hpp"
#include "hwm/kernels.hpp"

namespace {

void print_report(const hwm::Report& rep) {
    for (const hwm::CheckResult& r : rep.results) {
        std::printf("[%s] %-28s value=%-12.4g tol=%-10.4g %s\n", r.pass ? "PASS" : "FAIL",
                    r.name.c_str(), r.value, r.tolerance, r.note.c_str());
    }
    for (const std::string& n : rep.notes) std::printf("note: %s\n", n.c_str());
    std::printf("%s: %s\n", rep.subcommand.c_str(), rep.pass() ? "PASS" : "FAIL");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"half-wave maps laboratory: spectral operators, commutator "
                 "defects, inequality quotients, and sphere-valued dynamics "
                 "on periodic tori"};
    app.require_subcommand(1);

    const char* names[6] = {"identities", "operators",  "inequalities",
                            "simulate",   "gronwall",   "strichartz"};
    const char* blurbs[6] = {
        "pointwise and integral identities of the flow on seeded field pairs",
        "spectral multiplier exactness, adjointness, and round trips",
        "sampled quotients for the inequality families",
        "time integration with conservation gates",
        "energy-difference growth against the exponential bound",
        "space-time dispersive quotients for the forced linear wave flow"};

    struct SubOpts {
        std::string config;
        std::string out;
        std::uint64_t seed = 0;
        bool seed_set = false;
    };
    SubOpts opts[6];
    CLI::App* subs[6];
    for (int i = 0; i < 6; ++i) {
        CLI::App* sub = app.add_subcommand(names[i], blurbs[i]);
        sub->add_option("--config", opts[i].config, "key = value config file");
        sub->add_option("--out", opts[i].out, "output directory")
            ->default_val(std::string("out/") + names[i]);
        sub->add_option("--seed", opts[i].seed, "override the config seed");
        subs[i] = sub;
    }

    CLI11_PARSE(app, argc, argv);

    int chosen = -1;
    for (int i = 0; i < 6; ++i)
        if (subs[i]->parsed()) chosen = i;
    if (chosen < 0) {
        std::fprintf(stderr, "no subcommand selected\n");
        return 2;
    }
    opts[chosen].seed_set = subs[chosen]->count("--seed") > 0;

    try {
        hwm::Config cfg;
        if (!opts[chosen].config.empty()) cfg = hwm::Config::from_file(opts[chosen].config);
        if (opts[chosen].seed_set) cfg.set("seed", std::to_string(opts[chosen].seed));
        std::printf("kernels: %s\n", hwm::kernels::active_name());
        const hwm::Report rep = hwm::run_subcommand(names[chosen], cfg, opts[chosen].out);
        hwm::write_report(rep, opts[chosen].out);
        print_report(rep);
        std::printf("report: %s/report.json\n", opts[chosen].out.c_str());
        return rep.pass() ? 0 : 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
