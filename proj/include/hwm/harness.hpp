#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace hwm {

/**
 * Flat key = value configuration file.  One entry per line, '#' starts a
 * comment, blank lines ignored.  Each subcommand validates the key set it
 * understands and rejects unknown keys (ConfigError), so typos never pass
 * silently.
 */
class Config {
public:
    Config() = default;
    static Config from_file(const std::string& path);
    static Config from_text(const std::string& text);

    bool has(const std::string& key) const;
    void set(const std::string& key, const std::string& value);

    double get_double(const std::string& key, double fallback) const;
    int get_int(const std::string& key, int fallback) const;
    std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    /** Comma-separated doubles. */
    std::vector<double> get_double_list(const std::string& key,
                                        const std::vector<double>& fallback) const;

    /** Throws ConfigError when a stored key is not in the allowed list. */
    void restrict_keys(const std::vector<std::string>& allowed) const;
    const std::map<std::string, std::string>& entries() const { return kv_; }

private:
    std::map<std::string, std::string> kv_;
};

struct CheckResult {
    std::string name;
    bool pass = false;
    double value = 0.0;     // measured quantity (usually a max error)
    double tolerance = 0.0; // gate it was compared against
    std::string note;
};

struct Report {
    std::string subcommand;
    std::map<std::string, std::string> config_echo;
    std::vector<CheckResult> results;
    std::vector<std::string> notes;

    bool pass() const;
    std::string to_json_string() const;
};

/** Writes report.json into out_dir (created if missing). */
void write_report(const Report& report, const std::string& out_dir);

Report run_identities(const Config& cfg, const std::string& out_dir);
Report run_operators(const Config& cfg, const std::string& out_dir);
Report run_inequalities(const Config& cfg, const std::string& out_dir);
Report run_simulate(const Config& cfg, const std::string& out_dir);
Report run_gronwall(const Config& cfg, const std::string& out_dir);
Report run_strichartz(const Config& cfg, const std::string& out_dir);

/** Dispatch by subcommand name; throws ConfigError for unknown names. */
Report run_subcommand(const std::string& name, const Config& cfg,
                      const std::string& out_dir);

/**
 * Index-sharded parallel loop: fn(i) for i in [0, n).  Worker count comes
 * from hardware_concurrency, capped by HWMLAB_THREADS if set.  fn must not
 * share mutable state across indices; exceptions are rethrown on the
 * calling thread.
 */
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

} // namespace hwm
