#pragma once

#include <map>
#include <string>

namespace qinterp::cli {

// Flat key=value configuration. Values from the command line override the
// config file; the QINTERP_SEED environment variable supplies the default
// seed when neither sets one.
struct ExperimentConfig {
    std::string subcommand;
    std::map<std::string, std::string> kv;

    bool has(const std::string& key) const { return kv.count(key) != 0; }
    std::string get(const std::string& key, const std::string& fallback) const;
    long long get_int(const std::string& key, long long fallback) const;
    double get_double(const std::string& key, double fallback) const;
    uint64_t seed() const;
};

ExperimentConfig parse_config_file(const std::string& path);

// Runs one subcommand; returns the process exit status (0 success, 2
// assertion failure). Usage errors throw std::invalid_argument and are
// mapped to exit 1 by the binary.
int dispatch(const ExperimentConfig& config);

}  // namespace qinterp::cli
