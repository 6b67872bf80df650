#include <iostream>

#include "CLI11.hpp"
#include "qinterp/cli.hpp"

namespace {

// Registers the shared key=value options on a subcommand; values land in
// cfg.kv only when the flag was actually passed, so they override the
// config file.
void add_common(CLI::App* sub, std::map<std::string, std::string>& staging) {
    for (const char* key :
         {"circuit", "outcome", "out", "family", "n", "m", "dist", "edge_prob", "seed",
          "draw", "grid", "draws", "d", "delta", "eta", "Delta", "Delta_cap", "c",
          "trials", "f", "coupling", "count", "bins", "circuits"}) {
        sub->add_option(std::string("--") + key, staging[key]);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"qinterp: theta-interpolated random circuit laboratory"};
    app.require_subcommand(1);

    std::string config_path;
    app.add_option("--config", config_path, "key=value config file");

    const char* names[] = {"simulate",          "sample-draw", "p-theta-scan",
                           "polyfit-check",     "robust-fit-trials", "reduce",
                           "hiding-check",      "tvd-report",  "ising-check"};
    std::map<std::string, std::map<std::string, std::string>> staging;
    for (const char* name : names) {
        CLI::App* sub = app.add_subcommand(name);
        sub->fallthrough();  // --config may follow the subcommand
        add_common(sub, staging[name]);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        qinterp::cli::ExperimentConfig cfg;
        if (!config_path.empty()) cfg = qinterp::cli::parse_config_file(config_path);
        CLI::App* sub = app.get_subcommands().front();
        cfg.subcommand = sub->get_name();
        for (auto& [key, value] : staging[cfg.subcommand])
            if (sub->count(std::string("--") + key) > 0) cfg.kv[key] = value;
        return qinterp::cli::dispatch(cfg);
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
