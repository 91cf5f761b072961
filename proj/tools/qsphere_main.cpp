// Command-line front end: one subcommand per analysis, JSON config in,
// deterministic CSV/JSON out, exit codes by error family.

#include <array>
#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "qsphere/config.hpp"
#include "qsphere/errors.hpp"
#include "qsphere/run.hpp"

namespace {

struct SubArgs {
    std::string config;
    std::string out;
    std::string repro;
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Free particle on the quartic surface sum_i (x_i^2 + eps_i x_i^4) = 1:\n"
                 "exact trajectories, the slow momentum flow on |L| spheres, its fixed\n"
                 "points and separatrix portraits, and the parameter-space atlas."};
    app.require_subcommand(1);

    constexpr std::array<const char*, 6> names{"geodesic", "averaged",  "fixed-points",
                                               "portrait", "atlas",     "validate"};
    constexpr std::array<const char*, 6> helps{
        "integrate the exact constrained trajectory",
        "integrate the reduced momentum flow on the |L| sphere",
        "enumerate and classify the stationary momenta",
        "trace the separatrix graph and classify the portrait type",
        "sweep a parameter slice and label the regions",
        "compare coil-averaged exact dynamics against the reduced flow"};

    std::array<SubArgs, 6> args;
    std::array<CLI::App*, 6> subs{};
    for (std::size_t i = 0; i < names.size(); ++i) {
        subs[i] = app.add_subcommand(names[i], helps[i]);
        subs[i]->add_option("--config", args[i].config, "JSON configuration file");
        subs[i]->add_option("--out", args[i].out, "output directory (overrides the config)");
        subs[i]->add_option("--reproduce", args[i].repro,
                            "canned parameter set: fig3, fig4, fig5, fig6, fig7 or fig8");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        std::size_t chosen = 0;
        for (std::size_t i = 0; i < names.size(); ++i)
            if (subs[i]->parsed()) chosen = i;
        const SubArgs& a = args[chosen];

        qsphere::RunConfig cfg;
        if (!a.repro.empty()) {
            if (!a.config.empty())
                throw qsphere::ConfigError("--config and --reproduce are mutually exclusive");
            cfg = qsphere::reproduce_config(a.repro);
            if (std::string(qsphere::to_string(cfg.command)) != names[chosen])
                throw qsphere::ConfigError(std::string("--reproduce ") + a.repro +
                                           " belongs to the '" +
                                           qsphere::to_string(cfg.command) + "' subcommand");
        } else {
            if (a.config.empty())
                throw qsphere::ConfigError("--config is required unless --reproduce is given");
            cfg = qsphere::load_config_file(a.config);
            if (std::string(qsphere::to_string(cfg.command)) != names[chosen])
                throw qsphere::ConfigError(std::string("config command '") +
                                           qsphere::to_string(cfg.command) +
                                           "' does not match the '" + names[chosen] +
                                           "' subcommand");
        }
        if (!a.out.empty()) cfg.out_dir = a.out;

        qsphere::RunResult res = qsphere::run(cfg);
        std::printf("%s\n", res.summary.c_str());
        for (const std::string& f : res.files) std::fprintf(stderr, "wrote %s\n", f.c_str());
        return 0;
    } catch (const qsphere::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return e.exit_code();
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
}
