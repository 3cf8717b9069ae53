// Command-line front end: flag parsing and file emission around cli::run().
// Exit status: 0 success, 1 numerical or criterion failure, 2 usage error.
#include <cstdio>
#include <exception>
#include <filesystem>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "decolab/cli.hpp"

namespace {

int emit(const decolab::cli::RunConfig& cfg, const char* argv0) {
    namespace fs = std::filesystem;
    decolab::cli::RunConfig run_cfg = cfg;
    if (run_cfg.subcommand == "verify")
        run_cfg.strings["cli-path"] = fs::absolute(argv0).string();
    if (run_cfg.emit_svg && run_cfg.output_dir.empty()) {
        std::fprintf(stderr, "usage error: --svg requires --out\n");
        return 2;
    }

    decolab::cli::ScenarioResult result;
    try {
        result = decolab::cli::run(run_cfg);
    } catch (const decolab::cli::UsageError& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }

    try {
        if (!run_cfg.output_dir.empty()) {
            const fs::path dir(run_cfg.output_dir);
            fs::create_directories(dir);
            if (!result.table.columns.empty())
                decolab::write_csv(dir / (run_cfg.subcommand + ".csv"), result.table);
            if (run_cfg.emit_svg && !result.series.empty())
                decolab::write_svg_plot(dir / (run_cfg.subcommand + ".svg"), result.svg_title,
                                        result.svg_x, result.svg_y, result.series);
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }

    if (!result.summary.empty()) std::puts(result.summary.c_str());
    std::printf("wall time: %.3f s\n", result.wall_seconds);
    return result.ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"decolab: decoherence, collapse, and measurement scenario runner"};
    app.require_subcommand(1);
    app.set_config("--config", "",
                   "parameter file: key = value lines under [subcommand] sections; "
                   "flags override file values");
    app.footer("Environment: DECOLAB_THREADS caps worker threads; results are identical at any "
               "setting.\nExit status: 0 success, 1 numerical failure, 2 usage error.");

    std::map<std::string, decolab::cli::RunConfig> configs;
    for (const auto& spec : decolab::cli::subcommands()) {
        auto& cfg = configs.emplace(spec.name, decolab::cli::defaults_for(spec.name)).first->second;
        CLI::App* sub = app.add_subcommand(spec.name, spec.help);
        sub->configurable();
        sub->fallthrough();
        if (spec.name == "verify") {
            sub->add_option("suite", cfg.strings["suite"],
                            "criterion name or 'all' (see `verify --help`)")
                ->capture_default_str();
        } else {
            for (const auto& ps : spec.params) {
                const std::string flag = "--" + ps.key;
                if (ps.type == 'r')
                    sub->add_option(flag, cfg.reals[ps.key], ps.help)->capture_default_str();
                else if (ps.type == 'i')
                    sub->add_option(flag, cfg.ints[ps.key], ps.help)->capture_default_str();
                else
                    sub->add_option(flag, cfg.strings[ps.key], ps.help)->capture_default_str();
            }
        }
        sub->add_option("--seed", cfg.seed, "base seed for every random draw")
            ->capture_default_str();
        sub->add_option("--out", cfg.output_dir, "directory for the CSV (and SVG) output");
        sub->add_flag("--svg", cfg.emit_svg, "also write an SVG plot (requires --out)");
        sub->add_flag("--natural-units", cfg.natural_units,
                      "use hbar = G = 1 instead, for dimensionless studies");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    for (const CLI::App* sub : app.get_subcommands())
        return emit(configs.at(sub->get_name()), argv[0]);
    return 2;
}
