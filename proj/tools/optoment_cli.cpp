// optoment_cli.cpp — command-line front end: run configs and presets

#include "optoment/config.hpp"
#include "optoment/presets.hpp"
#include "optoment/runner.hpp"

#include <CLI11.hpp>

#include <iomanip>
#include <iostream>

using namespace optoment;

namespace {

int report(const RunReport& r) {
    for (const auto& p : r.outputs) std::cout << p.string() << '\n';
    if (!r.summary.empty()) std::cout << r.summary.string() << '\n';
    if (!r.manifest.empty()) std::cout << r.manifest.string() << '\n';
    if (r.exit_code != exit_ok) std::cerr << "optoment: " << r.message << '\n';
    return r.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"optoment: three-mode optomechanical interface experiments"};
    app.require_subcommand(1);

    RunOptions options;
    std::string out_dir = ".";
    auto add_run_flags = [&](CLI::App* cmd) {
        cmd->add_option("--out-dir", out_dir, "Directory for CSV and manifest output");
        cmd->add_option("--parallel", options.parallel, "Sweep entries run concurrently")->check(CLI::PositiveNumber);
        cmd->add_flag("--strict-truncation", options.strict_truncation,
                      "Stop at the first truncation-unreliable result");
    };

    std::string config_path;
    auto* run = app.add_subcommand("run", "Run an experiment config file");
    run->add_option("config", config_path, "Config file")->required();
    add_run_flags(run);

    auto* preset = app.add_subcommand("preset", "Embedded presets");
    preset->require_subcommand(1);
    auto* list = preset->add_subcommand("list", "List presets");
    std::string dump_name, run_name;
    auto* dump = preset->add_subcommand("dump", "Print a preset config");
    dump->add_option("name", dump_name)->required();
    auto* prun = preset->add_subcommand("run", "Run a preset");
    prun->add_option("name", run_name)->required();
    add_run_flags(prun);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_config;
    }

    options.out_dir = out_dir;
    options.log = &std::cerr;

    if (*run) return report(run_config_file(config_path, options));
    if (*list) {
        for (const auto& p : presets()) std::cout << std::left << std::setw(16) << p.name << p.description << '\n';
        return exit_ok;
    }
    if (*dump) {
        try {
            std::cout << find_preset(dump_name).config;
            return exit_ok;
        } catch (const ConfigError& e) {
            std::cerr << "optoment: " << e.what() << '\n';
            return exit_config;
        }
    }
    if (*prun) return report(run_preset(run_name, options));
    return exit_failure;
}
