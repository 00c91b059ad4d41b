// bbgky-bose: run or validate a Bose-Hubbard dimer scenario.
//
// Exit codes: 0 all runs completed or stopped with a diagnosed reason,
// 1 a run failed unexpectedly, 2 invalid config, 3 IO failure.

#include "bbgky/scenario.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace sc = bbgky::scenario;

int main(int argc, char** argv)
{
    CLI::App app{"BBGKY hierarchy simulator for the two-site Bose-Hubbard model"};
    app.set_version_flag("--version", sc::version());
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    int threads = 0;

    auto* run = app.add_subcommand("run", "execute every run the config requests");
    run->add_option("config", config_path, "scenario TOML file")->required();
    run->add_option("--out", out_dir, "output directory (overrides the config)");
    run->add_option("--threads", threads, "worker threads (default: BBGKY_BOSE_THREADS or core count)")
        ->check(CLI::PositiveNumber);

    auto* validate = app.add_subcommand("validate", "parse and check a config without running it");
    validate->add_option("config", config_path, "scenario TOML file")->required();

    CLI11_PARSE(app, argc, argv);

    sc::ScenarioConfig cfg;
    try {
        cfg = sc::load_config(config_path);
    } catch (const sc::ConfigError& e) {
        std::cerr << "invalid config: " << e.what() << '\n';
        return 2;
    } catch (const sc::IoError& e) {
        std::cerr << e.what() << '\n';
        return 3;
    }

    if (validate->parsed()) {
        std::cout << "ok: " << sc::plan_runs(cfg).size() << " runs\n";
        for (const auto& r : sc::plan_runs(cfg)) {
            std::cout << "  " << r.id << '\n';
        }
        return 0;
    }

    const std::filesystem::path out = out_dir.empty() ? cfg.output : out_dir;
    const int workers = sc::resolve_threads(threads > 0 ? std::optional<int>(threads) : std::nullopt);
    try {
        const auto result = sc::run_scenario(cfg, out, workers);
        for (const auto& r : result.runs) {
            std::cout << r.spec.id << ": " << r.termination << " t_end=" << r.t_end << " wall=" << r.wall_seconds
                      << "s";
            if (!r.message.empty()) {
                std::cout << " (" << r.message << ")";
            }
            std::cout << '\n';
        }
        return result.all_diagnosed() ? 0 : 1;
    } catch (const sc::IoError& e) {
        std::cerr << e.what() << '\n';
        return 3;
    } catch (const sc::ConfigError& e) {
        std::cerr << "invalid config: " << e.what() << '\n';
        return 2;
    }
}
