#pragma once

// Scenario runner behind the bbgky-bose command: TOML config, the list of
// exact / truncated / corrected runs it implies, per-run CSV files and the
// JSON manifest.
//
// Output layout under the output directory:
//   manifest.json            schema 1
//   <run id>/imbalance.csv   t, imbalance
//   <run id>/np_o<o>.csv     t, lambda_1 .. lambda_d (descending)
//   <run id>/kspec.csv       t, xi_1 .. xi_{m^2} (ascending)
//   <run id>/clusternorms.csv  t, c_1 .. c_K
//   <run id>/energy.csv      t, energy, trace
//   exact/fockprob.csv       t, p_0 .. p_N
//   o<k>*/tracedist_o<o>.csv t, D   (exact reference on and N <= 200)
//   o<k>*/steps.csv          t, steps, rejected
//   o<k>*/corrections.csv    t, kind, d, d_prime, norm, iterations, converged,
//                            contraction_residual, energy_residual, dropped
// Run ids: "exact", "o<k>" for uncorrected truncation order k, and
// "o2_purify" / "o2_eom" for corrected runs.

#include "bbgky/cluster.hpp"
#include "bbgky/corrections.hpp"
#include "bbgky/dimer_exact.hpp"
#include "bbgky/integrator.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace bbgky::scenario {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ScenarioConfig {
    int N = 10;
    std::optional<double> lambda;
    std::optional<double> U;
    double J = 1.0;
    /// Truncation orders of the uncorrected runs.
    std::vector<int> orders{2};
    double t_final = 1.0;
    double dt = 0.1;
    bool exact = true;
    /// Highest exact RDM order recorded; 0 means max(orders), capped at N.
    int exact_max_order = 0;
    /// Correction modes other than none add corrected runs at order 2.
    std::vector<corrections::Mode> corrections;
    corrections::CorrectionConfig correction;
    IntegratorConfig integrator;
    cluster::ClosureStrategy closure = cluster::ClosureStrategy::compatible;
    std::string output = "bbgky-out";
    std::uint64_t seed = 0;
    /// "condensate" (all atoms left) or "random" (seeded Gaussian coefficients).
    std::string initial_state = "condensate";

    dimer::DimerParams params() const;
    int exact_order() const;
    /// Throws ConfigError.
    void validate() const;
};

ScenarioConfig parse_config(std::string_view text);
/// Throws ConfigError on parse or validation failure, IoError if unreadable.
ScenarioConfig load_config(const std::filesystem::path& path);

enum class RunKind { exact, truncated };

struct RunSpec {
    std::string id;
    RunKind kind = RunKind::truncated;
    int order = 0;
    corrections::Mode mode = corrections::Mode::none;
};

std::vector<RunSpec> plan_runs(const ScenarioConfig& cfg);

struct RunResult {
    RunSpec spec;
    /// "completed", "StiffnessAbort", "InfeasibleCorrection", or "error".
    std::string termination = "completed";
    std::string message;
    double wall_seconds = 0.0;
    double t_end = 0.0;
    std::size_t records = 0;
    double energy_initial = 0.0;
    /// max |E(t) - E(0)| / max(|E(0)|, J)
    double max_rel_energy_drift = 0.0;
    double max_trace_drift = 0.0;
    std::size_t correction_events = 0;
    std::vector<std::string> files;

    bool diagnosed() const { return termination != "error"; }
};

dimer::FockState initial_state(const ScenarioConfig& cfg);

/// Runs one entry of the plan and writes its files into dir / spec.id.
RunResult execute_run(const ScenarioConfig& cfg, const RunSpec& spec, const std::filesystem::path& dir);

struct ScenarioResult {
    std::vector<RunResult> runs;
    double wall_seconds = 0.0;

    bool all_diagnosed() const;
};

/// Executes the plan on `threads` workers and writes manifest.json.
ScenarioResult run_scenario(const ScenarioConfig& cfg, const std::filesystem::path& out, int threads);

/// Worker count from the flag, else BBGKY_BOSE_THREADS, else the core count.
int resolve_threads(std::optional<int> flag);

std::string version();

}  // namespace bbgky::scenario
