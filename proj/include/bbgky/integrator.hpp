#pragma once

// Adaptive integration of the packed top RDM with emission at fixed
// write-out intervals.

#include "bbgky/trajectory.hpp"

#include <functional>
#include <string>

namespace bbgky {

struct IntegratorConfig {
    double rtol = 1e-10;
    double atol = 1e-12;
    /// Write-out interval; emissions happen exactly at k * dt_out.
    double dt_out = 0.1;
    double t_final = 1.0;
    /// Step attempts allowed inside one write-out interval before the run is
    /// declared stiff.
    long max_steps_per_interval = 1'000'000;
    std::string method = "dopri5";
    double initial_step = 1e-3;
    /// Any |element| above this counts as blow-up.
    double divergence_limit = 1e6;

    void validate() const;
};

using RhsFunction = std::function<SymOperator(const Rdm&)>;
/// Called at every emission time (including t = 0) before the record is
/// taken; may modify the state, in which case integration restarts from it.
/// Throwing TrajectoryHalt ends the run with that reason.
using EmitHook = std::function<void(double t, Rdm& rho)>;

Trajectory integrate(const Rdm& rho0, const RhsFunction& rhs, const IntegratorConfig& cfg,
                     const EmitHook& on_emit = {});

}  // namespace bbgky
