#include "bbgky/integrator.hpp"

#include "bbgky/hierarchy.hpp"

#include <boost/numeric/odeint.hpp>

#include <cmath>
#include <sstream>

namespace bbgky {

namespace odeint = boost::numeric::odeint;

void IntegratorConfig::validate() const
{
    if (!(rtol > 0.0) || !(atol > 0.0)) {
        throw std::invalid_argument("IntegratorConfig: rtol and atol must be positive");
    }
    if (!(dt_out > 0.0)) {
        throw std::invalid_argument("IntegratorConfig: dt_out must be positive");
    }
    if (!(t_final >= 0.0)) {
        throw std::invalid_argument("IntegratorConfig: t_final must be non-negative");
    }
    if (max_steps_per_interval < 1) {
        throw std::invalid_argument("IntegratorConfig: max_steps_per_interval must be >= 1");
    }
    if (method != "dopri5") {
        throw std::invalid_argument("IntegratorConfig: unsupported method '" + method + "'");
    }
}

namespace {

using State = std::vector<double>;

bool state_ok(const State& x, double limit)
{
    for (double v : x) {
        if (!std::isfinite(v) || std::abs(v) > limit) {
            return false;
        }
    }
    return true;
}

}  // namespace

Trajectory integrate(const Rdm& rho0, const RhsFunction& rhs, const IntegratorConfig& cfg, const EmitHook& on_emit)
{
    cfg.validate();
    const int m = rho0.modes();
    const int o = rho0.order();

    auto system = [&](const State& x, State& dxdt, double /*t*/) {
        const auto rho = unpack_lower(x, m, o);
        pack_lower(rhs(rho), dxdt);
    };

    using Stepper = odeint::runge_kutta_dopri5<State>;
    auto controlled = odeint::make_controlled<Stepper>(cfg.atol, cfg.rtol);

    Trajectory traj;
    State x = pack_lower(rho0);
    const long intervals = static_cast<long>(std::floor(cfg.t_final / cfg.dt_out + 1e-9));

    auto emit = [&](long k, long steps, long rejected) -> bool {
        const double t = static_cast<double>(k) * cfg.dt_out;
        auto rho = unpack_lower(x, m, o);
        if (on_emit) {
            on_emit(t, rho);
            auto fresh = pack_lower(rho);
            if (fresh != x) {
                x = std::move(fresh);
                controlled.reset();
            }
        }
        traj.records.push_back(make_record(t, rho, steps, rejected));
        return true;
    };

    double dt = std::min(cfg.initial_step, cfg.dt_out);
    try {
        emit(0, 0, 0);
        for (long k = 1; k <= intervals; ++k) {
            const double t_start = static_cast<double>(k - 1) * cfg.dt_out;
            const double t_end = static_cast<double>(k) * cfg.dt_out;
            double t = t_start;
            long steps = 0;
            long rejected = 0;
            while (t < t_end) {
                const double remaining = t_end - t;
                const bool clipped = dt >= remaining;
                const double proposed = dt;
                double h = clipped ? remaining : dt;
                if (steps + rejected >= cfg.max_steps_per_interval) {
                    std::ostringstream msg;
                    msg << "step count exceeded " << cfg.max_steps_per_interval << " in interval ending at t="
                        << t_end;
                    throw TrajectoryHalt(Termination::stiffness_abort, msg.str());
                }
                const auto result = controlled.try_step(system, x, t, h);
                if (result == odeint::success) {
                    ++steps;
                    if (!state_ok(x, cfg.divergence_limit)) {
                        std::ostringstream msg;
                        msg << "state diverged at t=" << t;
                        throw TrajectoryHalt(Termination::stiffness_abort, msg.str());
                    }
                    if (clipped) {
                        t = t_end;
                        dt = std::max(h, proposed);
                    } else {
                        dt = h;
                    }
                } else {
                    ++rejected;
                    dt = h;
                    if (dt < 1e-14 * std::max(1.0, t_end)) {
                        std::ostringstream msg;
                        msg << "step size underflow at t=" << t;
                        throw TrajectoryHalt(Termination::stiffness_abort, msg.str());
                    }
                }
            }
            emit(k, steps, rejected);
        }
    } catch (const TrajectoryHalt& halt) {
        traj.termination = halt.reason();
        traj.message = halt.what();
    }
    return traj;
}

}  // namespace bbgky
