#include "bbgky/hierarchy.hpp"
#include "bbgky/integrator.hpp"

#include "support.hpp"

#include <doctest.h>

using namespace bbgky;
using namespace testing;

namespace {

struct Model {
    dimer::DimerParams params;
    HierarchyRhs rhs;
    Rdm rho0;

    Model(dimer::DimerParams p, int top)
        : params(p),
          rhs(ModelOperators::bose_hubbard_dimer(p, top), cluster::ClosureStrategy::compatible),
          rho0(dimer::exact_rdm(dimer::FockState::left_condensate(p.N), top))
    {
    }

    RhsFunction fn() const
    {
        return [this](const Rdm& r) { return rhs(r); };
    }
};

IntegratorConfig config(double t_final, double dt = 0.1)
{
    IntegratorConfig c;
    c.t_final = t_final;
    c.dt_out = dt;
    return c;
}

}  // namespace

TEST_CASE("config validation")
{
    IntegratorConfig c;
    CHECK_NOTHROW(c.validate());
    c.rtol = 0.0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = {};
    c.dt_out = -0.1;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = {};
    c.method = "bdf";
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = {};
    c.max_steps_per_interval = 0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("free evolution follows the Rabi solution")
{
    dimer::DimerParams p;
    p.N = 10;
    const Model m(p, 2);
    const auto traj = integrate(m.rho0, m.fn(), config(100.0));
    REQUIRE(traj.termination == Termination::completed);
    REQUIRE(traj.records.size() == 1001);
    const dimer::DimerPropagator prop(p);
    const auto psi0 = dimer::FockState::left_condensate(p.N);
    double worst = 0.0;
    for (const auto& rec : traj.records) {
        worst = std::max(worst, max_diff(rec.rdm(1), dimer::exact_rdm(prop.evolve(psi0, rec.t), 1)));
        CHECK(std::abs(rec.rdm(1).matrix()(0, 0).real() - rec.rdm(1).matrix()(1, 1).real() - std::cos(2.0 * rec.t)) <
              1e-8);
    }
    CHECK(worst < 1e-8);
}

TEST_CASE("emission grid, trace and Hermiticity")
{
    const Model m(dimer::DimerParams::from_lambda(10, 0.1), 2);
    const auto traj = integrate(m.rho0, m.fn(), config(200.0));
    REQUIRE(traj.termination == Termination::completed);
    REQUIRE(traj.records.size() == 2001);
    for (std::size_t k = 0; k < traj.records.size(); ++k) {
        const auto& rec = traj.records[k];
        CHECK(rec.t == static_cast<double>(k) * 0.1);
        CHECK(std::abs(rec.rdms.back().trace() - 1.0) < 1e-8);
        CHECK(rec.rdms.back().hermiticity_defect() == 0.0);
        CHECK(rec.top_order() == 2);
        CHECK(rec.nps.size() == 2);
    }
    CHECK(traj.records.front().steps == 0);
    CHECK(traj.records[1].steps > 0);
}

TEST_CASE("tolerance convergence")
{
    const Model m(dimer::DimerParams::from_lambda(10, 0.1), 3);
    auto c = config(50.0, 50.0);
    const auto coarse = integrate(m.rho0, m.fn(), c);
    c.rtol /= 2.0;
    c.atol /= 2.0;
    const auto fine = integrate(m.rho0, m.fn(), c);
    const double change = max_diff(coarse.records.back().rdm(1), fine.records.back().rdm(1));
    CHECK(change < 10.0 * 1e-10);
}

TEST_CASE("determinism")
{
    const Model m(dimer::DimerParams::from_lambda(6, 0.3), 3);
    const auto a = integrate(m.rho0, m.fn(), config(5.0));
    const auto b = integrate(m.rho0, m.fn(), config(5.0));
    REQUIRE(a.records.size() == b.records.size());
    for (std::size_t k = 0; k < a.records.size(); ++k) {
        CHECK(a.records[k].rdms.back().matrix() == b.records[k].rdms.back().matrix());
        CHECK(a.records[k].steps == b.records[k].steps);
    }
}

TEST_CASE("step explosion aborts with the last good record")
{
    const Model m(dimer::DimerParams::from_lambda(10, 0.1), 2);
    auto c = config(2.0);
    c.max_steps_per_interval = 3;
    const auto traj = integrate(m.rho0, m.fn(), c);
    CHECK(traj.termination == Termination::stiffness_abort);
    CHECK(!traj.message.empty());
    CHECK(!traj.records.empty());
    CHECK(traj.records.back().t < 2.0);
}

TEST_CASE("divergence aborts")
{
    const Model m(dimer::DimerParams::from_lambda(4, 0.1), 2);
    // exponential growth
    RhsFunction blowup = [](const Rdm& r) { return Complex(50.0, 0.0) * r; };
    const auto traj = integrate(m.rho0, blowup, config(10.0));
    CHECK(traj.termination == Termination::stiffness_abort);
    CHECK(traj.records.back().t < 10.0);
}

TEST_CASE("emit hook may replace the state")
{
    dimer::DimerParams p;
    p.N = 6;
    const Model m(p, 2);
    int calls = 0;
    EmitHook reset = [&](double, Rdm& r) {
        ++calls;
        r = m.rho0;
    };
    const auto traj = integrate(m.rho0, m.fn(), config(1.0), reset);
    CHECK(calls == 11);
    for (const auto& rec : traj.records) {
        CHECK(max_diff(rec.rdms.back(), m.rho0) == 0.0);
    }
}

TEST_CASE("a halting hook ends the run with its reason")
{
    const Model m(dimer::DimerParams::from_lambda(6, 0.1), 2);
    EmitHook halt = [](double t, Rdm&) {
        if (t > 0.25) {
            throw TrajectoryHalt(Termination::infeasible_correction, "stop");
        }
    };
    const auto traj = integrate(m.rho0, m.fn(), config(1.0), halt);
    CHECK(traj.termination == Termination::infeasible_correction);
    CHECK(traj.message == "stop");
    CHECK(traj.records.size() == 3);
    CHECK(to_string(Termination::stiffness_abort) == "StiffnessAbort");
}
