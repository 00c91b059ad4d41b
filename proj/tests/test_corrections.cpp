#include "bbgky/cluster.hpp"
#include "bbgky/corrections.hpp"
#include "bbgky/integrator.hpp"

#include "support.hpp"

#include <doctest.h>

using namespace bbgky;
using namespace testing;
namespace co = bbgky::corrections;

namespace {

SymOperator contraction_free_part(const SymOperator& x)
{
    return x - cluster::minimal_lift(partial_trace(x, 1));
}

double contraction_defect(const SymOperator& c)
{
    return max_abs(partial_trace(c, 1).matrix());
}

double energy_defect(const SymOperator& c, const ModelOperators& ops)
{
    return std::abs((pair_interaction(ops).matrix() * c.matrix()).trace());
}

// Projection of x onto the row space of a.
RealVector row_space_part(const RealMatrix& a, const RealVector& x)
{
    Eigen::CompleteOrthogonalDecomposition<RealMatrix> cod(a.transpose());
    return a.transpose() * cod.solve(x);
}

const auto kParams = dimer::DimerParams::from_lambda(10, 0.1);

// rho + s D with D a random contraction-free direction and s chosen so that
// the lowest eigenvalue equals target (< 0). rho_1 is left untouched.
Rdm push_below(const Rdm& rho, double target, std::mt19937_64& rng)
{
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(rho.matrix());
    const ComplexVector v = es.eigenvectors().col(0);
    auto d = contraction_free_part(random_hermitian(2, 2, rng));
    if (v.dot(d.matrix() * v).real() > 0.0) {
        d = -1.0 * d;
    }
    auto lowest = [&](double s) { return min_eigenvalue((rho + s * d).matrix()); };
    double hi = 1e-3;
    while (lowest(hi) > target) {
        hi *= 2.0;
    }
    double lo = 0.0;
    for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
        const double mid = 0.5 * (lo + hi);
        (lowest(mid) > target ? lo : hi) = mid;
    }
    return rho + hi * d;
}

}  // namespace

TEST_CASE("mode names and config checks")
{
    CHECK(co::parse_mode("eom") == co::Mode::eom);
    CHECK(co::parse_mode("purify") == co::Mode::purify);
    CHECK(co::to_string(co::Mode::none) == "none");
    CHECK_THROWS_AS(co::parse_mode("sdp"), std::invalid_argument);

    co::CorrectionConfig cfg;
    CHECK(cfg.epsilon == -1e-10);
    CHECK(cfg.eta == 10.0);
    CHECK(cfg.max_iter == 500);
    CHECK_NOTHROW(cfg.validate());
    cfg.epsilon = 0.0;
    CHECK_THROWS(cfg.validate());
    cfg = {};
    cfg.eta = -1.0;
    CHECK_THROWS(cfg.validate());
    cfg = {};
    cfg.max_iter = 0;
    CHECK_THROWS(cfg.validate());
}

TEST_CASE("constraint arithmetic")
{
    CHECK(co::parameter_count(2) == 9);
    CHECK(co::base_constraint_count(2) == 5);
    for (int d = 0; d <= 4; ++d) {
        for (int dp = 0; dp <= 4; ++dp) {
            CHECK((co::free_dimension(2, d, dp) > 0) == (d + dp < 4));
        }
    }
    CHECK(co::parameter_count(4) == 100);
    CHECK(co::base_constraint_count(4) == 17);
    CHECK(co::parity_constraint_count(4) == 48);
    for (int s = 0; s <= 40; ++s) {
        CHECK((co::free_dimension(4, s / 2, s - s / 2, true) > 0) == (s < 35));
    }
    CHECK_THROWS(co::parity_constraint_count(3));
}

TEST_CASE("constraint system rows match the counts")
{
    for (int m : {2, 3, 4}) {
        co::ConstraintSystem sys(m);
        CHECK(sys.parameters() == co::parameter_count(m));
        sys.add_contraction_free();
        CHECK(sys.rows() == m * m);
        sys.add_trace_row(SymOperator::identity(m, 2));
        CHECK(sys.rows() == co::base_constraint_count(m));
        const auto a = sys.matrix();
        Eigen::FullPivLU<RealMatrix> lu(a);
        // trace follows from contraction-freeness, so the identity row is dependent
        CHECK(lu.rank() == m * m);
    }
    co::ConstraintSystem sys4(4);
    sys4.add_parity({1, 1, -1, -1});
    CHECK(sys4.rows() == 48);
    CHECK(std::count(sys4.labels().begin(), sys4.labels().end(), "parity") == 48);
}

TEST_CASE("parameter basis is orthonormal")
{
    std::mt19937_64 rng(51);
    co::ConstraintSystem sys(3);
    const auto& b = sys.basis();
    for (std::size_t p = 0; p < b.size(); ++p) {
        CHECK(b[p].is_hermitian(1e-15));
        for (std::size_t q = 0; q < b.size(); ++q) {
            const Complex ip = (b[p].matrix().adjoint() * b[q].matrix()).trace();
            CHECK(std::abs(ip - (p == q ? 1.0 : 0.0)) < 1e-14);
        }
    }
    const auto x = random_hermitian(3, 2, rng);
    CHECK(max_diff(sys.to_operator(sys.to_parameters(x)), x) < 1e-13);
}

TEST_CASE("least-norm correction")
{
    const auto ops = ModelOperators::bose_hubbard_dimer(kParams, 2);
    co::ConstraintSystem empty(2);
    CHECK(max_abs(co::least_norm_correction(empty).matrix()) == 0.0);

    co::ConstraintSystem sys(2);
    sys.add_contraction_free();
    sys.add_trace_row(pair_interaction(ops));
    CHECK(max_abs(co::least_norm_correction(sys).matrix()) == 0.0);

    // alone, a row on a basis ket is met by a multiple of the projector
    ComplexVector e1 = ComplexVector::Zero(3);
    e1(1) = 1.0;
    co::ConstraintSystem alone(2);
    alone.add_expectation(e1, -2e-3);
    const auto p = co::least_norm_correction(alone);
    CHECK(max_abs(p.matrix() - Complex(-2e-3, 0.0) * e1 * e1.adjoint()) < 1e-15);

    // with the base rows every diagonal element of C is pinned for two modes:
    // Tr_1 C = 0 fixes C(20,20) = C(02,02) = -C(11,11)/2, energy fixes their sum
    co::ConstraintSystem pinned = sys;
    pinned.add_expectation(e1, -2e-3);
    CHECK_THROWS_AS(co::least_norm_correction(pinned), co::InfeasibleCorrection);

    ComplexVector v = ComplexVector::Zero(3);
    v(0) = v(2) = 1.0 / std::sqrt(2.0);
    sys.add_expectation(v, -2e-3);
    const auto c = co::least_norm_correction(sys);
    CHECK(std::abs(v.dot(c.matrix() * v).real() + 2e-3) < 1e-12);
    CHECK(contraction_defect(c) < 1e-10);
    CHECK(energy_defect(c, ops) < 1e-10);
    CHECK(c.is_hermitian(1e-15));
    // optimality: the solution lies in the span of the constraint gradients
    const RealVector x = sys.to_parameters(c);
    CHECK((row_space_part(sys.matrix(), x) - x).norm() < 1e-12);
}

TEST_CASE("inconsistent rows are infeasible")
{
    co::ConstraintSystem sys(2);
    sys.add_contraction_free();
    // tr C is fixed to zero by the contraction rows
    sys.add_trace_row(SymOperator::identity(2, 2), 1e-3, "trace");
    try {
        (void)co::least_norm_correction(sys);
        FAIL("expected InfeasibleCorrection");
    } catch (const co::InfeasibleCorrection& e) {
        CHECK(e.residual() > 1e-4);
        CHECK(e.reason() == Termination::infeasible_correction);
    }
}

TEST_CASE("dependent eigenvalue rows")
{
    ComplexVector v = ComplexVector::Zero(3);
    v(0) = 1.0;
    co::ConstraintSystem sys(2);
    sys.add_expectation(v, 1.0);
    sys.add_expectation(v, 2.0);
    CHECK_THROWS_AS(co::least_norm_correction(sys), co::InfeasibleCorrection);

    const auto sol = co::solve_least_norm(sys, {1e-10, 1e-6});
    CHECK(sol.dropped == 1);
    CHECK(sol.c.matrix()(0, 0).real() == doctest::Approx(1.0));

    // a duplicate that agrees is harmless either way
    co::ConstraintSystem same(2);
    same.add_expectation(v, 1.0);
    same.add_expectation(v, 1.0);
    CHECK(co::least_norm_correction(same).matrix()(0, 0).real() == doctest::Approx(1.0));

    // fixed rows are never dropped
    co::ConstraintSystem fixed(2);
    fixed.add_row([](const SymOperator& b) { return b.matrix()(0, 0).real(); }, 1.0, "a");
    fixed.add_row([](const SymOperator& b) { return b.matrix()(0, 0).real(); }, 2.0, "b");
    CHECK_THROWS_AS(co::solve_least_norm(fixed, {1e-10, 1e-6}), co::InfeasibleCorrection);
}

TEST_CASE("purify leaves representable states alone")
{
    std::mt19937_64 rng(52);
    const auto ops = ModelOperators::bose_hubbard_dimer(kParams, 2);
    const auto rho = dimer::exact_rdm(random_state(10, rng), 2);
    const auto r = co::purify(rho, ops, {});
    CHECK(r.iterations == 0);
    CHECK(r.converged);
    CHECK(max_diff(r.rho2, rho) == 0.0);
    CHECK(r.norm == 0.0);
}

TEST_CASE("purify shifts a diagonal negative eigenvalue in one step")
{
    const auto ops = ModelOperators::bose_hubbard_dimer(kParams, 2);
    auto rho = SymOperator::zero(2, 2);
    rho.matrix()(0, 0) = 1.05;
    rho.matrix()(1, 1) = -0.05;
    co::PurifyOptions only_rows;
    only_rows.base_rows = false;
    only_rows.k_rows = false;
    const auto r = co::purify(rho, ops, {}, only_rows);
    CHECK(r.iterations == 1);
    CHECK(r.converged);
    CHECK(r.d == 1);
    CHECK(min_eigenvalue(r.rho2.matrix()) >= -1e-10);
    CHECK(r.rho2.matrix()(0, 0).real() == doctest::Approx(1.05));
}

TEST_CASE("purify restores positivity with conserved contraction and energy")
{
    std::mt19937_64 rng(53);
    const auto ops = ModelOperators::bose_hubbard_dimer(kParams, 2);
    for (int trial = 0; trial < 5; ++trial) {
        const auto bad = push_below(dimer::exact_rdm(random_state(10, rng), 2), -2e-3, rng);
        const auto r = co::purify(bad, ops, {});
        CHECK(r.converged);
        CHECK(r.iterations >= 1);
        CHECK(r.d >= 1);
        CHECK(min_eigenvalue(r.rho2.matrix()) > -1e-10);
        const auto k = repres::k_matrix(r.rho2, partial_trace(r.rho2, 1), 10);
        CHECK(min_eigenvalue(k.matrix) > -1e-10);
        CHECK(max_diff(partial_trace(r.rho2, 1), partial_trace(bad, 1)) < 1e-10);
        CHECK(std::abs(energy(r.rho2, ops) - energy(bad, ops)) < 1e-10);
        CHECK(r.contraction_residual < 1e-10);
        CHECK(r.energy_residual < 1e-10);
    }
}

TEST_CASE("purify reports non-convergence")
{
    std::mt19937_64 rng(54);
    const auto ops = ModelOperators::bose_hubbard_dimer(kParams, 2);
    const auto bad = push_below(dimer::exact_rdm(random_state(10, rng), 2), -5e-2, rng);
    co::CorrectionConfig cfg;
    cfg.max_iter = 1;
    const auto r = co::purify(bad, ops, cfg);
    CHECK_FALSE(r.converged);
    CHECK(r.iterations == 1);
    CHECK(co::purify(bad, ops, {}).converged);
    CHECK_THROWS_AS(co::purify(partial_trace(bad, 1), ops, cfg), std::invalid_argument);
}

TEST_CASE("corrected rhs without active eigenvalues is the plain rhs")
{
    std::mt19937_64 rng(55);
    const auto ops = ModelOperators::bose_hubbard_dimer(kParams, 2);
    const HierarchyRhs base(ops, cluster::ClosureStrategy::compatible);
    const auto rho = dimer::exact_rdm(random_state(10, rng), 2);
    co::CorrectionConfig cfg;
    cfg.mode = co::Mode::eom;
    const auto c = co::corrected_rhs(rho, base, cfg);
    CHECK(c.d == 0);
    CHECK(c.d_prime == 0);
    CHECK(c.norm == 0.0);
    CHECK(max_diff(c.derivative, base(rho)) == 0.0);

    const auto ops3 = ModelOperators::bose_hubbard_dimer(kParams, 3);
    const HierarchyRhs base3(ops3, cluster::ClosureStrategy::compatible);
    CHECK_THROWS_AS(co::corrected_rhs(dimer::exact_rdm(random_state(10, rng), 3), base3, cfg),
                    std::invalid_argument);
}

TEST_CASE("corrected rhs damps a negative eigenvalue exponentially")
{
    std::mt19937_64 rng(56);
    const auto ops = ModelOperators::bose_hubbard_dimer(kParams, 2);
    const HierarchyRhs base(ops, cluster::ClosureStrategy::compatible);
    const auto rho0 = push_below(dimer::exact_rdm(random_state(10, rng), 2), -1e-6, rng);
    const double lambda0 = min_eigenvalue(rho0.matrix());
    REQUIRE(lambda0 < -5e-7);

    co::CorrectionConfig cfg;
    cfg.mode = co::Mode::eom;
    const auto c0 = co::corrected_rhs(rho0, base, cfg);
    CHECK(c0.d == 1);
    CHECK(c0.contraction_residual < 1e-10);
    CHECK(c0.energy_residual < 1e-10);
    CHECK(contraction_defect(c0.derivative - base(rho0)) < 1e-10);

    IntegratorConfig ic;
    ic.t_final = 0.1;
    ic.dt_out = 0.1;
    const auto traj = integrate(rho0, [&](const Rdm& r) { return co::corrected_rhs(r, base, cfg).derivative; }, ic);
    REQUIRE(traj.termination == Termination::completed);
    const double lambda1 = min_eigenvalue(traj.records.back().rdms.back().matrix());
    CHECK(lambda1 / lambda0 == doctest::Approx(std::exp(-cfg.eta * 0.1)).epsilon(1e-4));
}
