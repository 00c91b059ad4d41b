#include "bbgky/dimer_exact.hpp"

#include "support.hpp"

#include <doctest.h>

using namespace bbgky;
using namespace testing;

namespace {

// o-RDM by embedding psi into the ordered N-particle tensor space and tracing
// out N - o particles there.
Rdm brute_force_rdm(const dimer::FockState& psi, int o)
{
    const int N = psi.particles();
    const ComplexVector full = symmetric_isometry(2, N) * psi.coefficients;
    const Eigen::Index keep = Eigen::Index(1) << o;
    const Eigen::Index rest = Eigen::Index(1) << (N - o);
    ComplexMatrix r = ComplexMatrix::Zero(keep, keep);
    for (Eigen::Index i = 0; i < keep; ++i) {
        for (Eigen::Index j = 0; j < keep; ++j) {
            for (Eigen::Index s = 0; s < rest; ++s) {
                r(i, j) += full(i * rest + s) * std::conj(full(j * rest + s));
            }
        }
    }
    return restrict_symmetric(r, 2, o);
}

// Second-quantized H on the product of two truncated Fock spaces, restricted
// to total number N.
RealMatrix brute_force_hamiltonian(const dimer::DimerParams& p)
{
    const int N = p.N;
    const int d = N + 1;
    RealMatrix a = RealMatrix::Zero(d, d);
    for (int n = 1; n <= N; ++n) {
        a(n - 1, n) = std::sqrt(static_cast<double>(n));
    }
    const RealMatrix id = RealMatrix::Identity(d, d);
    auto kron = [&](const RealMatrix& x, const RealMatrix& y) {
        RealMatrix k(d * d, d * d);
        for (int i = 0; i < d; ++i) {
            for (int j = 0; j < d; ++j) {
                k.block(i * d, j * d, d, d) = x(i, j) * y;
            }
        }
        return k;
    };
    const RealMatrix aL = kron(a, id);
    const RealMatrix aR = kron(id, a);
    const RealMatrix nL = aL.transpose() * aL;
    const RealMatrix nR = aR.transpose() * aR;
    const RealMatrix one = RealMatrix::Identity(d * d, d * d);
    const RealMatrix h = -p.J * (aL.transpose() * aR + aR.transpose() * aL) +
                         0.5 * p.U * (nL * (nL - one) + nR * (nR - one));
    // |N - n, n> sits at (N - n) * d + n
    RealMatrix out(d, d);
    for (int n = 0; n <= N; ++n) {
        for (int k = 0; k <= N; ++k) {
            out(n, k) = h((N - n) * d + n, (N - k) * d + k);
        }
    }
    return out;
}

}  // namespace

TEST_CASE("params")
{
    const auto p = dimer::DimerParams::from_lambda(10, 0.1);
    CHECK(p.U == doctest::Approx(0.2 / 9.0).epsilon(1e-14));
    CHECK(std::abs(p.lambda() - 0.1) < 1e-12);
    dimer::DimerParams bad;
    bad.J = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = {};
    bad.N = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("hamiltonian elements")
{
    dimer::DimerParams p;
    p.N = 6;
    p.J = 1.3;
    p.U = 0.7;
    const auto h = dimer::build_hamiltonian(p);
    CHECK(h(0, 0) == doctest::Approx(p.U * 6 * 5 / 2.0));
    CHECK(h(1, 0) == doctest::Approx(-p.J * std::sqrt(6.0)));
    CHECK((h - h.transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK((h - brute_force_hamiltonian(p)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(h(3, 0) == 0.0);

    dimer::DimerParams one;
    one.N = 1;
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(dimer::build_hamiltonian(one));
    CHECK(es.eigenvalues()(0) == doctest::Approx(-1.0));
    CHECK(es.eigenvalues()(1) == doctest::Approx(1.0));
}

TEST_CASE("evolution")
{
    const auto p = dimer::DimerParams::from_lambda(10, 0.1);
    const dimer::DimerPropagator prop(p);
    std::mt19937_64 rng(11);
    const auto psi0 = random_state(10, rng);
    CHECK((prop.evolve(psi0, 0.0).coefficients - psi0.coefficients).cwiseAbs().maxCoeff() < 1e-13);

    const double e0 = prop.energy(psi0);
    for (double t : {0.5, 13.0, 150.0}) {
        const auto psi = prop.evolve(psi0, t);
        CHECK(std::abs(psi.norm() - 1.0) < 1e-10);
        CHECK(std::abs(prop.energy(psi) - e0) < 1e-10 * std::max(1.0, std::abs(e0)));
    }

    // composition of two propagations equals one
    const auto a = prop.evolve(prop.evolve(psi0, 1.2), 3.4);
    const auto b = prop.evolve(psi0, 4.6);
    CHECK((a.coefficients - b.coefficients).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("free Rabi oscillation")
{
    dimer::DimerParams p;
    p.N = 10;
    p.U = 0.0;
    const dimer::DimerPropagator prop(p);
    const auto psi0 = dimer::FockState::left_condensate(10);
    double worst = 0.0;
    for (int k = 0; k <= 1000; ++k) {
        const double t = 0.1 * k;
        worst = std::max(worst, std::abs(dimer::imbalance(prop.evolve(psi0, t)) - std::cos(2.0 * t)));
    }
    CHECK(worst < 1e-8);
}

TEST_CASE("collapse of the tunnelling oscillation")
{
    // Gaussian envelope: down to about 1/e near t = 46, gone by t = 100
    const auto p = dimer::DimerParams::from_lambda(10, 0.1);
    const dimer::DimerPropagator prop(p);
    const auto psi0 = dimer::FockState::left_condensate(10);
    double early = 0.0;
    double mid = 0.0;
    double late = 0.0;
    for (int k = 0; k <= 40; ++k) {
        early = std::max(early, std::abs(dimer::imbalance(prop.evolve(psi0, 0.1 * k))));
        mid = std::max(mid, std::abs(dimer::imbalance(prop.evolve(psi0, 44.0 + 0.1 * k))));
        late = std::max(late, std::abs(dimer::imbalance(prop.evolve(psi0, 100.0 + 0.1 * k))));
    }
    CHECK(early > 0.99);
    CHECK(mid > 0.2);
    CHECK(mid < 0.45);
    CHECK(late < 0.01);
}

TEST_CASE("exact_rdm special states")
{
    const int N = 6;
    const auto cond = dimer::FockState::left_condensate(N);
    for (int o = 1; o <= N; ++o) {
        Occupation n{o, 0};
        CHECK(max_diff(dimer::exact_rdm(cond, o), SymOperator::outer(2, n, n)) < 1e-14);
    }

    const auto noon = dimer::FockState::noon(N, 0.7);
    for (int o = 1; o < N; ++o) {
        auto want = SymOperator::zero(2, o);
        want.matrix()(0, 0) = 0.5;
        want.matrix()(o, o) = 0.5;
        CHECK(max_diff(dimer::exact_rdm(noon, o), want) < 1e-14);
    }

    CHECK_THROWS_AS(dimer::exact_rdm(cond, 0), std::invalid_argument);
    CHECK_THROWS_AS(dimer::exact_rdm(cond, N + 1), std::invalid_argument);
}

TEST_CASE("exact_rdm against the tensor-space oracle")
{
    std::mt19937_64 rng(12);
    for (int N : {2, 4, 7}) {
        const auto psi = random_state(N, rng);
        for (int o = 1; o <= N; ++o) {
            CHECK(max_diff(dimer::exact_rdm(psi, o), brute_force_rdm(psi, o)) < 1e-12);
        }
    }
}

TEST_CASE("exact_rdm invariants")
{
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 20; ++trial) {
        const int N = 2 + trial % 9;
        const auto psi = random_state(N, rng);
        for (int o = 1; o <= N; ++o) {
            const auto r = dimer::exact_rdm(psi, o);
            CHECK(std::abs(r.trace() - 1.0) < 1e-12);
            CHECK(r.is_hermitian(1e-13));
            CHECK(min_eigenvalue(r.matrix()) > -1e-12);
            if (o < N) {
                CHECK(max_diff(partial_trace(dimer::exact_rdm(psi, o + 1), 1), r) < 1e-10);
            }
        }
    }

    // large N stays finite and normalized
    const auto psi = random_state(150, rng);
    const auto r = dimer::exact_rdm(psi, 4);
    CHECK(std::abs(r.trace() - 1.0) < 1e-10);
    CHECK(r.matrix().allFinite());
}

TEST_CASE("fock probabilities")
{
    const auto p0 = dimer::fock_probabilities(dimer::FockState::left_condensate(5));
    CHECK(p0(0) == 1.0);
    CHECK(p0.tail(5).cwiseAbs().maxCoeff() == 0.0);
    const auto pn = dimer::fock_probabilities(dimer::FockState::noon(5));
    CHECK(pn(0) == doctest::Approx(0.5));
    CHECK(pn(5) == doctest::Approx(0.5));
    CHECK(pn.segment(1, 4).cwiseAbs().maxCoeff() < 1e-15);

    std::mt19937_64 rng(14);
    CHECK(std::abs(dimer::fock_probabilities(random_state(30, rng)).sum() - 1.0) < 1e-10);
}
