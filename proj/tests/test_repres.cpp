#include "bbgky/cluster.hpp"
#include "bbgky/dimer_exact.hpp"
#include "bbgky/repres.hpp"

#include "support.hpp"

#include <doctest.h>

#include <array>

using namespace bbgky;
using namespace testing;
namespace rp = bbgky::repres;

namespace {

rp::KMatrix exact_k(const dimer::FockState& psi)
{
    return rp::k_matrix(dimer::exact_rdm(psi, 2), dimer::exact_rdm(psi, 1), psi.particles());
}

// <a_i^dag a_j a_l^dag a_k> / N^2 evaluated on the Fock vector.
ComplexMatrix brute_force_k(const dimer::FockState& psi)
{
    const int N = psi.particles();
    const int d = N + 1;
    // mode operators on the fixed-N space need number-changing maps; work on
    // the pair a_i^dag a_j, which conserves N
    std::array<std::array<RealMatrix, 2>, 2> e;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            e[i][j] = RealMatrix::Zero(d, d);
        }
    }
    for (int n = 0; n <= N; ++n) {
        // |N - n, n>: n_L = N - n, n_R = n
        e[0][0](n, n) = N - n;
        e[1][1](n, n) = n;
        if (n < N) {
            // a_R^dag a_L |N-n, n> = sqrt((N-n)(n+1)) |N-n-1, n+1>
            e[1][0](n + 1, n) = std::sqrt(static_cast<double>((N - n) * (n + 1)));
        }
        if (n > 0) {
            e[0][1](n - 1, n) = std::sqrt(static_cast<double>((N - n + 1) * n));
        }
    }
    ComplexMatrix k(4, 4);
    const ComplexVector& c = psi.coefficients;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            for (int kk = 0; kk < 2; ++kk) {
                for (int l = 0; l < 2; ++l) {
                    const ComplexMatrix op = (e[i][j] * e[l][kk]).cast<Complex>();
                    k(i * 2 + j, kk * 2 + l) = c.dot(op * c) / static_cast<double>(N * N);
                }
            }
        }
    }
    return k;
}

SymOperator contraction_free(std::mt19937_64& rng)
{
    const auto x = random_hermitian(2, 2, rng);
    return x - cluster::minimal_lift(partial_trace(x, 1));
}

}  // namespace

TEST_CASE("condensate K spectrum")
{
    for (int N : {2, 10, 100}) {
        const auto k = exact_k(dimer::FockState::left_condensate(N));
        const auto s = rp::spectrum(k.matrix);
        CHECK(std::abs(s.values(0)) < 1e-10);
        CHECK(std::abs(s.values(1)) < 1e-10);
        CHECK(std::abs(s.values(2) - 1.0 / N) < 1e-10);
        CHECK(std::abs(s.values(3) - 1.0) < 1e-10);
    }
}

TEST_CASE("K against second quantization")
{
    std::mt19937_64 rng(41);
    for (int N : {2, 5, 9}) {
        const auto psi = random_state(N, rng);
        CHECK(max_abs(exact_k(psi).matrix - brute_force_k(psi)) < 1e-12);
    }
}

TEST_CASE("K is positive and has fixed trace on exact states")
{
    std::mt19937_64 rng(42);
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const int N = 2 + trial % 9;
        const auto k = exact_k(random_state(N, rng));
        worst = std::min(worst, min_eigenvalue(k.matrix));
        CHECK(std::abs(k.matrix.trace() - (N + 1.0) / N) < 1e-12);
        CHECK(max_abs(k.matrix - k.matrix.adjoint()) < 1e-13);
    }
    CHECK(worst > -1e-12);
}

TEST_CASE("K is linear")
{
    std::mt19937_64 rng(43);
    const int N = 7;
    const auto a2 = random_hermitian(2, 2, rng);
    const auto b2 = random_hermitian(2, 2, rng);
    const auto a1 = random_hermitian(2, 1, rng);
    const auto b1 = random_hermitian(2, 1, rng);
    const double s = 0.37;
    const ComplexMatrix lhs = rp::k_linear(a2 + s * b2, a1 + s * b1, N);
    const ComplexMatrix rhs = rp::k_linear(a2, a1, N) + s * rp::k_linear(b2, b1, N);
    CHECK(max_abs(lhs - rhs) < 1e-12);
}

TEST_CASE("k_matrix checks consistency")
{
    std::mt19937_64 rng(44);
    const auto psi = random_state(6, rng);
    auto r1 = dimer::exact_rdm(psi, 1);
    r1.matrix()(0, 1) += 1e-5;
    r1.matrix()(1, 0) += 1e-5;
    CHECK_THROWS_AS(rp::k_matrix(dimer::exact_rdm(psi, 2), r1, 6), std::invalid_argument);
}

TEST_CASE("k_perturbation")
{
    std::mt19937_64 rng(45);
    const int N = 10;
    CHECK(max_abs(rp::k_perturbation(SymOperator::zero(2, 2), N)) == 0.0);

    const auto psi = random_state(N, rng);
    const auto r2 = dimer::exact_rdm(psi, 2);
    const auto r1 = dimer::exact_rdm(psi, 1);
    const auto base = rp::k_matrix(r2, r1, N).matrix;
    for (int trial = 0; trial < 5; ++trial) {
        const auto c = contraction_free(rng);
        const auto dk = rp::k_perturbation(c, N);
        CHECK(max_abs(dk - dk.adjoint()) < 1e-14);
        CHECK(std::abs(dk.trace()) < 1e-13);
        const double s = 1e-3;
        const auto moved = rp::k_matrix(r2 + s * c, r1, N).matrix;
        CHECK(max_abs((moved - base) - s * dk) < 1e-12);
        CHECK(max_abs(dk - rp::k_linear(c, SymOperator::zero(2, 1), N)) < 1e-15);
    }
    CHECK_THROWS_AS(rp::k_perturbation(SymOperator::identity(2, 2), N), std::invalid_argument);
}

TEST_CASE("spectrum examples")
{
    const auto half = rp::spectrum(0.5 * ComplexMatrix::Identity(2, 2));
    CHECK(half.values(0) == doctest::Approx(0.5));
    CHECK(half.values(1) == doctest::Approx(0.5));

    const auto noon = rp::spectrum(dimer::exact_rdm(dimer::FockState::noon(8), 2).matrix());
    CHECK(std::abs(noon.values(0)) < 1e-14);
    CHECK(noon.values(1) == doctest::Approx(0.5));
    CHECK(noon.values(2) == doctest::Approx(0.5));

    const auto cond = rp::spectrum(dimer::exact_rdm(dimer::FockState::left_condensate(8), 1).matrix());
    CHECK(std::abs(cond.values(0)) < 1e-15);
    CHECK(cond.values(1) == doctest::Approx(1.0));

    ComplexMatrix bad = ComplexMatrix::Zero(2, 2);
    bad(0, 1) = 1.0;
    CHECK_THROWS_AS(rp::spectrum(bad), std::invalid_argument);
}

TEST_CASE("spectrum properties")
{
    std::mt19937_64 rng(46);
    for (int trial = 0; trial < 20; ++trial) {
        const auto a = random_hermitian(3 + trial % 5, rng);
        const auto s = rp::spectrum(a);
        const double scale = a.norm();
        CHECK(std::is_sorted(s.values.data(), s.values.data() + s.values.size()));
        const ComplexMatrix resid = a * s.vectors - s.vectors * s.values.cast<Complex>().asDiagonal();
        CHECK(max_abs(resid) < 1e-10 * scale);
        const auto n = s.values.size();
        CHECK(max_abs(s.vectors.adjoint() * s.vectors - ComplexMatrix::Identity(n, n)) < 1e-12);
        for (Eigen::Index c = 0; c < n; ++c) {
            Eigen::Index at = 0;
            s.vectors.col(c).cwiseAbs().maxCoeff(&at);
            CHECK(std::abs(s.vectors(at, c).imag()) < 1e-14);
            CHECK(s.vectors(at, c).real() > 0.0);
        }
    }

    // degenerate cluster: still orthonormal and deterministic
    ComplexMatrix d = ComplexMatrix::Zero(4, 4);
    d(0, 0) = d(1, 1) = d(2, 2) = 0.25;
    d(3, 3) = 0.25 + 1e-14;
    const auto s1 = rp::spectrum(d);
    const auto s2 = rp::spectrum(d);
    CHECK(max_abs(s1.vectors.adjoint() * s1.vectors - ComplexMatrix::Identity(4, 4)) < 1e-12);
    CHECK(s1.vectors == s2.vectors);
}

TEST_CASE("natural populations sum to one")
{
    std::mt19937_64 rng(47);
    for (int o = 1; o <= 5; ++o) {
        const auto s = rp::spectrum(dimer::exact_rdm(random_state(9, rng), o).matrix());
        CHECK(std::abs(s.values.sum() - 1.0) < 1e-10);
    }
}
