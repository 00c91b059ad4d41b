#pragma once

#include "bbgky/dimer_exact.hpp"
#include "bbgky/symspace.hpp"

#include <random>

namespace testing {

using namespace bbgky;

inline dimer::FockState random_state(int N, std::mt19937_64& rng)
{
    std::normal_distribution<double> g;
    dimer::FockState psi;
    psi.coefficients.resize(N + 1);
    for (int n = 0; n <= N; ++n) {
        psi.coefficients(n) = Complex(g(rng), g(rng));
    }
    psi.coefficients.normalize();
    return psi;
}

inline ComplexMatrix random_hermitian(Eigen::Index d, std::mt19937_64& rng)
{
    std::normal_distribution<double> g;
    ComplexMatrix a(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) {
            a(i, j) = Complex(g(rng), g(rng));
        }
    }
    return (a + a.adjoint()) / 2.0;
}

inline SymOperator random_hermitian(int m, int o, std::mt19937_64& rng)
{
    auto b = sym_basis(m, o);
    return {b, random_hermitian(static_cast<Eigen::Index>(b->size()), rng)};
}

/// Random density operator (trace one, PSD) on the symmetric o-particle space.
inline Rdm random_density(int m, int o, std::mt19937_64& rng)
{
    auto b = sym_basis(m, o);
    const auto d = static_cast<Eigen::Index>(b->size());
    std::normal_distribution<double> g;
    ComplexMatrix x(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) {
            x(i, j) = Complex(g(rng), g(rng));
        }
    }
    ComplexMatrix r = x * x.adjoint();
    r /= r.trace();
    return {b, r};
}

inline double max_abs(const ComplexMatrix& a)
{
    return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

inline double max_diff(const SymOperator& a, const SymOperator& b)
{
    return max_abs(a.matrix() - b.matrix());
}

inline double min_eigenvalue(const ComplexMatrix& a)
{
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(a, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

}  // namespace testing
