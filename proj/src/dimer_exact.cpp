#include "bbgky/dimer_exact.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace bbgky::dimer {

DimerParams DimerParams::from_lambda(int N, double lambda, double J)
{
    if (N < 2) {
        throw std::invalid_argument("DimerParams: Lambda needs N >= 2");
    }
    return {N, J, 2.0 * J * lambda / (N - 1)};
}

void DimerParams::validate() const
{
    if (N < 1) {
        throw std::invalid_argument("DimerParams: N must be >= 1");
    }
    if (!(J > 0.0)) {
        throw std::invalid_argument("DimerParams: J must be positive");
    }
}

FockState FockState::left_condensate(int N)
{
    FockState s{ComplexVector::Zero(N + 1)};
    s.coefficients(0) = 1.0;
    return s;
}

FockState FockState::noon(int N, double theta)
{
    FockState s{ComplexVector::Zero(N + 1)};
    s.coefficients(0) = std::numbers::sqrt2 / 2.0;
    s.coefficients(N) = std::polar(std::numbers::sqrt2 / 2.0, theta);
    return s;
}

RealMatrix build_hamiltonian(const DimerParams& p)
{
    p.validate();
    const int N = p.N;
    RealMatrix h = RealMatrix::Zero(N + 1, N + 1);
    for (int n = 0; n <= N; ++n) {
        const double left = N - n;
        const double right = n;
        h(n, n) = 0.5 * p.U * (left * (left - 1.0) + right * (right - 1.0));
        if (n < N) {
            // a_R^dag a_L |N-n, n> = sqrt((N-n)(n+1)) |N-n-1, n+1>
            const double hop = -p.J * std::sqrt(left * (right + 1.0));
            h(n + 1, n) = hop;
            h(n, n + 1) = hop;
        }
    }
    return h;
}

DimerPropagator::DimerPropagator(const DimerParams& p) : params_(p), hamiltonian_(build_hamiltonian(p))
{
    Eigen::SelfAdjointEigenSolver<RealMatrix> solver(hamiltonian_);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("DimerPropagator: eigendecomposition failed");
    }
    energies_ = solver.eigenvalues();
    vectors_ = solver.eigenvectors();
}

FockState DimerPropagator::evolve(const FockState& psi0, double t) const
{
    if (psi0.particles() != params_.N) {
        throw std::invalid_argument("evolve: state has wrong particle number");
    }
    ComplexVector amp = vectors_.transpose().cast<Complex>() * psi0.coefficients;
    for (Eigen::Index k = 0; k < amp.size(); ++k) {
        amp(k) *= std::polar(1.0, -energies_(k) * t);
    }
    return {vectors_.cast<Complex>() * amp};
}

double DimerPropagator::energy(const FockState& psi) const
{
    return (psi.coefficients.adjoint() * hamiltonian_.cast<Complex>() * psi.coefficients)(0).real();
}

FockState evolve(const FockState& psi0, const DimerParams& p, double t)
{
    return DimerPropagator(p).evolve(psi0, t);
}

Rdm exact_rdm(const FockState& psi, int o)
{
    const int N = psi.particles();
    if (o < 1 || o > N) {
        throw std::invalid_argument("exact_rdm: need 1 <= o <= N (o=" + std::to_string(o) +
                                    ", N=" + std::to_string(N) + ")");
    }
    // phi_n = a_L^{n_L} a_R^{n_R} |psi> / sqrt(n! C(N, o)), living in the
    // (N - o)-particle sector indexed by its right-well occupation. The
    // amplitude factor sqrt(C(N-q, n_L) C(q, n_R) / C(N, o)) is a square
    // root of a hypergeometric probability, hence bounded by one.
    const double norm = binomial(N, o);
    auto out = SymOperator::zero(2, o);
    const auto d = o + 1;
    ComplexMatrix phi = ComplexMatrix::Zero(N - o + 1, d);
    for (int nr = 0; nr <= o; ++nr) {
        const int nl = o - nr;
        for (int q = nr; q <= N - nl; ++q) {
            const double w = binomial(N - q, nl) * binomial(q, nr) / norm;
            phi(q - nr, nr) = psi.coefficients(q) * std::sqrt(w);
        }
    }
    // rho(n; n') = <phi_{n'} | phi_n>
    out.matrix() = (phi.adjoint() * phi).transpose();
    return out;
}

RealVector fock_probabilities(const FockState& psi)
{
    return psi.coefficients.cwiseAbs2();
}

double imbalance(const FockState& psi)
{
    const int N = psi.particles();
    const RealVector p = fock_probabilities(psi);
    double acc = 0.0;
    for (int n = 0; n <= N; ++n) {
        acc += p(n) * (N - 2.0 * n);
    }
    return acc / N;
}

}  // namespace bbgky::dimer
