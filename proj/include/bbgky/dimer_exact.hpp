#pragma once

// Numerically exact N-boson solver for the two-site Bose-Hubbard model
//   H = -J (a_L^dag a_R + a_R^dag a_L) + U/2 [n_L (n_L - 1) + n_R (n_R - 1)].
// Fock basis entry n is |N - n, n>, i.e. n atoms in the right well.

#include "bbgky/symspace.hpp"

namespace bbgky::dimer {

struct DimerParams {
    int N = 2;
    double J = 1.0;
    double U = 0.0;

    /// Lambda = U (N - 1) / (2 J).
    double lambda() const { return U * (N - 1) / (2.0 * J); }

    static DimerParams from_lambda(int N, double lambda, double J = 1.0);
    /// Throws std::invalid_argument unless N >= 1 and J > 0.
    void validate() const;
};

/// Coefficients in the basis |N - n, n>, n = 0..N.
struct FockState {
    ComplexVector coefficients;

    int particles() const { return static_cast<int>(coefficients.size()) - 1; }
    double norm() const { return coefficients.norm(); }

    static FockState left_condensate(int N);
    /// (|N,0> + e^{i theta} |0,N>) / sqrt(2)
    static FockState noon(int N, double theta = 0.0);
};

RealMatrix build_hamiltonian(const DimerParams& p);

/// Eigendecomposition of H, reused for propagation to many times.
class DimerPropagator {
public:
    explicit DimerPropagator(const DimerParams& p);

    const DimerParams& params() const { return params_; }
    const RealVector& energies() const { return energies_; }
    const RealMatrix& eigenvectors() const { return vectors_; }

    /// exp(-i H t) psi0.
    FockState evolve(const FockState& psi0, double t) const;
    double energy(const FockState& psi) const;

private:
    DimerParams params_;
    RealMatrix hamiltonian_;
    RealVector energies_;
    RealMatrix vectors_;
};

FockState evolve(const FockState& psi0, const DimerParams& p, double t);

/// Trace-one o-RDM on the two-mode symmetric space:
///   rho(n; n') = <(a^dag)^{n'} a^{n}> / (C(N, o) sqrt(n! n'!)).
/// Throws std::invalid_argument for o < 1 or o > N.
Rdm exact_rdm(const FockState& psi, int o);

/// |<N - n, n|psi>|^2 for n = 0..N.
RealVector fock_probabilities(const FockState& psi);

/// (N_L - N_R) / N evaluated directly on the wavefunction.
double imbalance(const FockState& psi);

}  // namespace bbgky::dimer
