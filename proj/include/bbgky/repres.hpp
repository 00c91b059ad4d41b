#pragma once

// Representability diagnostics: the one-particle-one-hole (K) matrix and a
// deterministic Hermitian eigensolver shared by every spectrum we report.

#include "bbgky/symspace.hpp"

namespace bbgky::repres {

/// Garrod's un-subtracted particle-hole matrix
///   K[(i,j),(k,l)] = <a_i^dag a_j a_l^dag a_k> / N^2,
/// pair (i, j) at index i*m + j. Its trace is (N + m - 1) / N.
struct KMatrix {
    int m = 2;
    int N = 2;
    ComplexMatrix matrix;
};

/// Throws std::invalid_argument when partial_trace(rho2) and rho1 differ by
/// more than compat_tol.
KMatrix k_matrix(const Rdm& rho2, const Rdm& rho1, int N, double compat_tol = 1e-8);

/// The same formula without the consistency check. K is linear in (rho2, rho1),
/// so this is also its derivative map.
ComplexMatrix k_linear(const SymOperator& c2, const SymOperator& c1, int N);

/// K-matrix change produced by a contraction-free 2-body change C:
/// (1 - 1/N) <k j|C|i l>. Throws when partial_trace(C) exceeds tol.
ComplexMatrix k_perturbation(const SymOperator& c, int N, double tol = 1e-10);

struct Spectrum {
    RealVector values;      // ascending
    ComplexMatrix vectors;  // column i belongs to values(i)
};

/// Eigen-decomposition with ascending eigenvalues. Eigenvectors of a cluster
/// of eigenvalues closer than degeneracy_tol are orthonormalized together,
/// then each is rotated so its largest-magnitude component is real positive.
/// Throws std::invalid_argument if a is not Hermitian to herm_tol.
Spectrum spectrum(const ComplexMatrix& a, double herm_tol = 1e-10, double degeneracy_tol = 1e-12);

}  // namespace bbgky::repres
