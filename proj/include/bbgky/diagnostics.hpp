#pragma once

// Figure-level observables computed from RDMs and trajectories. Unphysical
// values are reported as they are, never clamped.

#include "bbgky/trajectory.hpp"

#include <optional>

namespace bbgky::diagnostics {

/// (N_L - N_R) / N = rho_1(L,L) - rho_1(R,R); accepts any order and traces
/// down to the 1-RDM first. Two modes only.
double imbalance(const Rdm& rho);

/// Eigenvalues, descending.
RealVector natural_populations(const Rdm& rho);

/// Sum of absolute eigenvalues of the Hermitian part.
double trace_norm(const ComplexMatrix& a);

/// ||a - b||_1 / 2.
double trace_distance(const Rdm& a, const Rdm& b);

/// First record time whose lowest order-o natural population is below eps.
std::optional<double> t_neg(const Trajectory& traj, int o, double eps = -1e-10);

/// Ascending spectrum of the K matrix built from the 2-RDM traced from rho
/// (order >= 2).
RealVector k_spectrum(const Rdm& rho, int N);

}  // namespace bbgky::diagnostics
