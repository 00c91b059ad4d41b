#pragma once

// Truncated BBGKY equation of motion for the top propagated RDM, with the
// trace-one convention
//
//   i d/dt rho_o = [H_o, rho_o] + (N - o) sum_{k=1}^{o} Tr_{o+1} [W^{(k, o+1)}, rho_{o+1}],
//
// hbar = 1, energies in units of J, times in 1/J.

#include "bbgky/cluster.hpp"
#include "bbgky/dimer_exact.hpp"
#include "bbgky/symspace.hpp"

#include <vector>

namespace bbgky {

struct ModelOperators {
    int m = 2;
    /// One-body matrix h(i, j) = <i|h|j>.
    ComplexMatrix h;
    /// Two-body matrix on the ordered pair space, W((i,j),(k,l)) = <ij|W|kl>,
    /// pair (i, j) at index i*m + j.
    ComplexMatrix W;
    int N = 2;
    int top_order = 2;

    static ModelOperators bose_hubbard_dimer(const dimer::DimerParams& p, int top_order);
    /// Throws std::invalid_argument on shape or Hermiticity violations.
    void validate() const;
};

/// sum_k h^(k) + sum_{k<l} W^(kl) restricted to the symmetric o-particle space.
SymOperator h_full(const ModelOperators& ops, int o);

/// Tr_{o+1}(sum_{k<=o} W^{(k,o+1)} rho_{o+1}) on the symmetric o-particle space.
SymOperator collision_kernel(const SymOperator& rho_next, const ModelOperators& ops, int o);

/// Right-hand side of the order-o equation given an explicit rho_{o+1}.
SymOperator rhs_with_next(const Rdm& rho_top, const SymOperator& rho_next, const ModelOperators& ops);

/// Closed right-hand side at the truncation order; rho_{o+1} from the closure.
SymOperator rhs(const Rdm& rho_top, const ModelOperators& ops,
                cluster::ClosureStrategy strategy = cluster::ClosureStrategy::compatible);

/// Cached evaluator of the closed right-hand side for one model.
class HierarchyRhs {
public:
    HierarchyRhs(ModelOperators ops, cluster::ClosureStrategy strategy);

    const ModelOperators& model() const { return ops_; }
    cluster::ClosureStrategy strategy() const { return strategy_; }

    SymOperator operator()(const Rdm& rho_top) const;
    SymOperator with_next(const Rdm& rho_top, const SymOperator& rho_next) const;

private:
    ModelOperators ops_;
    cluster::ClosureStrategy strategy_;
    SymOperator h_top_;
    // kernel = sum_t left_[t] * rho_next * right_[t]^T
    std::vector<ComplexMatrix> left_;
    std::vector<RealMatrix> right_;
};

/// Interaction restricted to the symmetric two-particle space.
SymOperator pair_interaction(const ModelOperators& ops);

/// E = N tr(h rho_1) + N(N-1)/2 tr(W rho_2), lower RDMs traced from rho_top.
double energy(const Rdm& rho_top, const ModelOperators& ops);

/// Packed lower triangle: the d real diagonal entries, then real/imag pairs of
/// the strictly lower triangle in row-major order. Length d^2.
std::vector<double> pack_lower(const SymOperator& a);
void pack_lower(const SymOperator& a, std::span<double> out);
/// Hermitian by construction.
SymOperator unpack_lower(std::span<const double> packed, int m, int o);

}  // namespace bbgky
