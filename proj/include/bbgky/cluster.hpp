#pragma once

// Cluster (correlation) decomposition of RDM families and the truncation
// closure built from it.
//
// Convention: with Sym the projector-normalized symmetric product,
//   rho_o = sum_{lambda |- o} Sym(c_{lambda_1} x c_{lambda_2} x ...),
// one term per integer partition lambda of o. Clusters follow by Moebius
// inversion, c_o = rho_o - sum_{lambda != (o)} Sym(...).

#include "bbgky/symspace.hpp"

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace bbgky::cluster {

/// How rho_{o+1} is approximated once the top cluster is dropped.
enum class ClosureStrategy {
    /// Partition sum with c_{o+1} := 0, as is.
    unit_weight,
    /// unit_weight plus the minimal-norm operator restoring
    /// partial_trace(rho_{o+1}) = rho_o, i.e. only the contraction-free part
    /// of the top cluster is discarded.
    compatible,
};

ClosureStrategy parse_strategy(const std::string& name);
std::string to_string(ClosureStrategy s);

class IncompatibleRdms : public std::runtime_error {
public:
    IncompatibleRdms(int order, double deviation);
    int order() const { return order_; }
    double max_deviation() const { return deviation_; }

private:
    int order_;
    double deviation_;
};

struct ClusterSet {
    /// clusters[o - 1] is c_o.
    std::vector<SymOperator> clusters;

    int max_order() const { return static_cast<int>(clusters.size()); }
    const SymOperator& operator[](int o) const { return clusters.at(static_cast<std::size_t>(o - 1)); }
};

/// Integer partitions of o with parts in non-increasing order, including (o).
/// The table is built once per order and shared read-only.
const std::vector<std::vector<int>>& partitions(int o);

/// rdms[o - 1] = rho_o for o = 1..K. Throws IncompatibleRdms when a partial
/// trace of rho_{o+1} deviates from rho_o by more than compat_tol.
ClusterSet clusters_from_rdms(std::span<const Rdm> rdms, double compat_tol = 1e-8);

/// Partition-sum value of rho_o from the clusters; throws for o > K.
SymOperator recompose_rdm(const ClusterSet& cs, int o);

/// Partition sum of order o omitting the single-block term (o).
SymOperator disconnected_part(const ClusterSet& cs, int o);

/// All lower RDMs of rho_top by repeated partial tracing; result[o - 1] = rho_o.
std::vector<Rdm> traced_family(const Rdm& rho_top);

/// Approximant of rho_{top+1} from rho_top alone. Needs 1 <= top <= N - 1.
SymOperator closure(const Rdm& rho_top, int N, ClosureStrategy strategy = ClosureStrategy::compatible);

/// Minimal-Frobenius-norm X on order o + 1 with partial_trace(X) = target.
SymOperator minimal_lift(const SymOperator& target);

/// ||c_o||_1 (sum of absolute eigenvalues) for o = 1..K.
RealVector cluster_norms(const ClusterSet& cs);

}  // namespace bbgky::cluster
