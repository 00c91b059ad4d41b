#pragma once

// Symmetric (bosonic) few-particle spaces of m modes in the occupation-number
// basis, and the operations needed to move operators between orders.

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

namespace bbgky {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

using Occupation = std::vector<int>;

/// Number of occupation vectors of o bosons in m modes, C(m+o-1, o).
/// Throws std::overflow_error if the count does not fit in int64.
std::int64_t dimension(int m, int o);

/// Occupation basis of the o-particle symmetric space of m modes.
///
/// States are listed lexicographically descending (n_1 first, then n_2, ...),
/// so for m = 2 the state index equals the occupation of the second mode.
class SymBasis {
public:
    SymBasis(int m, int o);

    int modes() const { return m_; }
    int order() const { return o_; }
    std::size_t size() const { return states_.size(); }

    const Occupation& state(std::size_t i) const { return states_[i]; }
    const std::vector<Occupation>& states() const { return states_; }

    /// Index of an occupation vector; throws std::out_of_range if absent.
    std::size_t index(const Occupation& n) const;
    bool contains(const Occupation& n) const { return lookup_.count(n) != 0; }

    bool operator==(const SymBasis& other) const { return m_ == other.m_ && o_ == other.o_; }

private:
    int m_;
    int o_;
    std::vector<Occupation> states_;
    std::map<Occupation, std::size_t> lookup_;
};

/// Shared immutable basis instance for (m, o).
std::shared_ptr<const SymBasis> sym_basis(int m, int o);

/// Operator on a symmetric o-particle space, stored as a dense matrix in the
/// occupation basis.
class SymOperator {
public:
    SymOperator() = default;
    SymOperator(std::shared_ptr<const SymBasis> basis, ComplexMatrix elements);

    static SymOperator zero(int m, int o);
    static SymOperator identity(int m, int o);
    /// |n><n'| in the occupation basis.
    static SymOperator outer(int m, const Occupation& bra_state, const Occupation& ket_state);

    const SymBasis& basis() const { return *basis_; }
    std::shared_ptr<const SymBasis> basis_ptr() const { return basis_; }
    int modes() const { return basis_->modes(); }
    int order() const { return basis_->order(); }
    std::size_t dim() const { return basis_->size(); }

    const ComplexMatrix& matrix() const { return elements_; }
    ComplexMatrix& matrix() { return elements_; }

    Complex trace() const { return elements_.trace(); }
    /// Largest |A - A^dagger| element.
    double hermiticity_defect() const;
    bool is_hermitian(double tol = 1e-12) const { return hermiticity_defect() < tol; }

    SymOperator adjoint() const { return {basis_, elements_.adjoint()}; }

    SymOperator& operator+=(const SymOperator& rhs);
    SymOperator& operator-=(const SymOperator& rhs);
    SymOperator& operator*=(Complex s);

    friend SymOperator operator+(SymOperator a, const SymOperator& b) { return a += b; }
    friend SymOperator operator-(SymOperator a, const SymOperator& b) { return a -= b; }
    friend SymOperator operator*(Complex s, SymOperator a) { return a *= s; }
    friend SymOperator operator*(SymOperator a, Complex s) { return a *= s; }

private:
    void require_same_space(const SymOperator& other) const;

    std::shared_ptr<const SymBasis> basis_;
    ComplexMatrix elements_;
};

/// Trace-one Hermitian operator on a symmetric space; the state object of the
/// hierarchy. Kept as an alias: the trace convention is a contract, not a
/// separate representation.
using Rdm = SymOperator;

/// Isometry from the occupation basis into (C^m)^{\otimes o}; column n holds
/// the normalized symmetrized tensor of occupation n. Row index of the
/// ordered state (s_1..s_o) is sum_k s_k m^{o-k}.
ComplexMatrix symmetric_isometry(int m, int o);

/// U A U^dagger on the ordered tensor space.
ComplexMatrix embed_ordered(const SymOperator& a);

/// Inverse of embed_ordered for operators supported on the symmetric subspace.
SymOperator restrict_symmetric(const ComplexMatrix& ordered, int m, int o);

/// Trace over k particles. Requires 1 <= k < order (throws std::invalid_argument).
SymOperator partial_trace(const SymOperator& a, int k = 1);

/// P_s (A_1 x ... x A_p) P_s on the symmetric space of order sum o_i.
SymOperator sym_product(std::span<const SymOperator> ops);
SymOperator sym_product(const SymOperator& a, const SymOperator& b);

/// Adjoint of partial_trace(., 1): A -> P_s (A x 1) P_s.
SymOperator lift_identity(const SymOperator& a);

/// Coefficients of the decomposition
///   |S(n)> = sum_k c(n, k) |S(k)> x |S(n - k)>,  |k| = a, |n - k| = b,
/// with c(n, k) = sqrt(prod_s C(n_s, k_s) / C(a + b, a)).
struct SplitTerm {
    std::size_t head;  // index of k in the order-a basis
    std::size_t tail;  // index of n - k in the order-b basis
    double coeff;
};

class SplitTable {
public:
    SplitTable(int m, int a, int b);
    int head_order() const { return a_; }
    int tail_order() const { return b_; }
    /// Terms for the state with index n in the order-(a+b) basis.
    const std::vector<SplitTerm>& terms(std::size_t n) const { return terms_[n]; }

private:
    int a_;
    int b_;
    std::vector<std::vector<SplitTerm>> terms_;
};

/// Shared immutable split table.
const SplitTable& split_table(int m, int a, int b);

/// <S(n)| (|s_1 ... s_k>) for an ordered product state: sqrt(prod n! / k!) if
/// the sequence has occupation n, zero otherwise.
double symmetric_overlap(const Occupation& n, std::span<const int> sequence);

/// Binomial coefficient as a double (exact for results below 2^53).
double binomial(int n, int k);

}  // namespace bbgky
