#pragma once

// Minimal-norm stabilization of the propagated 2-RDM: iterative purification
// at write-out times, and correction of the equation of motion so negative
// rho_2 / K eigenvalues decay as exp(-eta t).

#include "bbgky/hierarchy.hpp"
#include "bbgky/repres.hpp"
#include "bbgky/trajectory.hpp"

#include <functional>
#include <string>
#include <vector>

namespace bbgky::corrections {

enum class Mode { none, purify, eom };

Mode parse_mode(const std::string& name);
std::string to_string(Mode mode);

struct CorrectionConfig {
    /// Eigenvalues below epsilon count as negative.
    double epsilon = -1e-10;
    /// Damping rate of negative eigenvalues, units of J.
    double eta = 10.0;
    int max_iter = 500;
    Mode mode = Mode::none;
    /// Purification cadence; equals the write-out interval.
    double dt = 0.1;

    void validate() const;
};

/// Real parameters of a Hermitian operator on the symmetric 2-particle space,
/// m^2 (m+1)^2 / 4.
int parameter_count(int m);
/// Contraction-free rows (m^2) plus the energy row.
int base_constraint_count(int m);
/// Rows removing parity-breaking blocks when half of the m modes are odd,
/// m^4/8 + m^3/4; requires even m.
int parity_constraint_count(int m);
/// Parameters left after base (and optionally parity) rows and d + d' eigenvalue
/// rows; the system is underdetermined iff this is positive.
int free_dimension(int m, int d, int d_prime, bool parity = false);

class InfeasibleCorrection : public TrajectoryHalt {
public:
    InfeasibleCorrection(const std::string& what, double residual)
        : TrajectoryHalt(Termination::infeasible_correction, what), residual_(residual)
    {
    }
    double residual() const { return residual_; }

private:
    double residual_;
};

/// Equality rows A x = b on the coordinates x of a Hermitian 2-body operator
/// in an orthonormal (Frobenius) basis: E_pp, (E_pq + E_qp)/sqrt2 and
/// i(E_pq - E_qp)/sqrt2 for p < q. Minimal |x| is then minimal Frobenius norm.
class ConstraintSystem {
public:
    explicit ConstraintSystem(int m);

    int modes() const { return m_; }
    int parameters() const { return static_cast<int>(basis_.size()); }
    int rows() const { return static_cast<int>(rhs_.size()); }
    const std::vector<SymOperator>& basis() const { return basis_; }
    RealMatrix matrix() const;
    RealVector rhs() const;
    const std::vector<std::string>& labels() const { return labels_; }

    /// Tr_1 C = 0 (m^2 rows).
    void add_contraction_free();
    /// tr(w2 C) = value, w2 a Hermitian 2-body operator.
    void add_trace_row(const SymOperator& w2, double value = 0.0, const std::string& label = "energy");
    /// <v|C|v> = value.
    void add_expectation(const ComplexVector& v, double value);
    /// <w|k_linear(C, 0, N)|w> = value; on contraction-free C this is the
    /// first-order change of <w|K|w>.
    void add_k_expectation(const ComplexVector& w, int N, double value);
    /// Zero matrix elements between 2-particle states of opposite parity;
    /// mode_parity[s] is +1 or -1.
    void add_parity(const std::vector<int>& mode_parity);
    /// Generic linear functional row. Droppable rows may be discarded by the
    /// solver when they depend linearly on earlier rows.
    void add_row(const std::function<double(const SymOperator&)>& functional, double value,
                 const std::string& label, bool droppable = false);
    bool droppable(int row) const { return droppable_[static_cast<std::size_t>(row)] != 0; }

    SymOperator to_operator(const RealVector& x) const;
    RealVector to_parameters(const SymOperator& c) const;

private:
    void push(RealVector row, double value, std::string label, bool droppable = false);

    int m_;
    std::vector<SymOperator> basis_;
    std::vector<RealVector> rows_;
    std::vector<double> rhs_;
    std::vector<std::string> labels_;
    std::vector<char> droppable_;
};

struct SolveOptions {
    /// Residual bound relative to max(1, |b|_inf).
    double tol = 1e-10;
    /// A droppable row whose component orthogonal to the rows kept before it
    /// is below dependence_tol times its norm is discarded. 0 keeps every row.
    double dependence_tol = 0.0;
};

struct LeastNormSolution {
    SymOperator c;
    double residual = 0.0;
    int rank = 0;
    int dropped = 0;
};

/// argmin |C|_F subject to the rows. Throws InfeasibleCorrection when the
/// least-squares residual exceeds the tolerance.
LeastNormSolution solve_least_norm(const ConstraintSystem& sys, const SolveOptions& options = {});
SymOperator least_norm_correction(const ConstraintSystem& sys, double tol = 1e-10);

/// Row-dependence threshold used by purify and corrected_rhs.
inline constexpr double eigen_row_dependence_tol = 1e-6;

struct PurifyOptions {
    /// Contraction-free and energy rows.
    bool base_rows = true;
    /// K-condition rows.
    bool k_rows = true;
};

struct PurifyResult {
    Rdm rho2;
    int iterations = 0;
    bool converged = true;
    int d = 0;        // active rho_2 eigenvalues at the first iteration
    int d_prime = 0;  // active K eigenvalues at the first iteration
    int dropped = 0;  // dependent eigenvalue rows discarded, summed over iterations
    double norm = 0.0;  // |rho2_out - rho2_in|_F
    double contraction_residual = 0.0;
    double energy_residual = 0.0;
};

/// Iterated first-order shift of every eigenvalue below epsilon to zero.
/// Non-convergence after max_iter is flagged, not thrown; an infeasible
/// system throws InfeasibleCorrection.
PurifyResult purify(const Rdm& rho2, const ModelOperators& ops, const CorrectionConfig& cfg,
                    const PurifyOptions& options = {});

struct EomCorrection {
    SymOperator derivative;  // R + C
    int d = 0;
    int d_prime = 0;
    int dropped = 0;
    double norm = 0.0;  // |C|_F
    double contraction_residual = 0.0;
    double energy_residual = 0.0;
};

/// Right-hand side with the minimal correction C imposing
/// <v|R + C|v> = -eta lambda and <w|Kdot(R) + dK(C)|w> = -eta xi on every
/// active eigenpair, plus contraction-free and energy rows.
EomCorrection corrected_rhs(const Rdm& rho2, const HierarchyRhs& base, const CorrectionConfig& cfg);

}  // namespace bbgky::corrections
