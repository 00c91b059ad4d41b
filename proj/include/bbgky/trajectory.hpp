#pragma once

#include "bbgky/symspace.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace bbgky {

enum class Termination {
    completed,
    stiffness_abort,
    infeasible_correction,
};

std::string to_string(Termination t);

/// Base for errors that stop a trajectory with a diagnosed reason.
class TrajectoryHalt : public std::runtime_error {
public:
    TrajectoryHalt(Termination reason, const std::string& what) : std::runtime_error(what), reason_(reason) {}
    Termination reason() const { return reason_; }

private:
    Termination reason_;
};

struct CorrectionEvent {
    double t = 0.0;
    std::string kind;  // "purify" or "eom"
    int d = 0;         // active rho_2 eigenvalues
    int d_prime = 0;   // active K eigenvalues
    double norm = 0.0;  // Frobenius norm of the correction operator
    int iterations = 0;
    bool converged = true;
    double contraction_residual = 0.0;  // max |Tr_1 C|
    double energy_residual = 0.0;       // |tr(W C)|
    int dropped = 0;  // dependent eigenvalue rows left out of the solve
};

struct TrajectoryRecord {
    double t = 0.0;
    /// rdms[o - 1] = rho_o, o = 1..top.
    std::vector<Rdm> rdms;
    /// Natural populations per order, descending.
    std::vector<RealVector> nps;
    long steps = 0;
    long rejected = 0;

    int top_order() const { return static_cast<int>(rdms.size()); }
    const Rdm& rdm(int o) const { return rdms.at(static_cast<std::size_t>(o - 1)); }
};

/// Builds the record for one emission: traces rho_top down and diagonalizes
/// every order.
TrajectoryRecord make_record(double t, const Rdm& rho_top, long steps, long rejected);

struct Trajectory {
    std::vector<TrajectoryRecord> records;
    std::vector<CorrectionEvent> corrections;
    Termination termination = Termination::completed;
    std::string message;
};

}  // namespace bbgky
