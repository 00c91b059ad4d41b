#include "bbgky/trajectory.hpp"

#include "bbgky/cluster.hpp"

namespace bbgky {

std::string to_string(Termination t)
{
    switch (t) {
    case Termination::completed:
        return "completed";
    case Termination::stiffness_abort:
        return "StiffnessAbort";
    case Termination::infeasible_correction:
        return "InfeasibleCorrection";
    }
    return "unknown";
}

TrajectoryRecord make_record(double t, const Rdm& rho_top, long steps, long rejected)
{
    TrajectoryRecord rec;
    rec.t = t;
    rec.steps = steps;
    rec.rejected = rejected;
    rec.rdms = cluster::traced_family(rho_top);
    rec.nps.reserve(rec.rdms.size());
    for (const auto& r : rec.rdms) {
        const ComplexMatrix h = 0.5 * (r.matrix() + r.matrix().adjoint());
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h, Eigen::EigenvaluesOnly);
        rec.nps.push_back(solver.eigenvalues().reverse());
    }
    return rec;
}

}  // namespace bbgky
