#include "bbgky/diagnostics.hpp"

#include "bbgky/repres.hpp"

#include <stdexcept>

namespace bbgky::diagnostics {

double imbalance(const Rdm& rho)
{
    if (rho.modes() != 2) {
        throw std::invalid_argument("imbalance: defined for two modes only");
    }
    const auto rho1 = rho.order() == 1 ? rho : partial_trace(rho, rho.order() - 1);
    return (rho1.matrix()(0, 0) - rho1.matrix()(1, 1)).real();
}

RealVector natural_populations(const Rdm& rho)
{
    const ComplexMatrix h = 0.5 * (rho.matrix() + rho.matrix().adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().reverse();
}

double trace_norm(const ComplexMatrix& a)
{
    const ComplexMatrix h = 0.5 * (a + a.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().cwiseAbs().sum();
}

double trace_distance(const Rdm& a, const Rdm& b)
{
    if (!(a.basis() == b.basis())) {
        throw std::invalid_argument("trace_distance: operands live on different spaces");
    }
    return 0.5 * trace_norm(a.matrix() - b.matrix());
}

std::optional<double> t_neg(const Trajectory& traj, int o, double eps)
{
    for (const auto& rec : traj.records) {
        if (o < 1 || o > rec.top_order()) {
            throw std::invalid_argument("t_neg: order outside the propagated family");
        }
        const auto& np = rec.nps[static_cast<std::size_t>(o - 1)];
        if (np.size() > 0 && np(np.size() - 1) < eps) {
            return rec.t;
        }
    }
    return std::nullopt;
}

RealVector k_spectrum(const Rdm& rho, int N)
{
    if (rho.order() < 2) {
        throw std::invalid_argument("k_spectrum: needs an RDM of order >= 2");
    }
    const auto rho2 = rho.order() == 2 ? rho : partial_trace(rho, rho.order() - 2);
    const auto k = repres::k_linear(rho2, partial_trace(rho2, 1), N);
    const ComplexMatrix h = 0.5 * (k + k.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h, Eigen::EigenvaluesOnly);
    return solver.eigenvalues();
}

}  // namespace bbgky::diagnostics
