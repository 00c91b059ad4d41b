#include "bbgky/repres.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace bbgky::repres {

ComplexMatrix k_linear(const SymOperator& c2, const SymOperator& c1, int N)
{
    if (c2.order() != 2 || c1.order() != 1 || c2.modes() != c1.modes()) {
        throw std::invalid_argument("k_linear: need a 2-body and a 1-body operator on the same modes");
    }
    if (N < 2) {
        throw std::invalid_argument("k_linear: N must be >= 2");
    }
    const int m = c2.modes();
    const ComplexMatrix m2 = embed_ordered(c2);
    const auto& m1 = c1.matrix();
    const double n = N;
    const double pair_weight = (n - 1.0) / n;
    const double single_weight = 1.0 / n;

    // <a_i^dag a_j a_l^dag a_k> = <a_i^dag a_l^dag a_k a_j> + delta_jl <a_i^dag a_k>
    // with <a_c^dag a_d^dag a_b a_a> = N(N-1) M2(ab; cd) and <a_b^dag a_a> = N M1(a; b).
    ComplexMatrix k = ComplexMatrix::Zero(m * m, m * m);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            for (int kk = 0; kk < m; ++kk) {
                for (int l = 0; l < m; ++l) {
                    Complex v = pair_weight * m2(kk * m + j, i * m + l);
                    if (j == l) {
                        v += single_weight * m1(kk, i);
                    }
                    k(i * m + j, kk * m + l) = v;
                }
            }
        }
    }
    return k;
}

KMatrix k_matrix(const Rdm& rho2, const Rdm& rho1, int N, double compat_tol)
{
    if (rho2.order() != 2 || rho1.order() != 1 || rho2.modes() != rho1.modes()) {
        throw std::invalid_argument("k_matrix: need rho_2 and rho_1 on the same modes");
    }
    const double dev = (partial_trace(rho2, 1).matrix() - rho1.matrix()).cwiseAbs().maxCoeff();
    if (dev > compat_tol) {
        throw std::invalid_argument("k_matrix: rho_1 is not the partial trace of rho_2 (deviation " +
                                    std::to_string(dev) + ")");
    }
    return {rho2.modes(), N, k_linear(rho2, rho1, N)};
}

ComplexMatrix k_perturbation(const SymOperator& c, int N, double tol)
{
    if (c.order() != 2) {
        throw std::invalid_argument("k_perturbation: need a 2-body operator");
    }
    const auto contraction = partial_trace(c, 1);
    const double dev = contraction.matrix().cwiseAbs().maxCoeff();
    if (dev > tol) {
        throw std::invalid_argument("k_perturbation: operator is not contraction-free (|Tr_1 C| = " +
                                    std::to_string(dev) + ")");
    }
    return k_linear(c, SymOperator::zero(c.modes(), 1), N);
}

namespace {

void fix_phase(Eigen::Ref<ComplexVector> v)
{
    Eigen::Index best = 0;
    double best_abs = -1.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        // a small relative margin keeps the choice stable under rounding
        const double a = std::abs(v(i));
        if (a > best_abs * (1.0 + 1e-10)) {
            best_abs = a;
            best = i;
        }
    }
    if (best_abs > 0.0) {
        v *= std::conj(v(best)) / best_abs;
        v(best) = best_abs;
    }
}

}  // namespace

Spectrum spectrum(const ComplexMatrix& a, double herm_tol, double degeneracy_tol)
{
    if (a.rows() != a.cols()) {
        throw std::invalid_argument("spectrum: matrix must be square");
    }
    if (a.size() == 0) {
        return {};
    }
    const double defect = (a - a.adjoint()).cwiseAbs().maxCoeff();
    if (defect > herm_tol) {
        throw std::invalid_argument("spectrum: matrix is not Hermitian (defect " + std::to_string(defect) + ")");
    }
    const ComplexMatrix h = 0.5 * (a + a.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("spectrum: eigensolver did not converge");
    }
    Spectrum out{solver.eigenvalues(), solver.eigenvectors()};

    const Eigen::Index n = out.values.size();
    Eigen::Index start = 0;
    while (start < n) {
        Eigen::Index stop = start + 1;
        while (stop < n && out.values(stop) - out.values(stop - 1) < degeneracy_tol) {
            ++stop;
        }
        if (stop - start > 1) {
            // modified Gram-Schmidt over the cluster
            for (Eigen::Index c = start; c < stop; ++c) {
                for (Eigen::Index p = start; p < c; ++p) {
                    out.vectors.col(c) -= out.vectors.col(p).dot(out.vectors.col(c)) * out.vectors.col(p);
                }
                out.vectors.col(c).normalize();
            }
        }
        start = stop;
    }
    for (Eigen::Index c = 0; c < n; ++c) {
        fix_phase(out.vectors.col(c));
    }
    return out;
}

}  // namespace bbgky::repres
