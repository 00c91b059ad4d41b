#include "bbgky/hierarchy.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace bbgky {

ModelOperators ModelOperators::bose_hubbard_dimer(const dimer::DimerParams& p, int top_order)
{
    p.validate();
    ModelOperators ops;
    ops.m = 2;
    ops.h = ComplexMatrix::Zero(2, 2);
    ops.h(0, 1) = -p.J;
    ops.h(1, 0) = -p.J;
    ops.W = ComplexMatrix::Zero(4, 4);
    ops.W(0, 0) = p.U;  // |LL><LL|
    ops.W(3, 3) = p.U;  // |RR><RR|
    ops.N = p.N;
    ops.top_order = top_order;
    ops.validate();
    return ops;
}

void ModelOperators::validate() const
{
    if (m < 1 || h.rows() != m || h.cols() != m) {
        throw std::invalid_argument("ModelOperators: h must be m x m");
    }
    if (W.rows() != m * m || W.cols() != m * m) {
        throw std::invalid_argument("ModelOperators: W must be m^2 x m^2");
    }
    if ((h - h.adjoint()).cwiseAbs().maxCoeff() > 1e-12 || (W - W.adjoint()).cwiseAbs().maxCoeff() > 1e-12) {
        throw std::invalid_argument("ModelOperators: h and W must be Hermitian");
    }
    if (top_order < 1 || N < top_order) {
        throw std::invalid_argument("ModelOperators: need 1 <= top_order <= N");
    }
}

namespace {

struct Ket {
    Occupation occ;
    double amp;
};

// a_s |n> = sqrt(n_s) |n - e_s>; returns false when the result vanishes.
bool annihilate(Ket& k, int s)
{
    auto& n = k.occ[static_cast<std::size_t>(s)];
    if (n == 0) {
        return false;
    }
    k.amp *= std::sqrt(static_cast<double>(n));
    --n;
    return true;
}

void create(Ket& k, int s)
{
    auto& n = k.occ[static_cast<std::size_t>(s)];
    ++n;
    k.amp *= std::sqrt(static_cast<double>(n));
}

}  // namespace

SymOperator h_full(const ModelOperators& ops, int o)
{
    if (o < 1) {
        throw std::invalid_argument("h_full: order must be >= 1");
    }
    const int m = ops.m;
    auto out = SymOperator::zero(m, o);
    const auto& basis = out.basis();
    auto& r = out.matrix();
    for (std::size_t col = 0; col < basis.size(); ++col) {
        const auto c = static_cast<Eigen::Index>(col);
        for (int i = 0; i < m; ++i) {
            for (int j = 0; j < m; ++j) {
                Ket k{basis.state(col), 1.0};
                if (!annihilate(k, j)) {
                    continue;
                }
                create(k, i);
                r(static_cast<Eigen::Index>(basis.index(k.occ)), c) += ops.h(i, j) * k.amp;
            }
        }
        if (o < 2) {
            continue;
        }
        // 1/2 sum W(ij;kl) a_i^dag a_j^dag a_l a_k
        for (int i = 0; i < m; ++i) {
            for (int j = 0; j < m; ++j) {
                for (int kk = 0; kk < m; ++kk) {
                    for (int l = 0; l < m; ++l) {
                        const Complex w = ops.W(i * m + j, kk * m + l);
                        if (w == Complex(0.0)) {
                            continue;
                        }
                        Ket k{basis.state(col), 0.5};
                        if (!annihilate(k, kk) || !annihilate(k, l)) {
                            continue;
                        }
                        create(k, j);
                        create(k, i);
                        r(static_cast<Eigen::Index>(basis.index(k.occ)), c) += w * k.amp;
                    }
                }
            }
        }
    }
    return out;
}

namespace {

// Kernel factors such that
//   Tr_{o+1}(sum_k W^{(k,o+1)} rho_{o+1}) = sum_t L_t rho_{o+1} R_t^T.
// Derivation: on symmetric bras sum_k W^{(k,o+1)} acts as o W^{(o,o+1)};
// <S(n)| splits into sqrt(n_s/o) <S(n-e_s)| x <s|, and the symmetric
// projector inside rho_{o+1} maps |S(q)> x |u v> and |S(n')> x |t> onto
// single occupation states with the overlaps computed below.
void kernel_factors(const ModelOperators& ops, int o, std::vector<ComplexMatrix>& left,
                    std::vector<RealMatrix>& right)
{
    const int m = ops.m;
    const auto low = sym_basis(m, o);
    const auto high = sym_basis(m, o + 1);
    const auto dl = static_cast<Eigen::Index>(low->size());
    const auto dh = static_cast<Eigen::Index>(high->size());
    const double pair_norm = binomial(o + 1, 2);

    left.assign(static_cast<std::size_t>(m), ComplexMatrix::Zero(dl, dh));
    right.assign(static_cast<std::size_t>(m), RealMatrix::Zero(dl, dh));

    for (Eigen::Index n = 0; n < dl; ++n) {
        const auto& occ = low->state(static_cast<std::size_t>(n));
        for (int t = 0; t < m; ++t) {
            Occupation up = occ;
            ++up[static_cast<std::size_t>(t)];
            const double beta = std::sqrt((up[static_cast<std::size_t>(t)]) / static_cast<double>(o + 1));
            right[static_cast<std::size_t>(t)](n, static_cast<Eigen::Index>(high->index(up))) = beta;
        }
        for (int s = 0; s < m; ++s) {
            if (occ[static_cast<std::size_t>(s)] == 0) {
                continue;
            }
            const double c_s = std::sqrt(occ[static_cast<std::size_t>(s)] / static_cast<double>(o));
            Occupation q = occ;
            --q[static_cast<std::size_t>(s)];
            for (int t = 0; t < m; ++t) {
                for (int u = 0; u < m; ++u) {
                    for (int v = 0; v < m; ++v) {
                        const Complex w = ops.W(s * m + t, u * m + v);
                        if (w == Complex(0.0)) {
                            continue;
                        }
                        Occupation target = q;
                        ++target[static_cast<std::size_t>(u)];
                        ++target[static_cast<std::size_t>(v)];
                        double split = 1.0;
                        for (std::size_t r = 0; r < target.size(); ++r) {
                            split *= binomial(target[r], q[r]);
                        }
                        const double alpha = std::sqrt(split / pair_norm) * (u == v ? 1.0 : std::sqrt(0.5));
                        left[static_cast<std::size_t>(t)](n, static_cast<Eigen::Index>(high->index(target))) +=
                            static_cast<double>(o) * c_s * w * alpha;
                    }
                }
            }
        }
    }
}

}  // namespace

SymOperator collision_kernel(const SymOperator& rho_next, const ModelOperators& ops, int o)
{
    if (rho_next.order() != o + 1 || rho_next.modes() != ops.m) {
        throw std::invalid_argument("collision_kernel: rho_next must have order o + 1 on the model modes");
    }
    std::vector<ComplexMatrix> left;
    std::vector<RealMatrix> right;
    kernel_factors(ops, o, left, right);
    auto out = SymOperator::zero(ops.m, o);
    for (std::size_t t = 0; t < left.size(); ++t) {
        out.matrix() += left[t] * rho_next.matrix() * right[t].transpose();
    }
    return out;
}

HierarchyRhs::HierarchyRhs(ModelOperators ops, cluster::ClosureStrategy strategy)
    : ops_(std::move(ops)), strategy_(strategy), h_top_(h_full(ops_, ops_.top_order))
{
    ops_.validate();
    if (ops_.top_order >= ops_.N) {
        throw std::invalid_argument("HierarchyRhs: truncation order must be below N");
    }
    kernel_factors(ops_, ops_.top_order, left_, right_);
}

SymOperator HierarchyRhs::with_next(const Rdm& rho_top, const SymOperator& rho_next) const
{
    const int o = ops_.top_order;
    if (rho_top.order() != o || rho_next.order() != o + 1) {
        throw std::invalid_argument("HierarchyRhs: operand orders do not match the truncation order");
    }
    const Complex minus_i(0.0, -1.0);
    const auto& rho = rho_top.matrix();
    ComplexMatrix kernel = ComplexMatrix::Zero(rho.rows(), rho.cols());
    for (std::size_t t = 0; t < left_.size(); ++t) {
        kernel.noalias() += left_[t] * rho_next.matrix() * right_[t].transpose();
    }
    ComplexMatrix d = minus_i * (h_top_.matrix() * rho - rho * h_top_.matrix());
    d += minus_i * static_cast<double>(ops_.N - o) * (kernel - kernel.adjoint());
    return {rho_top.basis_ptr(), std::move(d)};
}

SymOperator HierarchyRhs::operator()(const Rdm& rho_top) const
{
    return with_next(rho_top, cluster::closure(rho_top, ops_.N, strategy_));
}

SymOperator rhs_with_next(const Rdm& rho_top, const SymOperator& rho_next, const ModelOperators& ops)
{
    ModelOperators local = ops;
    local.top_order = rho_top.order();
    const Complex minus_i(0.0, -1.0);
    const auto kernel = collision_kernel(rho_next, local, local.top_order).matrix();
    const auto h = h_full(local, local.top_order).matrix();
    const auto& rho = rho_top.matrix();
    ComplexMatrix d = minus_i * (h * rho - rho * h);
    d += minus_i * static_cast<double>(local.N - local.top_order) * (kernel - kernel.adjoint());
    return {rho_top.basis_ptr(), std::move(d)};
}

SymOperator rhs(const Rdm& rho_top, const ModelOperators& ops, cluster::ClosureStrategy strategy)
{
    return rhs_with_next(rho_top, cluster::closure(rho_top, ops.N, strategy), ops);
}

SymOperator pair_interaction(const ModelOperators& ops)
{
    ModelOperators only_w = ops;
    only_w.h = ComplexMatrix::Zero(ops.m, ops.m);
    return h_full(only_w, 2);
}

double energy(const Rdm& rho_top, const ModelOperators& ops)
{
    if (rho_top.order() < 2) {
        throw std::invalid_argument("energy: needs an RDM of order >= 2");
    }
    const auto rho2 = rho_top.order() == 2 ? rho_top : partial_trace(rho_top, rho_top.order() - 2);
    const auto rho1 = partial_trace(rho2, 1);
    const double n = ops.N;
    const Complex one_body = (ops.h * rho1.matrix()).trace();
    const Complex two_body = (pair_interaction(ops).matrix() * rho2.matrix()).trace();
    return n * one_body.real() + 0.5 * n * (n - 1.0) * two_body.real();
}

void pack_lower(const SymOperator& a, std::span<double> out)
{
    const auto d = static_cast<Eigen::Index>(a.dim());
    if (out.size() != static_cast<std::size_t>(d * d)) {
        throw std::invalid_argument("pack_lower: output length must be d^2");
    }
    const auto& x = a.matrix();
    std::size_t p = 0;
    for (Eigen::Index i = 0; i < d; ++i) {
        out[p++] = x(i, i).real();
    }
    for (Eigen::Index i = 1; i < d; ++i) {
        for (Eigen::Index j = 0; j < i; ++j) {
            out[p++] = x(i, j).real();
            out[p++] = x(i, j).imag();
        }
    }
}

std::vector<double> pack_lower(const SymOperator& a)
{
    std::vector<double> out(a.dim() * a.dim());
    pack_lower(a, out);
    return out;
}

SymOperator unpack_lower(std::span<const double> packed, int m, int o)
{
    auto out = SymOperator::zero(m, o);
    const auto d = static_cast<Eigen::Index>(out.dim());
    if (packed.size() != static_cast<std::size_t>(d * d)) {
        throw std::invalid_argument("unpack_lower: input length must be d^2");
    }
    auto& x = out.matrix();
    std::size_t p = 0;
    for (Eigen::Index i = 0; i < d; ++i) {
        x(i, i) = packed[p++];
    }
    for (Eigen::Index i = 1; i < d; ++i) {
        for (Eigen::Index j = 0; j < i; ++j) {
            const Complex z(packed[p], packed[p + 1]);
            p += 2;
            x(i, j) = z;
            x(j, i) = std::conj(z);
        }
    }
    return out;
}

}  // namespace bbgky
