#include "bbgky/corrections.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace bbgky::corrections {

Mode parse_mode(const std::string& name)
{
    if (name == "none") {
        return Mode::none;
    }
    if (name == "purify") {
        return Mode::purify;
    }
    if (name == "eom") {
        return Mode::eom;
    }
    throw std::invalid_argument("unknown correction mode '" + name + "'");
}

std::string to_string(Mode mode)
{
    switch (mode) {
    case Mode::none:
        return "none";
    case Mode::purify:
        return "purify";
    case Mode::eom:
        return "eom";
    }
    return "none";
}

void CorrectionConfig::validate() const
{
    if (!(epsilon < 0.0)) {
        throw std::invalid_argument("CorrectionConfig: epsilon must be negative");
    }
    if (!(eta > 0.0)) {
        throw std::invalid_argument("CorrectionConfig: eta must be positive");
    }
    if (max_iter < 1) {
        throw std::invalid_argument("CorrectionConfig: max_iter must be >= 1");
    }
    if (!(dt > 0.0)) {
        throw std::invalid_argument("CorrectionConfig: dt must be positive");
    }
}

int parameter_count(int m)
{
    const int d = m * (m + 1) / 2;
    return d * d;
}

int base_constraint_count(int m)
{
    return m * m + 1;
}

int parity_constraint_count(int m)
{
    if (m % 2 != 0) {
        throw std::invalid_argument("parity_constraint_count: needs an even mode count");
    }
    return m * m * m * m / 8 + m * m * m / 4;
}

int free_dimension(int m, int d, int d_prime, bool parity)
{
    int free = parameter_count(m) - base_constraint_count(m) - d - d_prime;
    if (parity) {
        free -= parity_constraint_count(m);
    }
    return free;
}

// --- constraint system --------------------------------------------------------

ConstraintSystem::ConstraintSystem(int m) : m_(m)
{
    const auto b = sym_basis(m, 2);
    const auto d = static_cast<Eigen::Index>(b->size());
    const double r = 1.0 / std::sqrt(2.0);
    for (Eigen::Index p = 0; p < d; ++p) {
        auto e = SymOperator::zero(m, 2);
        e.matrix()(p, p) = 1.0;
        basis_.push_back(std::move(e));
    }
    for (Eigen::Index p = 0; p < d; ++p) {
        for (Eigen::Index q = p + 1; q < d; ++q) {
            auto re = SymOperator::zero(m, 2);
            re.matrix()(p, q) = r;
            re.matrix()(q, p) = r;
            basis_.push_back(std::move(re));
            auto im = SymOperator::zero(m, 2);
            im.matrix()(p, q) = Complex(0.0, -r);
            im.matrix()(q, p) = Complex(0.0, r);
            basis_.push_back(std::move(im));
        }
    }
}

RealMatrix ConstraintSystem::matrix() const
{
    RealMatrix a(rows(), parameters());
    for (int r = 0; r < rows(); ++r) {
        a.row(r) = rows_[static_cast<std::size_t>(r)].transpose();
    }
    return a;
}

RealVector ConstraintSystem::rhs() const
{
    return Eigen::Map<const RealVector>(rhs_.data(), static_cast<Eigen::Index>(rhs_.size()));
}

void ConstraintSystem::push(RealVector row, double value, std::string label, bool droppable)
{
    rows_.push_back(std::move(row));
    rhs_.push_back(value);
    labels_.push_back(std::move(label));
    droppable_.push_back(droppable ? 1 : 0);
}

void ConstraintSystem::add_row(const std::function<double(const SymOperator&)>& functional, double value,
                               const std::string& label, bool droppable)
{
    RealVector row(parameters());
    for (int p = 0; p < parameters(); ++p) {
        row(p) = functional(basis_[static_cast<std::size_t>(p)]);
    }
    push(std::move(row), value, label, droppable);
}

void ConstraintSystem::add_contraction_free()
{
    const auto n = static_cast<std::size_t>(m_ * m_);
    std::vector<RealVector> rows(n, RealVector(parameters()));
    for (int p = 0; p < parameters(); ++p) {
        const auto t = partial_trace(basis_[static_cast<std::size_t>(p)], 1).matrix();
        std::size_t r = 0;
        for (int a = 0; a < m_; ++a) {
            rows[r++](p) = t(a, a).real();
        }
        for (int a = 0; a < m_; ++a) {
            for (int b = a + 1; b < m_; ++b) {
                rows[r++](p) = t(a, b).real();
                rows[r++](p) = t(a, b).imag();
            }
        }
    }
    for (auto& row : rows) {
        push(std::move(row), 0.0, "contraction");
    }
}

void ConstraintSystem::add_trace_row(const SymOperator& w2, double value, const std::string& label)
{
    add_row([&](const SymOperator& b) { return (w2.matrix() * b.matrix()).trace().real(); }, value, label);
}

void ConstraintSystem::add_expectation(const ComplexVector& v, double value)
{
    add_row([&](const SymOperator& b) { return v.dot(b.matrix() * v).real(); }, value, "rho2", true);
}

void ConstraintSystem::add_k_expectation(const ComplexVector& w, int N, double value)
{
    const auto zero1 = SymOperator::zero(m_, 1);
    add_row([&](const SymOperator& b) { return w.dot(repres::k_linear(b, zero1, N) * w).real(); }, value, "K",
            true);
}

void ConstraintSystem::add_parity(const std::vector<int>& mode_parity)
{
    if (static_cast<int>(mode_parity.size()) != m_) {
        throw std::invalid_argument("add_parity: need one parity per mode");
    }
    const auto b = sym_basis(m_, 2);
    std::vector<int> parity(b->size(), 1);
    for (std::size_t i = 0; i < b->size(); ++i) {
        for (int s = 0; s < m_; ++s) {
            if (mode_parity[static_cast<std::size_t>(s)] < 0 && b->state(i)[static_cast<std::size_t>(s)] % 2 == 1) {
                parity[i] = -parity[i];
            }
        }
    }
    for (std::size_t p = 0; p < b->size(); ++p) {
        for (std::size_t q = p + 1; q < b->size(); ++q) {
            if (parity[p] == parity[q]) {
                continue;
            }
            const auto pi = static_cast<Eigen::Index>(p);
            const auto qi = static_cast<Eigen::Index>(q);
            add_row([&](const SymOperator& e) { return e.matrix()(pi, qi).real(); }, 0.0, "parity");
            add_row([&](const SymOperator& e) { return e.matrix()(pi, qi).imag(); }, 0.0, "parity");
        }
    }
}

SymOperator ConstraintSystem::to_operator(const RealVector& x) const
{
    auto c = SymOperator::zero(m_, 2);
    for (int p = 0; p < parameters(); ++p) {
        c.matrix() += x(p) * basis_[static_cast<std::size_t>(p)].matrix();
    }
    return c;
}

RealVector ConstraintSystem::to_parameters(const SymOperator& c) const
{
    RealVector x(parameters());
    for (int p = 0; p < parameters(); ++p) {
        x(p) = (basis_[static_cast<std::size_t>(p)].matrix().adjoint() * c.matrix()).trace().real();
    }
    return x;
}

LeastNormSolution solve_least_norm(const ConstraintSystem& sys, const SolveOptions& options)
{
    LeastNormSolution out;
    if (sys.rows() == 0) {
        out.c = SymOperator::zero(sys.modes(), 2);
        return out;
    }
    const RealMatrix all = sys.matrix();
    const RealVector all_b = sys.rhs();

    // Keep rows in insertion order; a droppable row survives only if it adds a
    // direction the kept rows do not already span.
    std::vector<Eigen::Index> keep;
    std::vector<RealVector> span;
    for (Eigen::Index r = 0; r < all.rows(); ++r) {
        RealVector q = all.row(r).transpose();
        const double norm = q.norm();
        for (const auto& e : span) {
            q -= e.dot(q) * e;
        }
        for (const auto& e : span) {
            q -= e.dot(q) * e;
        }
        const double rest = q.norm();
        const bool may_drop = options.dependence_tol > 0.0 && sys.droppable(static_cast<int>(r));
        if (may_drop && rest <= options.dependence_tol * norm) {
            ++out.dropped;
            continue;
        }
        keep.push_back(r);
        if (rest > 1e-13 * std::max(1.0, norm)) {
            span.push_back(q / rest);
        }
    }
    RealMatrix a(static_cast<Eigen::Index>(keep.size()), all.cols());
    RealVector b(static_cast<Eigen::Index>(keep.size()));
    for (std::size_t i = 0; i < keep.size(); ++i) {
        a.row(static_cast<Eigen::Index>(i)) = all.row(keep[i]);
        b(static_cast<Eigen::Index>(i)) = all_b(keep[i]);
    }

    Eigen::CompleteOrthogonalDecomposition<RealMatrix> cod(a);
    const RealVector x = cod.solve(b);
    out.rank = static_cast<int>(cod.rank());
    out.residual = (a * x - b).cwiseAbs().maxCoeff();
    const double scale = std::max(1.0, b.cwiseAbs().maxCoeff());
    if (!std::isfinite(out.residual) || out.residual > options.tol * scale) {
        std::ostringstream msg;
        msg << "correction constraints are inconsistent: " << a.rows() << " rows on " << sys.parameters()
            << " parameters (rank " << out.rank << "), least-squares residual " << out.residual;
        throw InfeasibleCorrection(msg.str(), out.residual);
    }
    out.c = sys.to_operator(x);
    return out;
}

SymOperator least_norm_correction(const ConstraintSystem& sys, double tol)
{
    return solve_least_norm(sys, {tol, 0.0}).c;
}

// --- purification and corrected EOM --------------------------------------------

namespace {

struct ActiveSet {
    repres::Spectrum rho;
    repres::Spectrum k;
    std::vector<Eigen::Index> rho_idx;
    std::vector<Eigen::Index> k_idx;

    bool empty() const { return rho_idx.empty() && k_idx.empty(); }
};

ActiveSet active_set(const Rdm& rho2, int N, double epsilon, bool with_k)
{
    ActiveSet s;
    s.rho = repres::spectrum(rho2.matrix(), 1e-8);
    for (Eigen::Index i = 0; i < s.rho.values.size(); ++i) {
        if (s.rho.values(i) < epsilon) {
            s.rho_idx.push_back(i);
        }
    }
    if (with_k) {
        const auto k = repres::k_linear(rho2, partial_trace(rho2, 1), N);
        s.k = repres::spectrum(k, 1e-8);
        for (Eigen::Index i = 0; i < s.k.values.size(); ++i) {
            if (s.k.values(i) < epsilon) {
                s.k_idx.push_back(i);
            }
        }
    }
    return s;
}

double contraction_residual(const SymOperator& c)
{
    return partial_trace(c, 1).matrix().cwiseAbs().maxCoeff();
}

double energy_residual(const SymOperator& c, const SymOperator& w2)
{
    return std::abs((w2.matrix() * c.matrix()).trace());
}

}  // namespace

PurifyResult purify(const Rdm& rho2, const ModelOperators& ops, const CorrectionConfig& cfg,
                    const PurifyOptions& options)
{
    cfg.validate();
    if (rho2.order() != 2) {
        throw std::invalid_argument("purify: needs a 2-RDM");
    }
    const auto w2 = pair_interaction(ops);
    PurifyResult out;
    out.rho2 = rho2;
    for (int it = 0;; ++it) {
        const auto active = active_set(out.rho2, ops.N, cfg.epsilon, options.k_rows);
        if (it == 0) {
            out.d = static_cast<int>(active.rho_idx.size());
            out.d_prime = static_cast<int>(active.k_idx.size());
        }
        if (active.empty()) {
            out.converged = true;
            break;
        }
        if (it == cfg.max_iter) {
            out.converged = false;
            break;
        }
        ConstraintSystem sys(rho2.modes());
        if (options.base_rows) {
            sys.add_contraction_free();
            sys.add_trace_row(w2);
        }
        for (auto i : active.rho_idx) {
            sys.add_expectation(active.rho.vectors.col(i), -active.rho.values(i));
        }
        for (auto j : active.k_idx) {
            sys.add_k_expectation(active.k.vectors.col(j), ops.N, -active.k.values(j));
        }
        const auto sol = solve_least_norm(sys, {1e-10, eigen_row_dependence_tol});
        const auto& c = sol.c;
        out.dropped += sol.dropped;
        out.contraction_residual = std::max(out.contraction_residual, contraction_residual(c));
        out.energy_residual = std::max(out.energy_residual, energy_residual(c, w2));
        out.rho2 += c;
        out.rho2.matrix() = 0.5 * (out.rho2.matrix() + out.rho2.matrix().adjoint()).eval();
        out.iterations = it + 1;
    }
    out.norm = (out.rho2.matrix() - rho2.matrix()).norm();
    return out;
}

EomCorrection corrected_rhs(const Rdm& rho2, const HierarchyRhs& base, const CorrectionConfig& cfg)
{
    const auto& ops = base.model();
    if (ops.top_order != 2 || rho2.order() != 2) {
        throw std::invalid_argument("corrected_rhs: only the 2-RDM equation can be corrected");
    }
    EomCorrection out;
    out.derivative = base(rho2);
    const auto active = active_set(rho2, ops.N, cfg.epsilon, true);
    out.d = static_cast<int>(active.rho_idx.size());
    out.d_prime = static_cast<int>(active.k_idx.size());
    if (active.empty()) {
        return out;
    }
    const auto& r = out.derivative;
    const auto w2 = pair_interaction(ops);
    ConstraintSystem sys(rho2.modes());
    sys.add_contraction_free();
    sys.add_trace_row(w2);
    for (auto i : active.rho_idx) {
        const ComplexVector v = active.rho.vectors.col(i);
        const double now = v.dot(r.matrix() * v).real();
        sys.add_expectation(v, -cfg.eta * active.rho.values(i) - now);
    }
    if (!active.k_idx.empty()) {
        const auto kdot = repres::k_linear(r, partial_trace(r, 1), ops.N);
        for (auto j : active.k_idx) {
            const ComplexVector w = active.k.vectors.col(j);
            const double now = w.dot(kdot * w).real();
            sys.add_k_expectation(w, ops.N, -cfg.eta * active.k.values(j) - now);
        }
    }
    const auto sol = solve_least_norm(sys, {1e-10, eigen_row_dependence_tol});
    const auto& c = sol.c;
    out.dropped = sol.dropped;
    out.norm = c.matrix().norm();
    out.contraction_residual = contraction_residual(c);
    out.energy_residual = energy_residual(c, w2);
    out.derivative += c;
    return out;
}

}  // namespace bbgky::corrections
