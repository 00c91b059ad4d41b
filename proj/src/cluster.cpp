#include "bbgky/cluster.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <tuple>

namespace bbgky::cluster {

ClosureStrategy parse_strategy(const std::string& name)
{
    if (name == "compatible") {
        return ClosureStrategy::compatible;
    }
    if (name == "unit_weight") {
        return ClosureStrategy::unit_weight;
    }
    throw std::invalid_argument("unknown closure strategy '" + name + "'");
}

std::string to_string(ClosureStrategy s)
{
    return s == ClosureStrategy::compatible ? "compatible" : "unit_weight";
}

IncompatibleRdms::IncompatibleRdms(int order, double deviation)
    : std::runtime_error("RDM family incompatible: partial trace of rho_" + std::to_string(order + 1) +
                         " deviates from rho_" + std::to_string(order) + " by " +
                         std::to_string(deviation)),
      order_(order),
      deviation_(deviation)
{
}

namespace {

void build_partitions(int remaining, int max_part, std::vector<int>& prefix,
                      std::vector<std::vector<int>>& out)
{
    if (remaining == 0) {
        out.push_back(prefix);
        return;
    }
    for (int part = std::min(remaining, max_part); part >= 1; --part) {
        prefix.push_back(part);
        build_partitions(remaining - part, part, prefix, out);
        prefix.pop_back();
    }
}

// Symmetrized products of clusters keyed by the (non-increasing) multiset of
// their orders. A product is built from its prefix times the smallest factor,
// so the expensive operand of each sym_product is the short one.
class ProductMemo {
public:
    explicit ProductMemo(const std::vector<SymOperator>& clusters) : clusters_(clusters) {}

    const SymOperator& get(const std::vector<int>& parts)
    {
        auto it = memo_.find(parts);
        if (it != memo_.end()) {
            return it->second;
        }
        if (parts.size() == 1) {
            return clusters_.at(static_cast<std::size_t>(parts[0] - 1));
        }
        std::vector<int> prefix(parts.begin(), parts.end() - 1);
        const SymOperator& head = get(prefix);
        const SymOperator& tail = clusters_.at(static_cast<std::size_t>(parts.back() - 1));
        return memo_.emplace(parts, sym_product(head, tail)).first->second;
    }

private:
    const std::vector<SymOperator>& clusters_;
    std::map<std::vector<int>, SymOperator> memo_;
};

SymOperator disconnected_sum(ProductMemo& memo, int m, int o)
{
    auto acc = SymOperator::zero(m, o);
    for (const auto& parts : partitions(o)) {
        if (parts.size() == 1) {
            continue;
        }
        acc += memo.get(parts);
    }
    return acc;
}

std::vector<SymOperator> clusters_of_family(std::span<const Rdm> rdms)
{
    std::vector<SymOperator> clusters;
    clusters.reserve(rdms.size());
    ProductMemo memo(clusters);
    const int m = rdms.front().modes();
    for (std::size_t k = 0; k < rdms.size(); ++k) {
        const int o = static_cast<int>(k) + 1;
        if (o == 1) {
            clusters.push_back(rdms[0]);
            continue;
        }
        // memo only references clusters of order < o, which are stable.
        clusters.push_back(rdms[k] - disconnected_sum(memo, m, o));
    }
    return clusters;
}

// PT(lift(A)) as a dense map on vec(A), factorized once per (m, o).
class LiftGram {
public:
    LiftGram(int m, int o) : m_(m), o_(o)
    {
        const auto d = static_cast<Eigen::Index>(sym_basis(m, o)->size());
        ComplexMatrix g(d * d, d * d);
        for (Eigen::Index j = 0; j < d; ++j) {
            for (Eigen::Index i = 0; i < d; ++i) {
                auto e = SymOperator::zero(m, o);
                e.matrix()(i, j) = 1.0;
                const auto image = partial_trace(lift_identity(e), 1);
                g.col(j * d + i) = Eigen::Map<const ComplexVector>(image.matrix().data(), d * d);
            }
        }
        lu_.compute(g);
    }

    SymOperator solve(const SymOperator& rhs) const
    {
        const auto d = static_cast<Eigen::Index>(rhs.dim());
        ComplexVector x = lu_.solve(Eigen::Map<const ComplexVector>(rhs.matrix().data(), d * d));
        return {sym_basis(m_, o_), Eigen::Map<const ComplexMatrix>(x.data(), d, d)};
    }

private:
    int m_;
    int o_;
    Eigen::PartialPivLU<ComplexMatrix> lu_;
};

const LiftGram& lift_gram(int m, int o)
{
    static std::mutex mutex;
    static std::map<std::pair<int, int>, std::unique_ptr<const LiftGram>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[{m, o}];
    if (!slot) {
        slot = std::make_unique<const LiftGram>(m, o);
    }
    return *slot;
}

}  // namespace

const std::vector<std::vector<int>>& partitions(int o)
{
    static std::mutex mutex;
    static std::map<int, std::vector<std::vector<int>>> cache;
    if (o < 1) {
        throw std::invalid_argument("partitions: order must be >= 1");
    }
    std::lock_guard lock(mutex);
    auto it = cache.find(o);
    if (it == cache.end()) {
        std::vector<std::vector<int>> out;
        std::vector<int> prefix;
        build_partitions(o, o, prefix, out);
        it = cache.emplace(o, std::move(out)).first;
    }
    return it->second;
}

ClusterSet clusters_from_rdms(std::span<const Rdm> rdms, double compat_tol)
{
    if (rdms.empty()) {
        throw std::invalid_argument("clusters_from_rdms: empty family");
    }
    for (std::size_t k = 0; k < rdms.size(); ++k) {
        if (rdms[k].order() != static_cast<int>(k) + 1) {
            throw std::invalid_argument("clusters_from_rdms: rdms[o-1] must have order o");
        }
        if (rdms[k].modes() != rdms.front().modes()) {
            throw std::invalid_argument("clusters_from_rdms: mode-count mismatch");
        }
    }
    for (std::size_t k = 1; k < rdms.size(); ++k) {
        const double dev = (partial_trace(rdms[k], 1).matrix() - rdms[k - 1].matrix()).cwiseAbs().maxCoeff();
        if (dev > compat_tol) {
            throw IncompatibleRdms(static_cast<int>(k), dev);
        }
    }
    return {clusters_of_family(rdms)};
}

SymOperator disconnected_part(const ClusterSet& cs, int o)
{
    if (o < 1 || o > cs.max_order() + 1) {
        throw std::invalid_argument("disconnected_part: order out of range");
    }
    ProductMemo memo(cs.clusters);
    return disconnected_sum(memo, cs[1].modes(), o);
}

SymOperator recompose_rdm(const ClusterSet& cs, int o)
{
    if (o < 1 || o > cs.max_order()) {
        throw std::invalid_argument("recompose_rdm: need 1 <= o <= K (o=" + std::to_string(o) +
                                    ", K=" + std::to_string(cs.max_order()) + ")");
    }
    return disconnected_part(cs, o) + cs[o];
}

std::vector<Rdm> traced_family(const Rdm& rho_top)
{
    const int top = rho_top.order();
    std::vector<Rdm> family(static_cast<std::size_t>(top));
    family.back() = rho_top;
    for (int o = top - 1; o >= 1; --o) {
        family[static_cast<std::size_t>(o - 1)] = partial_trace(family[static_cast<std::size_t>(o)], 1);
    }
    return family;
}

SymOperator minimal_lift(const SymOperator& target)
{
    const auto& gram = lift_gram(target.modes(), target.order());
    return lift_identity(gram.solve(target));
}

SymOperator closure(const Rdm& rho_top, int N, ClosureStrategy strategy)
{
    const int top = rho_top.order();
    if (top < 1 || top > N - 1) {
        throw std::invalid_argument("closure: need 1 <= order <= N - 1 (order=" + std::to_string(top) +
                                    ", N=" + std::to_string(N) + ")");
    }
    const auto family = traced_family(rho_top);
    const auto clusters = clusters_of_family(family);
    ProductMemo memo(clusters);
    auto approx = disconnected_sum(memo, rho_top.modes(), top + 1);
    if (strategy == ClosureStrategy::compatible) {
        approx += minimal_lift(rho_top - partial_trace(approx, 1));
    }
    return approx;
}

RealVector cluster_norms(const ClusterSet& cs)
{
    RealVector out(cs.max_order());
    for (int o = 1; o <= cs.max_order(); ++o) {
        const ComplexMatrix h = 0.5 * (cs[o].matrix() + cs[o].matrix().adjoint());
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h, Eigen::EigenvaluesOnly);
        out(o - 1) = solver.eigenvalues().cwiseAbs().sum();
    }
    return out;
}

}  // namespace bbgky::cluster
