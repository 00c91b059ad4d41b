#include "bbgky/symspace.hpp"

#include <cmath>
#include <limits>
#include <mutex>
#include <numeric>
#include <string>
#include <tuple>

namespace bbgky {

std::int64_t dimension(int m, int o)
{
    if (m < 1 || o < 0) {
        throw std::invalid_argument("dimension: need m >= 1 and o >= 0");
    }
    // C(m-1+o, o) built up as C(m-1+i, i), each step exact.
    __int128 value = 1;
    const __int128 limit = std::numeric_limits<std::int64_t>::max();
    for (int i = 1; i <= o; ++i) {
        value = value * (m - 1 + i) / i;
        if (value > limit) {
            throw std::overflow_error("dimension: C(m+o-1, o) exceeds int64 for m=" +
                                      std::to_string(m) + ", o=" + std::to_string(o));
        }
    }
    return static_cast<std::int64_t>(value);
}

double binomial(int n, int k)
{
    if (k < 0 || k > n) {
        return 0.0;
    }
    k = std::min(k, n - k);
    double r = 1.0;
    for (int i = 1; i <= k; ++i) {
        r = r * (n - k + i) / i;
    }
    return r < 9.0e15 ? std::round(r) : r;
}

namespace {

void enumerate_states(int modes_left, int particles, Occupation& prefix, std::vector<Occupation>& out)
{
    if (modes_left == 1) {
        prefix.push_back(particles);
        out.push_back(prefix);
        prefix.pop_back();
        return;
    }
    for (int n = particles; n >= 0; --n) {
        prefix.push_back(n);
        enumerate_states(modes_left - 1, particles - n, prefix, out);
        prefix.pop_back();
    }
}

}  // namespace

SymBasis::SymBasis(int m, int o) : m_(m), o_(o)
{
    if (m < 1 || o < 0) {
        throw std::invalid_argument("SymBasis: need m >= 1 and o >= 0");
    }
    const auto expected = dimension(m, o);
    states_.reserve(static_cast<std::size_t>(expected));
    Occupation prefix;
    enumerate_states(m, o, prefix, states_);
    for (std::size_t i = 0; i < states_.size(); ++i) {
        lookup_.emplace(states_[i], i);
    }
}

std::size_t SymBasis::index(const Occupation& n) const
{
    auto it = lookup_.find(n);
    if (it == lookup_.end()) {
        throw std::out_of_range("SymBasis::index: occupation not in basis");
    }
    return it->second;
}

std::shared_ptr<const SymBasis> sym_basis(int m, int o)
{
    static std::mutex mutex;
    static std::map<std::pair<int, int>, std::shared_ptr<const SymBasis>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[{m, o}];
    if (!slot) {
        slot = std::make_shared<const SymBasis>(m, o);
    }
    return slot;
}

// --- SymOperator ------------------------------------------------------------

SymOperator::SymOperator(std::shared_ptr<const SymBasis> basis, ComplexMatrix elements)
    : basis_(std::move(basis)), elements_(std::move(elements))
{
    if (!basis_) {
        throw std::invalid_argument("SymOperator: null basis");
    }
    const auto d = static_cast<Eigen::Index>(basis_->size());
    if (elements_.rows() != d || elements_.cols() != d) {
        throw std::invalid_argument("SymOperator: matrix shape does not match basis dimension");
    }
}

SymOperator SymOperator::zero(int m, int o)
{
    auto b = sym_basis(m, o);
    const auto d = static_cast<Eigen::Index>(b->size());
    return {b, ComplexMatrix::Zero(d, d)};
}

SymOperator SymOperator::identity(int m, int o)
{
    auto b = sym_basis(m, o);
    const auto d = static_cast<Eigen::Index>(b->size());
    return {b, ComplexMatrix::Identity(d, d)};
}

SymOperator SymOperator::outer(int m, const Occupation& bra_state, const Occupation& ket_state)
{
    const int o = std::accumulate(bra_state.begin(), bra_state.end(), 0);
    auto op = zero(m, o);
    const auto i = op.basis().index(bra_state);
    const auto j = op.basis().index(ket_state);
    op.matrix()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = 1.0;
    return op;
}

double SymOperator::hermiticity_defect() const
{
    if (elements_.size() == 0) {
        return 0.0;
    }
    return (elements_ - elements_.adjoint()).cwiseAbs().maxCoeff();
}

void SymOperator::require_same_space(const SymOperator& other) const
{
    if (!(basis() == other.basis())) {
        throw std::invalid_argument("SymOperator: operands live on different spaces");
    }
}

SymOperator& SymOperator::operator+=(const SymOperator& rhs)
{
    require_same_space(rhs);
    elements_ += rhs.elements_;
    return *this;
}

SymOperator& SymOperator::operator-=(const SymOperator& rhs)
{
    require_same_space(rhs);
    elements_ -= rhs.elements_;
    return *this;
}

SymOperator& SymOperator::operator*=(Complex s)
{
    elements_ *= s;
    return *this;
}

// --- ordered embedding --------------------------------------------------------

double symmetric_overlap(const Occupation& n, std::span<const int> sequence)
{
    Occupation counts(n.size(), 0);
    for (int s : sequence) {
        if (s < 0 || s >= static_cast<int>(n.size())) {
            return 0.0;
        }
        ++counts[static_cast<std::size_t>(s)];
    }
    if (counts != n) {
        return 0.0;
    }
    // sqrt(prod n_s! / k!)
    double log_value = -std::lgamma(static_cast<double>(sequence.size()) + 1.0);
    for (int c : n) {
        log_value += std::lgamma(c + 1.0);
    }
    return std::exp(0.5 * log_value);
}

ComplexMatrix symmetric_isometry(int m, int o)
{
    const auto basis = sym_basis(m, o);
    std::int64_t rows = 1;
    for (int k = 0; k < o; ++k) {
        rows *= m;
    }
    ComplexMatrix u = ComplexMatrix::Zero(rows, static_cast<Eigen::Index>(basis->size()));
    std::vector<int> seq(static_cast<std::size_t>(o), 0);
    Occupation occ(static_cast<std::size_t>(m), 0);
    for (std::int64_t r = 0; r < rows; ++r) {
        std::int64_t rem = r;
        std::fill(occ.begin(), occ.end(), 0);
        for (int k = o - 1; k >= 0; --k) {
            seq[static_cast<std::size_t>(k)] = static_cast<int>(rem % m);
            rem /= m;
            ++occ[static_cast<std::size_t>(seq[static_cast<std::size_t>(k)])];
        }
        const auto col = static_cast<Eigen::Index>(basis->index(occ));
        u(r, col) = symmetric_overlap(occ, seq);
    }
    return u;
}

ComplexMatrix embed_ordered(const SymOperator& a)
{
    const ComplexMatrix u = symmetric_isometry(a.modes(), a.order());
    return u * a.matrix() * u.adjoint();
}

SymOperator restrict_symmetric(const ComplexMatrix& ordered, int m, int o)
{
    const ComplexMatrix u = symmetric_isometry(m, o);
    if (ordered.rows() != u.rows() || ordered.cols() != u.rows()) {
        throw std::invalid_argument("restrict_symmetric: shape mismatch");
    }
    return {sym_basis(m, o), u.adjoint() * ordered * u};
}

// --- split tables -------------------------------------------------------------

SplitTable::SplitTable(int m, int a, int b) : a_(a), b_(b)
{
    const auto full = sym_basis(m, a + b);
    const auto head = sym_basis(m, a);
    const auto tail = sym_basis(m, b);
    const double norm = binomial(a + b, a);
    terms_.resize(full->size());
    for (std::size_t n = 0; n < full->size(); ++n) {
        const auto& occ = full->state(n);
        for (std::size_t k = 0; k < head->size(); ++k) {
            const auto& hk = head->state(k);
            Occupation rest(occ.size());
            bool fits = true;
            double weight = 1.0;
            for (std::size_t s = 0; s < occ.size(); ++s) {
                rest[s] = occ[s] - hk[s];
                if (rest[s] < 0) {
                    fits = false;
                    break;
                }
                weight *= binomial(occ[s], hk[s]);
            }
            if (!fits) {
                continue;
            }
            terms_[n].push_back({k, tail->index(rest), std::sqrt(weight / norm)});
        }
    }
}

const SplitTable& split_table(int m, int a, int b)
{
    static std::mutex mutex;
    static std::map<std::tuple<int, int, int>, std::unique_ptr<const SplitTable>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[{m, a, b}];
    if (!slot) {
        slot = std::make_unique<const SplitTable>(m, a, b);
    }
    return *slot;
}

// --- partial trace and symmetric products -----------------------------------

SymOperator partial_trace(const SymOperator& a, int k)
{
    const int o = a.order();
    if (k < 1 || k >= o) {
        throw std::invalid_argument("partial_trace: need 1 <= k < order (k=" + std::to_string(k) +
                                    ", order=" + std::to_string(o) + ")");
    }
    const int m = a.modes();
    const auto& table = split_table(m, o - k, k);
    const auto traced = sym_basis(m, k);

    struct Entry {
        Eigen::Index full;
        Eigen::Index kept;
        double coeff;
    };
    std::vector<std::vector<Entry>> by_tail(traced->size());
    for (std::size_t n = 0; n < a.dim(); ++n) {
        for (const auto& t : table.terms(n)) {
            by_tail[t.tail].push_back(
                {static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(t.head), t.coeff});
        }
    }

    auto out = SymOperator::zero(m, o - k);
    auto& r = out.matrix();
    const auto& src = a.matrix();
    for (const auto& group : by_tail) {
        for (const auto& x : group) {
            for (const auto& y : group) {
                r(x.kept, y.kept) += x.coeff * y.coeff * src(x.full, y.full);
            }
        }
    }
    return out;
}

SymOperator sym_product(const SymOperator& a, const SymOperator& b)
{
    if (a.modes() != b.modes()) {
        throw std::invalid_argument("sym_product: mode-count mismatch");
    }
    const int m = a.modes();
    const int oa = a.order();
    const int ob = b.order();
    const auto& table = split_table(m, oa, ob);
    auto out = SymOperator::zero(m, oa + ob);
    auto& r = out.matrix();
    const auto& ma = a.matrix();
    const auto& mb = b.matrix();
    const auto d = static_cast<Eigen::Index>(out.dim());
    for (Eigen::Index n = 0; n < d; ++n) {
        const auto& tn = table.terms(static_cast<std::size_t>(n));
        for (Eigen::Index np = 0; np < d; ++np) {
            const auto& tnp = table.terms(static_cast<std::size_t>(np));
            Complex acc = 0.0;
            for (const auto& x : tn) {
                const auto xh = static_cast<Eigen::Index>(x.head);
                const auto xt = static_cast<Eigen::Index>(x.tail);
                for (const auto& y : tnp) {
                    acc += x.coeff * y.coeff * ma(xh, static_cast<Eigen::Index>(y.head)) *
                           mb(xt, static_cast<Eigen::Index>(y.tail));
                }
            }
            r(n, np) = acc;
        }
    }
    return out;
}

SymOperator sym_product(std::span<const SymOperator> ops)
{
    if (ops.empty()) {
        throw std::invalid_argument("sym_product: no operands");
    }
    SymOperator acc = ops.front();
    for (std::size_t i = 1; i < ops.size(); ++i) {
        acc = sym_product(acc, ops[i]);
    }
    return acc;
}

SymOperator lift_identity(const SymOperator& a)
{
    return sym_product(a, SymOperator::identity(a.modes(), 1));
}

}  // namespace bbgky
