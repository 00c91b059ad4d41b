// Acceptance suite: one PASS/FAIL line per criterion. Scenario output is
// written under --work and read back from its CSV files and manifest.

#include "bbgky/cluster.hpp"
#include "bbgky/corrections.hpp"
#include "bbgky/diagnostics.hpp"
#include "bbgky/dimer_exact.hpp"
#include "bbgky/hierarchy.hpp"
#include "bbgky/integrator.hpp"
#include "bbgky/repres.hpp"
#include "bbgky/scenario.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <random>
#include <sstream>

namespace fs = std::filesystem;
namespace sc = bbgky::scenario;
namespace co = bbgky::corrections;
namespace dg = bbgky::diagnostics;
using namespace bbgky;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Verdict {
    bool pass = true;
    std::string detail;
};

std::string fmt(double v)
{
    if (std::isinf(v)) {
        return "never";
    }
    std::ostringstream s;
    s.precision(4);
    s << v;
    return s.str();
}

// ---------------------------------------------------------------- CSV input

class Table {
public:
    explicit Table(const fs::path& path)
    {
        std::ifstream in(path);
        if (!in) {
            throw std::runtime_error("missing " + path.string());
        }
        std::string line;
        std::getline(in, line);
        header_ = split(line);
        while (std::getline(in, line)) {
            if (!line.empty()) {
                rows_.push_back(split(line));
            }
        }
    }

    std::size_t size() const { return rows_.size(); }
    std::size_t columns() const { return header_.size(); }
    const std::string& text(std::size_t row, std::size_t col) const { return rows_[row][col]; }
    double at(std::size_t row, std::size_t col) const { return std::stod(rows_[row][col]); }
    double t(std::size_t row) const { return at(row, 0); }

    std::size_t column(const std::string& name) const
    {
        for (std::size_t c = 0; c < header_.size(); ++c) {
            if (header_[c] == name) {
                return c;
            }
        }
        throw std::runtime_error("no column " + name);
    }

private:
    static std::vector<std::string> split(const std::string& line)
    {
        std::vector<std::string> out;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            out.push_back(cell);
        }
        return out;
    }

    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

// First emitted time whose smallest value (columns 1..) is below eps.
double first_negative(const Table& tab, double eps = -1e-10)
{
    for (std::size_t r = 0; r < tab.size(); ++r) {
        for (std::size_t c = 1; c < tab.columns(); ++c) {
            if (tab.at(r, c) < eps) {
                return tab.t(r);
            }
        }
    }
    return kInf;
}

double min_value(const Table& tab, double t_max)
{
    double m = kInf;
    for (std::size_t r = 0; r < tab.size() && tab.t(r) <= t_max + 1e-9; ++r) {
        for (std::size_t c = 1; c < tab.columns(); ++c) {
            m = std::min(m, tab.at(r, c));
        }
    }
    return m;
}

// ---------------------------------------------------------------- scenarios

struct Workspace {
    fs::path root;
    bool reuse = false;
    int threads = 1;
    std::map<std::string, nlohmann::json> manifests;

    fs::path prepare(const std::string& name, const std::string& toml)
    {
        const fs::path dir = root / name;
        if (!manifests.count(name)) {
            const fs::path manifest = dir / "manifest.json";
            if (!(reuse && fs::exists(manifest))) {
                const auto cfg = sc::parse_config(toml);
                std::cerr << "running scenario " << name << " ..." << std::endl;
                const auto res = sc::run_scenario(cfg, dir, threads);
                std::cerr << "  done in " << fmt(res.wall_seconds) << " s" << std::endl;
            }
            std::ifstream in(manifest);
            manifests[name] = nlohmann::json::parse(in);
        }
        return dir;
    }
};

const char* kBaseline = R"(
N = 10
lambda = 0.1
orders = [2, 3, 4, 5, 6, 7, 8, 9]
t_final = 150.0
dt = 0.1
exact = true
exact_max_order = 9
corrections = ["purify", "eom"]
[correction]
epsilon = -1e-10
eta = 10.0
max_iter = 500
)";

const char* kFree = R"(
N = 10
U = 0.0
orders = [2]
t_final = 150.0
dt = 0.1
exact = true
)";

// U = 0 keeps every spectrum fixed; a random state has no zero eigenvalues,
// so no correction is ever active
const char* kQuiet = R"(
N = 10
U = 0.0
orders = [2]
t_final = 150.0
dt = 0.1
exact = false
initial_state = "random"
seed = 1
corrections = ["eom"]
)";

const char* kLarge = R"(
N = 100
lambda = 0.1
orders = [2]
t_final = 300.0
dt = 0.1
exact = false
)";

const nlohmann::json& find_run(const nlohmann::json& manifest, const std::string& id)
{
    for (const auto& r : manifest["runs"]) {
        if (r["id"] == id) {
            return r;
        }
    }
    throw std::runtime_error("run " + id + " missing from manifest");
}

// ---------------------------------------------------------------- criteria

double max_abs(const ComplexMatrix& a)
{
    return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

dimer::FockState random_state(int N, std::mt19937_64& rng)
{
    std::normal_distribution<double> g;
    dimer::FockState psi;
    psi.coefficients.resize(N + 1);
    for (int n = 0; n <= N; ++n) {
        psi.coefficients(n) = Complex(g(rng), g(rng));
    }
    psi.coefficients.normalize();
    return psi;
}

ComplexMatrix random_hermitian(Eigen::Index d, std::mt19937_64& rng)
{
    std::normal_distribution<double> g;
    ComplexMatrix a(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) {
            a(i, j) = Complex(g(rng), g(rng));
        }
    }
    return (a + a.adjoint()) / 2.0;
}

Verdict oracle(Workspace&)
{
    const auto start = std::chrono::steady_clock::now();
    const int N = 6;
    const auto p = dimer::DimerParams::from_lambda(N, 0.1);
    const dimer::DimerPropagator prop(p);
    const auto psi0 = dimer::FockState::left_condensate(N);
    const double h = 1e-4;
    double worst = 0.0;
    for (int top = 2; top <= 4; ++top) {
        const HierarchyRhs eval(ModelOperators::bose_hubbard_dimer(p, top), cluster::ClosureStrategy::compatible);
        for (int k = 0; k <= 150; ++k) {
            const double t = 1.0 * k;
            const auto psi = prop.evolve(psi0, t);
            const ComplexMatrix fd = (dimer::exact_rdm(prop.evolve(psi0, t + h), top).matrix() -
                                      dimer::exact_rdm(prop.evolve(psi0, t - h), top).matrix()) /
                                     (2.0 * h);
            const auto r = eval.with_next(dimer::exact_rdm(psi, top), dimer::exact_rdm(psi, top + 1));
            worst = std::max(worst, max_abs(r.matrix() - fd));
        }
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return {worst < 1e-5 && seconds < 10.0,
            "max error " + fmt(worst) + " (< 1e-5), " + fmt(seconds) + " s (< 10 s), orders 2..4, 151 times"};
}

Verdict cluster_round_trip(Workspace&)
{
    std::mt19937_64 rng(1001);
    double worst = 0.0;
    for (int N = 2; N <= 8; ++N) {
        for (int trial = 0; trial < 10; ++trial) {
            const int K = std::min(N, 6);
            const auto psi = random_state(N, rng);
            std::vector<Rdm> fam;
            for (int o = 1; o <= K; ++o) {
                fam.push_back(dimer::exact_rdm(psi, o));
            }
            const auto cs = cluster::clusters_from_rdms(fam);
            for (int o = 1; o <= K; ++o) {
                worst = std::max(worst, max_abs(cluster::recompose_rdm(cs, o).matrix() -
                                                fam[static_cast<std::size_t>(o - 1)].matrix()));
            }
        }
    }
    double cond = 0.0;
    for (int N = 2; N <= 8; ++N) {
        const int K = std::min(N, 6);
        std::vector<Rdm> fam;
        for (int o = 1; o <= K; ++o) {
            fam.push_back(dimer::exact_rdm(dimer::FockState::left_condensate(N), o));
        }
        const auto cs = cluster::clusters_from_rdms(fam);
        for (int o = 2; o <= K; ++o) {
            cond = std::max(cond, max_abs(cs[o].matrix()));
        }
    }
    return {worst < 1e-10 && cond < 1e-12,
            "round trip " + fmt(worst) + " (< 1e-10), condensate clusters " + fmt(cond) + " (< 1e-12)"};
}

Verdict conservation(Workspace& ws)
{
    ws.prepare("baseline", kBaseline);
    ws.prepare("free", kFree);
    double trace = 0.0;
    double energy = 0.0;
    std::string worst_run;
    bool complete = true;
    for (const auto& name : {"baseline", "free"}) {
        for (const auto& r : ws.manifests[name]["runs"]) {
            const double t_end = r["t_end"];
            complete = complete && r["termination"] == "completed";
            trace = std::max(trace, r["max_trace_drift"].get<double>());
            const double per100 = r["max_rel_energy_drift"].get<double>() / std::max(1.0, t_end / 100.0);
            if (per100 > energy) {
                energy = per100;
                worst_run = std::string(name) + "/" + r["id"].get<std::string>();
            }
        }
    }
    const Table imb(ws.root / "free" / "exact" / "imbalance.csv");
    double cosine = 0.0;
    for (std::size_t r = 0; r < imb.size(); ++r) {
        cosine = std::max(cosine, std::abs(imb.at(r, 1) - std::cos(2.0 * imb.t(r))));
    }
    return {complete && trace < 1e-8 && energy < 1e-6 && cosine < 1e-8,
            "trace drift " + fmt(trace) + " (< 1e-8), energy drift per 100/J " + fmt(energy) + " [" + worst_run +
                "] (< 1e-6), U=0 |imbalance - cos 2t| " + fmt(cosine) + " (< 1e-8)" +
                (complete ? "" : ", some run did not complete")};
}

Verdict qualitative(Workspace& ws)
{
    const auto dir = ws.prepare("baseline", kBaseline);
    std::vector<std::string> notes;
    bool pass = true;

    // (a) every order against exact for eight periods of cos(2t)
    const Table ex(dir / "exact" / "imbalance.csv");
    const double t_a = 8.0 * M_PI;
    double err_a = 0.0;
    for (int o = 2; o <= 9; ++o) {
        const Table tr(dir / ("o" + std::to_string(o)) / "imbalance.csv");
        for (std::size_t r = 0; r < std::min(tr.size(), ex.size()) && ex.t(r) <= t_a; ++r) {
            err_a = std::max(err_a, std::abs(tr.at(r, 1) - ex.at(r, 1)));
        }
    }
    const bool a = err_a < 0.05;
    notes.push_back(std::string("(a) ") + (a ? "pass" : "FAIL") + " max error " + fmt(err_a) + " < 0.05");

    // (b) second-order imbalance leaves [-1, 1] somewhere in [80, 120]
    const Table o2(dir / "o2" / "imbalance.csv");
    double peak = 0.0;
    for (std::size_t r = 0; r < o2.size(); ++r) {
        if (o2.t(r) >= 80.0 - 1e-9 && o2.t(r) <= 120.0 + 1e-9) {
            peak = std::max(peak, std::abs(o2.at(r, 1)));
        }
    }
    const bool b = peak > 1.0;
    notes.push_back(std::string("(b) ") + (b ? "pass" : "FAIL") + " max |imbalance| " + fmt(peak) + " > 1");

    // (c) exact one-body fragmentation through [90, 130]
    const Table np1(dir / "exact" / "np_o1.csv");
    double lo = kInf;
    double hi = -kInf;
    for (std::size_t r = 0; r < np1.size(); ++r) {
        if (np1.t(r) >= 90.0 - 1e-9 && np1.t(r) <= 130.0 + 1e-9) {
            for (std::size_t c : {1, 2}) {
                lo = std::min(lo, np1.at(r, c));
                hi = std::max(hi, np1.at(r, c));
            }
        }
    }
    const bool c = lo >= 0.4 && hi <= 0.6;
    notes.push_back(std::string("(c) ") + (c ? "pass" : "FAIL") + " lambda_1,2 in [" + fmt(lo) + ", " + fmt(hi) +
                    "]");

    // (d) NOON signature at orders 1..3 near t = 140
    std::vector<Table> nps;
    for (int o = 1; o <= 3; ++o) {
        nps.emplace_back(dir / "exact" / ("np_o" + std::to_string(o) + ".csv"));
    }
    double t_noon = -1.0;
    double best_gap = kInf;
    double t_best = 0.0;
    for (std::size_t r = 0; r < nps[0].size(); ++r) {
        const double t = nps[0].t(r);
        if (t < 135.0 - 1e-9 || t > 145.0 + 1e-9) {
            continue;
        }
        bool ok = true;
        double gap = 0.0;
        for (const auto& tab : nps) {
            int in_band = 0;
            for (std::size_t col = 1; col < tab.columns(); ++col) {
                const double v = tab.at(r, col);
                if (v >= 0.4 && v <= 0.6) {
                    ++in_band;
                } else if (v >= 0.05) {
                    ok = false;
                }
                if (col > 2) {
                    gap = std::max(gap, std::abs(v));
                }
            }
            ok = ok && in_band == 2;
        }
        if (gap < best_gap) {
            best_gap = gap;
            t_best = t;
        }
        if (ok && t_noon < 0.0) {
            t_noon = t;
        }
    }
    const bool d = t_noon >= 0.0;
    notes.push_back(std::string("(d) ") + (d ? "pass at t=" + fmt(t_noon) : "FAIL") + " in [135, 145], smallest tail " +
                    fmt(best_gap) + " at t=" + fmt(t_best));

    // (e) t_neg(o) non-increasing in o
    bool e = true;
    std::string worst_e;
    for (int top = 3; top <= 9; ++top) {
        double prev = kInf;
        for (int o = 1; o <= top; ++o) {
            const Table tab(dir / ("o" + std::to_string(top)) / ("np_o" + std::to_string(o) + ".csv"));
            const double tn = first_negative(tab);
            if (tn > prev) {
                e = false;
                worst_e += " o" + std::to_string(top) + ":t_neg(" + std::to_string(o) + ")=" + fmt(tn) + ">" +
                           fmt(prev);
            }
            prev = tn;
        }
    }
    notes.push_back(std::string("(e) ") + (e ? "pass" : "FAIL" + worst_e));

    pass = a && b && c && d && e;
    std::string detail;
    for (const auto& n : notes) {
        detail += (detail.empty() ? "" : "; ") + n;
    }
    return {pass, detail};
}

Verdict spot_check(Workspace& ws)
{
    const auto dir = ws.prepare("large", kLarge);
    const auto& run = find_run(ws.manifests["large"], "o2");
    const double t_end = run["t_end"];
    const double t1 = first_negative(Table(dir / "o2" / "np_o1.csv"));
    const double t2 = first_negative(Table(dir / "o2" / "np_o2.csv"));
    const bool ok1 = std::abs(t1 - 216.0) <= 0.15 * 216.0;
    const bool ok2 = std::abs(t2 - 168.0) <= 0.15 * 168.0;
    const bool ordered = t2 < t1;
    return {ok1 && ok2,
            "t_neg(1) " + fmt(t1) + " vs 216 +/-15%, t_neg(2) " + fmt(t2) + " vs 168 +/-15% (run to t=" +
                fmt(t_end) + "); ordering t_neg(2) < t_neg(1) " + (ordered ? "holds" : "violated")};
}

Verdict correction_performance(Workspace& ws)
{
    const auto dir = ws.prepare("baseline", kBaseline);
    const auto quiet_dir = ws.prepare("quiet", kQuiet);
    std::vector<std::string> notes;

    // (a)
    const auto& eom = find_run(ws.manifests["baseline"], "o2_eom");
    const double t_eom = eom["t_end"];
    const double np_min = min_value(Table(dir / "o2_eom" / "np_o2.csv"), 150.0);
    const double xi_min = min_value(Table(dir / "o2_eom" / "kspec.csv"), 150.0);
    const bool a = t_eom >= 150.0 - 1e-9 && np_min > -1e-8 && xi_min > -1e-8;
    notes.push_back(std::string("(a) ") + (a ? "pass" : "FAIL") + " eom to t=" + fmt(t_eom) + ", min NP " +
                    fmt(np_min) + ", min xi " + fmt(xi_min) + " > -1e-8");

    // (b)
    const Table pur(dir / "o2_purify" / "corrections.csv");
    const auto iters = pur.column("iterations");
    const auto conv = pur.column("converged");
    double t_fail = -1.0;
    std::vector<double> failures;
    for (std::size_t r = 0; r < pur.size(); ++r) {
        if (pur.at(r, conv) == 0.0 && pur.at(r, iters) >= 500.0) {
            failures.push_back(pur.t(r));
            if (t_fail < 0.0 && pur.t(r) >= 60.0 - 1e-9 && pur.t(r) <= 110.0 + 1e-9) {
                t_fail = pur.t(r);
            }
        }
    }
    std::string seen;
    for (std::size_t i = 0; i < std::min<std::size_t>(failures.size(), 5); ++i) {
        seen += (seen.empty() ? "" : " ") + fmt(failures[i]);
    }
    const bool b = t_fail >= 0.0;
    notes.push_back(std::string("(b) ") + (b ? "pass" : "FAIL") + " non-convergence in [60, 110]: " +
                    (b ? "t=" + fmt(t_fail) : "none") + ", all at t=[" + seen + "]");

    // (c)
    double contraction = 0.0;
    double energy = 0.0;
    std::size_t events = 0;
    for (const auto& id : {"o2_purify", "o2_eom"}) {
        const Table tab(dir / id / "corrections.csv");
        const auto cc = tab.column("contraction_residual");
        const auto ec = tab.column("energy_residual");
        for (std::size_t r = 0; r < tab.size(); ++r) {
            contraction = std::max(contraction, tab.at(r, cc));
            energy = std::max(energy, tab.at(r, ec));
        }
        events += tab.size();
    }
    const bool c = contraction < 1e-10 && energy < 1e-10;
    notes.push_back(std::string("(c) ") + (c ? "pass" : "FAIL") + " " + std::to_string(events) +
                    " events, contraction " + fmt(contraction) + ", energy " + fmt(energy) + " < 1e-10");

    // (d)
    const auto& quiet_eom = find_run(ws.manifests["quiet"], "o2_eom");
    const std::size_t quiet_events = quiet_eom["correction_events"];
    double diff = 0.0;
    for (const auto& f : {"imbalance.csv", "np_o1.csv", "np_o2.csv", "kspec.csv", "energy.csv"}) {
        const Table none(quiet_dir / "o2" / f);
        const Table corr(quiet_dir / "o2_eom" / f);
        if (none.size() != corr.size()) {
            diff = kInf;
            break;
        }
        for (std::size_t r = 0; r < none.size(); ++r) {
            for (std::size_t col = 0; col < none.columns(); ++col) {
                diff = std::max(diff, std::abs(none.at(r, col) - corr.at(r, col)));
            }
        }
    }
    const bool d = quiet_events == 0 && diff < 1e-10;
    notes.push_back(std::string("(d) ") + (d ? "pass" : "FAIL") + " U=0 random state: " + std::to_string(quiet_events) +
                    " events, eom vs none " + fmt(diff) + " < 1e-10");

    std::string detail;
    for (const auto& n : notes) {
        detail += (detail.empty() ? "" : "; ") + n;
    }
    return {a && b && c && d, detail};
}

Verdict representability(Workspace&)
{
    std::mt19937_64 rng(2002);
    double xi = kInf;
    for (int trial = 0; trial < 1000; ++trial) {
        const int N = 2 + trial % 19;
        const auto psi = random_state(N, rng);
        const auto k = repres::k_matrix(dimer::exact_rdm(psi, 2), dimer::exact_rdm(psi, 1), N);
        xi = std::min(xi, repres::spectrum(k.matrix).values(0));
    }

    double cond = 0.0;
    for (int N : {2, 10, 100}) {
        const auto c = dimer::FockState::left_condensate(N);
        const auto s = repres::spectrum(repres::k_matrix(dimer::exact_rdm(c, 2), dimer::exact_rdm(c, 1), N).matrix);
        const double want[] = {0.0, 0.0, 1.0 / N, 1.0};
        for (int i = 0; i < 4; ++i) {
            cond = std::max(cond, std::abs(s.values(i) - want[i]));
        }
    }

    // state pairs: truncated second order against exact, N = 10, Lambda = 0.1
    const auto p = dimer::DimerParams::from_lambda(10, 0.1);
    const HierarchyRhs rhs(ModelOperators::bose_hubbard_dimer(p, 2), cluster::ClosureStrategy::compatible);
    const dimer::DimerPropagator prop(p);
    const auto psi0 = dimer::FockState::left_condensate(10);
    IntegratorConfig ic;
    ic.t_final = 150.0;
    ic.dt_out = 5.0;
    const auto traj = integrate(dimer::exact_rdm(psi0, 2), [&](const Rdm& r) { return rhs(r); }, ic);
    double slack = kInf;
    double saturation = 0.0;
    int pairs = 0;
    for (const auto& rec : traj.records) {
        const auto& tr = rec.rdms.back();
        const auto ex = dimer::exact_rdm(prop.evolve(psi0, rec.t), 2);
        const double D = dg::trace_distance(tr, ex);
        const ComplexMatrix delta = tr.matrix() - ex.matrix();
        for (int k = 0; k < 100; ++k) {
            const ComplexMatrix a = random_hermitian(delta.rows(), rng);
            Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(a, Eigen::EigenvaluesOnly);
            const double op = es.eigenvalues().cwiseAbs().maxCoeff();
            const double lhs = std::abs((a * delta).trace());
            slack = std::min(slack, 2.0 * op * D - lhs);
            slack = std::min(slack, 2.0 * dg::trace_norm(a) * D - lhs);
        }
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(delta);
        const RealVector sgn = es.eigenvalues().unaryExpr([](double v) { return v >= 0.0 ? 1.0 : -1.0; });
        const ComplexMatrix s = es.eigenvectors() * sgn.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
        saturation = std::max(saturation, std::abs(std::abs((s * delta).trace()) - 2.0 * D));
        ++pairs;
    }
    const bool ok = xi > -1e-12 && cond < 1e-10 && slack > -1e-12 && saturation < 1e-10;
    return {ok, "min xi " + fmt(xi) + " (> -1e-12, 1000 states), condensate spectrum error " + fmt(cond) +
                    " (< 1e-10), bound slack min " + fmt(slack) + " over " + std::to_string(pairs) +
                    " pairs x 100 observables, sign saturation " + fmt(saturation)};
}

Verdict constraint_arithmetic(Workspace&)
{
    bool ok = co::parameter_count(2) == 9 && co::base_constraint_count(2) == 5 && co::parameter_count(4) == 100 &&
              co::base_constraint_count(4) == 17 && co::parity_constraint_count(4) == 48;
    int mismatches = 0;
    for (int d = 0; d <= 3; ++d) {
        for (int dp = 0; dp <= 4; ++dp) {
            mismatches += (co::free_dimension(2, d, dp) > 0) != (d + dp < 4);
        }
    }
    for (int d = 0; d <= 10; ++d) {
        for (int dp = 0; dp <= 16; ++dp) {
            mismatches += (co::free_dimension(4, d, dp, true) > 0) != (d + dp < 35);
        }
    }
    ok = ok && mismatches == 0;
    return {ok, "m=2: " + std::to_string(co::parameter_count(2)) + " parameters, " +
                    std::to_string(co::base_constraint_count(2)) + " base; m=4: " +
                    std::to_string(co::parameter_count(4)) + " parameters, " +
                    std::to_string(co::base_constraint_count(4)) + " base + " +
                    std::to_string(co::parity_constraint_count(4)) + " parity; feasibility mismatches " +
                    std::to_string(mismatches)};
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"acceptance suite for the BBGKY dimer simulator"};
    Workspace ws;
    std::string work = "acceptance-work";
    std::vector<std::string> only;
    app.add_option("--work", work, "directory for scenario output");
    app.add_flag("--reuse", ws.reuse, "reuse scenario output already present under --work");
    app.add_option("--only", only, "run only the named criteria");
    app.add_option("--threads", ws.threads, "worker threads for the scenarios")->check(CLI::PositiveNumber);
    CLI11_PARSE(app, argc, argv);
    ws.root = work;
    if (app.count("--threads") == 0) {
        ws.threads = sc::resolve_threads(std::nullopt);
    }

    const std::vector<std::pair<std::string, std::function<Verdict(Workspace&)>>> criteria{
        {"oracle", oracle},
        {"cluster_round_trip", cluster_round_trip},
        {"conservation", conservation},
        {"qualitative", qualitative},
        {"spot_check", spot_check},
        {"corrections", correction_performance},
        {"representability", representability},
        {"constraint_arithmetic", constraint_arithmetic},
    };

    int failed = 0;
    for (const auto& [name, fn] : criteria) {
        if (!only.empty() && std::find(only.begin(), only.end(), name) == only.end()) {
            continue;
        }
        Verdict v;
        try {
            v = fn(ws);
        } catch (const std::exception& e) {
            v = {false, std::string("error: ") + e.what()};
        }
        failed += v.pass ? 0 : 1;
        std::cout << (v.pass ? "PASS " : "FAIL ") << name << ": " << v.detail << std::endl;
    }
    return failed == 0 ? 0 : 1;
}
