#include "bbgky/scenario.hpp"

#include "bbgky/diagnostics.hpp"
#include "bbgky/hierarchy.hpp"
#include "bbgky/repres.hpp"

#include <json.hpp>
#include <toml.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#ifndef BBGKY_VERSION
#define BBGKY_VERSION "0.0.0"
#endif

namespace bbgky::scenario {

namespace fs = std::filesystem;
using json = nlohmann::json;

std::string version()
{
    return BBGKY_VERSION;
}

// --- config -------------------------------------------------------------------

dimer::DimerParams ScenarioConfig::params() const
{
    if (lambda) {
        return dimer::DimerParams::from_lambda(N, *lambda, J);
    }
    return {N, J, U.value_or(0.0)};
}

int ScenarioConfig::exact_order() const
{
    int o = exact_max_order;
    if (o == 0) {
        o = orders.empty() ? 2 : *std::max_element(orders.begin(), orders.end());
    }
    return std::min(o, N);
}

void ScenarioConfig::validate() const
{
    auto fail = [](const std::string& what) { throw ConfigError(what); };
    if (N < 2) {
        fail("N must be >= 2");
    }
    if (lambda.has_value() == U.has_value()) {
        fail("exactly one of lambda and U must be given");
    }
    if ((lambda && !std::isfinite(*lambda)) || (U && !std::isfinite(*U))) {
        fail("interaction must be finite");
    }
    if (!(J > 0.0)) {
        fail("J must be positive");
    }
    for (int o : orders) {
        if (o < 2 || o > N - 1) {
            fail("truncation order " + std::to_string(o) + " outside 2..N-1");
        }
    }
    if (std::set<int>(orders.begin(), orders.end()).size() != orders.size()) {
        fail("truncation orders must be distinct");
    }
    if (!(t_final >= 0.0) || !(dt > 0.0)) {
        fail("need t_final >= 0 and dt > 0");
    }
    if (exact_max_order < 0 || exact_max_order > N) {
        fail("exact_max_order must lie in 0..N");
    }
    const bool corrected = std::any_of(corrections.begin(), corrections.end(),
                                       [](auto m) { return m != corrections::Mode::none; });
    if (corrected && N < 3) {
        fail("corrected runs need N >= 3");
    }
    if (initial_state != "condensate" && initial_state != "random") {
        fail("initial_state must be \"condensate\" or \"random\"");
    }
    if (output.empty()) {
        fail("output must not be empty");
    }
    try {
        correction.validate();
        integrator.validate();
    } catch (const std::invalid_argument& e) {
        fail(e.what());
    }
}

namespace {

// Relative to the initial energy, or to J when that vanishes (free condensate).
double energy_drift(double e, double e0, double J)
{
    return std::abs(e - e0) / std::max(std::abs(e0), J);
}

void reject_unknown(const toml::table& tbl, const std::set<std::string>& allowed, const std::string& where)
{
    for (auto&& [key, value] : tbl) {
        if (!allowed.count(std::string(key.str()))) {
            throw ConfigError("unknown key '" + std::string(key.str()) + "' in " + where);
        }
    }
}

template <typename T>
std::optional<T> get(const toml::table& tbl, const char* key)
{
    const auto node = tbl[key];
    if (!node) {
        return std::nullopt;
    }
    if constexpr (std::is_same_v<T, double>) {
        if (!node.is_number()) {
            throw ConfigError(std::string("'") + key + "' must be a number");
        }
    } else if constexpr (std::is_same_v<T, std::int64_t>) {
        if (!node.is_integer()) {
            throw ConfigError(std::string("'") + key + "' must be an integer");
        }
    } else if constexpr (std::is_same_v<T, bool>) {
        if (!node.is_boolean()) {
            throw ConfigError(std::string("'") + key + "' must be a boolean");
        }
    } else {
        if (!node.is_string()) {
            throw ConfigError(std::string("'") + key + "' must be a string");
        }
    }
    return node.template value<T>();
}

int to_int(std::int64_t v, const char* key)
{
    if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
        throw ConfigError(std::string("'") + key + "' out of range");
    }
    return static_cast<int>(v);
}

}  // namespace

ScenarioConfig parse_config(std::string_view text)
{
    toml::table tbl;
    try {
        tbl = toml::parse(text);
    } catch (const toml::parse_error& e) {
        std::ostringstream msg;
        msg << "TOML parse error at line " << e.source().begin.line << ": " << e.description();
        throw ConfigError(msg.str());
    }
    reject_unknown(tbl,
                   {"N", "lambda", "U", "J", "orders", "t_final", "dt", "exact", "exact_max_order", "corrections",
                    "closure", "output", "seed", "initial_state", "correction", "integrator"},
                   "top level");

    ScenarioConfig cfg;
    const auto n = get<std::int64_t>(tbl, "N");
    if (!n) {
        throw ConfigError("'N' is required");
    }
    cfg.N = to_int(*n, "N");
    cfg.lambda = get<double>(tbl, "lambda");
    cfg.U = get<double>(tbl, "U");
    cfg.J = get<double>(tbl, "J").value_or(cfg.J);
    if (auto node = tbl["orders"]) {
        const auto* arr = node.as_array();
        if (!arr) {
            throw ConfigError("'orders' must be an array of integers");
        }
        cfg.orders.clear();
        for (const auto& el : *arr) {
            const auto v = el.value<std::int64_t>();
            if (!el.is_integer() || !v) {
                throw ConfigError("'orders' must be an array of integers");
            }
            cfg.orders.push_back(to_int(*v, "orders"));
        }
    }
    const auto t_final = get<double>(tbl, "t_final");
    if (!t_final) {
        throw ConfigError("'t_final' is required");
    }
    cfg.t_final = *t_final;
    cfg.dt = get<double>(tbl, "dt").value_or(cfg.dt);
    cfg.exact = get<bool>(tbl, "exact").value_or(cfg.exact);
    cfg.exact_max_order = to_int(get<std::int64_t>(tbl, "exact_max_order").value_or(0), "exact_max_order");
    if (auto node = tbl["corrections"]) {
        const auto* arr = node.as_array();
        if (!arr) {
            throw ConfigError("'corrections' must be an array of strings");
        }
        for (const auto& el : *arr) {
            const auto v = el.value<std::string>();
            if (!v) {
                throw ConfigError("'corrections' must be an array of strings");
            }
            try {
                cfg.corrections.push_back(corrections::parse_mode(*v));
            } catch (const std::invalid_argument& e) {
                throw ConfigError(e.what());
            }
        }
    }
    if (auto c = get<std::string>(tbl, "closure")) {
        try {
            cfg.closure = cluster::parse_strategy(*c);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
    }
    cfg.output = get<std::string>(tbl, "output").value_or(cfg.output);
    if (auto seed = get<std::int64_t>(tbl, "seed")) {
        if (*seed < 0) {
            throw ConfigError("'seed' must be non-negative");
        }
        cfg.seed = static_cast<std::uint64_t>(*seed);
    }
    cfg.initial_state = get<std::string>(tbl, "initial_state").value_or(cfg.initial_state);

    if (auto node = tbl["correction"]) {
        const auto* sub = node.as_table();
        if (!sub) {
            throw ConfigError("'correction' must be a table");
        }
        reject_unknown(*sub, {"epsilon", "eta", "max_iter"}, "[correction]");
        cfg.correction.epsilon = get<double>(*sub, "epsilon").value_or(cfg.correction.epsilon);
        cfg.correction.eta = get<double>(*sub, "eta").value_or(cfg.correction.eta);
        cfg.correction.max_iter =
            to_int(get<std::int64_t>(*sub, "max_iter").value_or(cfg.correction.max_iter), "max_iter");
    }
    if (auto node = tbl["integrator"]) {
        const auto* sub = node.as_table();
        if (!sub) {
            throw ConfigError("'integrator' must be a table");
        }
        reject_unknown(*sub, {"rtol", "atol", "max_steps_per_dt", "method", "initial_step"}, "[integrator]");
        auto& ic = cfg.integrator;
        ic.rtol = get<double>(*sub, "rtol").value_or(ic.rtol);
        ic.atol = get<double>(*sub, "atol").value_or(ic.atol);
        ic.max_steps_per_interval = get<std::int64_t>(*sub, "max_steps_per_dt").value_or(ic.max_steps_per_interval);
        ic.method = get<std::string>(*sub, "method").value_or(ic.method);
        ic.initial_step = get<double>(*sub, "initial_step").value_or(ic.initial_step);
    }
    cfg.integrator.dt_out = cfg.dt;
    cfg.integrator.t_final = cfg.t_final;
    cfg.correction.dt = cfg.dt;
    cfg.validate();
    return cfg;
}

ScenarioConfig load_config(const fs::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot read config file " + path.string());
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

namespace {

json config_json(const ScenarioConfig& c)
{
    json j;
    j["N"] = c.N;
    if (c.lambda) {
        j["lambda"] = *c.lambda;
    }
    if (c.U) {
        j["U"] = *c.U;
    }
    j["J"] = c.J;
    j["U_effective"] = c.params().U;
    j["orders"] = c.orders;
    j["t_final"] = c.t_final;
    j["dt"] = c.dt;
    j["exact"] = c.exact;
    j["exact_max_order"] = c.exact_order();
    std::vector<std::string> modes;
    for (auto m : c.corrections) {
        modes.push_back(corrections::to_string(m));
    }
    j["corrections"] = modes;
    j["correction"] = {{"epsilon", c.correction.epsilon},
                       {"eta", c.correction.eta},
                       {"max_iter", c.correction.max_iter}};
    j["integrator"] = {{"rtol", c.integrator.rtol},
                       {"atol", c.integrator.atol},
                       {"max_steps_per_dt", c.integrator.max_steps_per_interval},
                       {"method", c.integrator.method},
                       {"initial_step", c.integrator.initial_step}};
    j["closure"] = cluster::to_string(c.closure);
    j["output"] = c.output;
    j["seed"] = c.seed;
    j["initial_state"] = c.initial_state;
    return j;
}

// --- CSV output -----------------------------------------------------------------

class Csv {
public:
    Csv(const fs::path& path, const std::vector<std::string>& header) : path_(path), out_(path)
    {
        if (!out_) {
            throw IoError("cannot open " + path.string() + " for writing");
        }
        for (std::size_t i = 0; i < header.size(); ++i) {
            out_ << (i ? "," : "") << header[i];
        }
        out_ << '\n';
    }

    Csv& row(double t)
    {
        first_ = true;
        return num(t);
    }

    Csv& num(double v)
    {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.12e", v);
        out_ << (first_ ? "" : ",") << buf;
        first_ = false;
        return *this;
    }

    Csv& text(const std::string& s)
    {
        out_ << "," << s;
        return *this;
    }

    Csv& integer(long v)
    {
        out_ << "," << v;
        return *this;
    }

    void end()
    {
        out_ << '\n';
        if (!out_) {
            throw IoError("write failed on " + path_.string());
        }
    }

    void close()
    {
        out_.close();
        if (!out_) {
            throw IoError("write failed on " + path_.string());
        }
    }

private:
    fs::path path_;
    std::ofstream out_;
    bool first_ = true;
};

std::vector<std::string> numbered(const std::string& first, const std::string& prefix, int from, int to)
{
    std::vector<std::string> h{first};
    for (int i = from; i <= to; ++i) {
        h.push_back(prefix + std::to_string(i));
    }
    return h;
}

void write_vector(Csv& csv, double t, const RealVector& v)
{
    csv.row(t);
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        csv.num(v(i));
    }
    csv.end();
}

struct Writers {
    fs::path dir;
    std::vector<std::string> files;

    Csv open(const std::string& name, const std::vector<std::string>& header)
    {
        files.push_back(name);
        return Csv(dir / name, header);
    }
};

double elapsed(std::chrono::steady_clock::time_point since)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - since).count();
}

void exact_run(const ScenarioConfig& cfg, Writers& w, RunResult& res)
{
    const auto p = cfg.params();
    const dimer::DimerPropagator prop(p);
    const auto psi0 = initial_state(cfg);
    const int top = cfg.exact_order();

    auto imb = w.open("imbalance.csv", {"t", "imbalance"});
    std::vector<Csv> np;
    for (int o = 1; o <= top; ++o) {
        np.push_back(w.open("np_o" + std::to_string(o) + ".csv",
                            numbered("t", "lambda_", 1, static_cast<int>(dimension(2, o)))));
    }
    std::optional<Csv> kspec;
    if (top >= 2) {
        kspec.emplace(w.open("kspec.csv", numbered("t", "xi_", 1, 4)));
    }
    auto norms = w.open("clusternorms.csv", numbered("t", "c_", 1, top));
    auto fock = w.open("fockprob.csv", numbered("t", "p_", 0, cfg.N));
    auto en = w.open("energy.csv", {"t", "energy", "trace"});

    const long intervals = static_cast<long>(std::floor(cfg.t_final / cfg.dt + 1e-9));
    res.energy_initial = prop.energy(psi0);
    for (long k = 0; k <= intervals; ++k) {
        const double t = static_cast<double>(k) * cfg.dt;
        const auto psi = prop.evolve(psi0, t);
        std::vector<Rdm> family;
        for (int o = 1; o <= top; ++o) {
            family.push_back(dimer::exact_rdm(psi, o));
        }
        imb.row(t).num(dimer::imbalance(psi)).end();
        for (int o = 1; o <= top; ++o) {
            write_vector(np[static_cast<std::size_t>(o - 1)], t,
                         diagnostics::natural_populations(family[static_cast<std::size_t>(o - 1)]));
        }
        if (kspec) {
            write_vector(*kspec, t, diagnostics::k_spectrum(family[1], cfg.N));
        }
        write_vector(norms, t, cluster::cluster_norms(cluster::clusters_from_rdms(family)));
        write_vector(fock, t, dimer::fock_probabilities(psi));
        const double e = prop.energy(psi);
        const double tr = family.back().trace().real();
        en.row(t).num(e).num(tr).end();
        res.max_rel_energy_drift =
            std::max(res.max_rel_energy_drift,
                     energy_drift(e, res.energy_initial, cfg.J));
        res.max_trace_drift = std::max(res.max_trace_drift, std::abs(tr - 1.0));
        res.t_end = t;
        ++res.records;
    }
}

void truncated_run(const ScenarioConfig& cfg, const RunSpec& spec, Writers& w, RunResult& res)
{
    const auto p = cfg.params();
    const int top = spec.order;
    const auto ops = ModelOperators::bose_hubbard_dimer(p, top);
    const HierarchyRhs base(ops, cfg.closure);
    const auto psi0 = initial_state(cfg);
    const auto rho0 = dimer::exact_rdm(psi0, top);

    auto ccfg = cfg.correction;
    ccfg.mode = spec.mode;
    std::vector<CorrectionEvent> events;

    RhsFunction rhs = [&](const Rdm& r) { return base(r); };
    EmitHook hook;
    if (spec.mode == corrections::Mode::eom) {
        rhs = [&](const Rdm& r) { return corrections::corrected_rhs(r, base, ccfg).derivative; };
        hook = [&](double t, Rdm& r) {
            const auto c = corrections::corrected_rhs(r, base, ccfg);
            if (c.d + c.d_prime > 0) {
                events.push_back({t, "eom", c.d, c.d_prime, c.norm, 0, true, c.contraction_residual,
                                  c.energy_residual, c.dropped});
            }
        };
    } else if (spec.mode == corrections::Mode::purify) {
        hook = [&](double t, Rdm& r) {
            const auto pr = corrections::purify(r, ops, ccfg);
            if (pr.iterations > 0 || !pr.converged) {
                events.push_back({t, "purify", pr.d, pr.d_prime, pr.norm, pr.iterations, pr.converged,
                                  pr.contraction_residual, pr.energy_residual, pr.dropped});
                r = pr.rho2;
            }
        };
    }

    const auto traj = integrate(rho0, rhs, cfg.integrator, hook);
    res.termination = to_string(traj.termination);
    res.message = traj.message;
    res.correction_events = events.size();

    const bool with_exact = cfg.exact && cfg.N <= 200;
    std::optional<dimer::DimerPropagator> prop;
    if (with_exact) {
        prop.emplace(p);
    }

    auto imb = w.open("imbalance.csv", {"t", "imbalance"});
    std::vector<Csv> np;
    std::vector<Csv> td;
    for (int o = 1; o <= top; ++o) {
        np.push_back(w.open("np_o" + std::to_string(o) + ".csv",
                            numbered("t", "lambda_", 1, static_cast<int>(dimension(2, o)))));
        if (with_exact) {
            td.push_back(w.open("tracedist_o" + std::to_string(o) + ".csv", {"t", "D"}));
        }
    }
    auto kspec = w.open("kspec.csv", numbered("t", "xi_", 1, 4));
    auto norms = w.open("clusternorms.csv", numbered("t", "c_", 1, top));
    auto steps = w.open("steps.csv", {"t", "steps", "rejected"});
    auto en = w.open("energy.csv", {"t", "energy", "trace"});

    if (!traj.records.empty()) {
        res.energy_initial = energy(traj.records.front().rdms.back(), ops);
    }
    for (const auto& rec : traj.records) {
        const auto& rho_top = rec.rdms.back();
        imb.row(rec.t).num(diagnostics::imbalance(rec.rdm(1))).end();
        for (int o = 1; o <= top; ++o) {
            write_vector(np[static_cast<std::size_t>(o - 1)], rec.t, rec.nps[static_cast<std::size_t>(o - 1)]);
        }
        if (with_exact) {
            const auto psi = prop->evolve(psi0, rec.t);
            for (int o = 1; o <= top; ++o) {
                const double d = diagnostics::trace_distance(rec.rdm(o), dimer::exact_rdm(psi, o));
                td[static_cast<std::size_t>(o - 1)].row(rec.t).num(d).end();
            }
        }
        write_vector(kspec, rec.t, diagnostics::k_spectrum(rho_top, cfg.N));
        write_vector(norms, rec.t, cluster::cluster_norms(cluster::clusters_from_rdms(rec.rdms)));
        steps.row(rec.t).integer(rec.steps).integer(rec.rejected).end();
        const double e = energy(rho_top, ops);
        const double tr = rho_top.trace().real();
        en.row(rec.t).num(e).num(tr).end();
        res.max_rel_energy_drift =
            std::max(res.max_rel_energy_drift,
                     energy_drift(e, res.energy_initial, cfg.J));
        res.max_trace_drift = std::max(res.max_trace_drift, std::abs(tr - 1.0));
        res.t_end = rec.t;
    }
    res.records = traj.records.size();

    auto corr = w.open("corrections.csv", {"t", "kind", "d", "d_prime", "norm", "iterations", "converged",
                                           "contraction_residual", "energy_residual", "dropped"});
    for (const auto& e : events) {
        corr.row(e.t)
            .text(e.kind)
            .integer(e.d)
            .integer(e.d_prime)
            .num(e.norm)
            .integer(e.iterations)
            .integer(e.converged ? 1 : 0)
            .num(e.contraction_residual)
            .num(e.energy_residual)
            .integer(e.dropped)
            .end();
    }
}

json run_json(const RunResult& r)
{
    json j;
    j["id"] = r.spec.id;
    j["kind"] = r.spec.kind == RunKind::exact ? "exact" : "truncated";
    j["order"] = r.spec.order;
    j["correction"] = corrections::to_string(r.spec.mode);
    j["termination"] = r.termination;
    j["message"] = r.message;
    j["wall_seconds"] = r.wall_seconds;
    j["t_end"] = r.t_end;
    j["records"] = r.records;
    j["energy_initial"] = r.energy_initial;
    j["max_rel_energy_drift"] = r.max_rel_energy_drift;
    j["max_trace_drift"] = r.max_trace_drift;
    j["correction_events"] = r.correction_events;
    j["files"] = r.files;
    return j;
}

}  // namespace

dimer::FockState initial_state(const ScenarioConfig& cfg)
{
    if (cfg.initial_state == "random") {
        std::mt19937_64 rng(cfg.seed);
        std::normal_distribution<double> gauss;
        dimer::FockState s{ComplexVector(cfg.N + 1)};
        for (Eigen::Index i = 0; i <= cfg.N; ++i) {
            s.coefficients(i) = Complex(gauss(rng), gauss(rng));
        }
        s.coefficients.normalize();
        return s;
    }
    return dimer::FockState::left_condensate(cfg.N);
}

std::vector<RunSpec> plan_runs(const ScenarioConfig& cfg)
{
    std::vector<RunSpec> runs;
    if (cfg.exact) {
        runs.push_back({"exact", RunKind::exact, cfg.exact_order(), corrections::Mode::none});
    }
    for (int o : cfg.orders) {
        runs.push_back({"o" + std::to_string(o), RunKind::truncated, o, corrections::Mode::none});
    }
    for (auto mode : cfg.corrections) {
        if (mode == corrections::Mode::none) {
            continue;
        }
        const std::string id = "o2_" + corrections::to_string(mode);
        if (std::none_of(runs.begin(), runs.end(), [&](const RunSpec& r) { return r.id == id; })) {
            runs.push_back({id, RunKind::truncated, 2, mode});
        }
    }
    return runs;
}

RunResult execute_run(const ScenarioConfig& cfg, const RunSpec& spec, const fs::path& dir)
{
    const auto start = std::chrono::steady_clock::now();
    RunResult res;
    res.spec = spec;
    Writers w{dir / spec.id, {}};
    std::error_code ec;
    fs::create_directories(w.dir, ec);
    if (ec) {
        throw IoError("cannot create " + w.dir.string() + ": " + ec.message());
    }
    try {
        if (spec.kind == RunKind::exact) {
            exact_run(cfg, w, res);
        } else {
            truncated_run(cfg, spec, w, res);
        }
    } catch (const IoError&) {
        throw;
    } catch (const std::exception& e) {
        res.termination = "error";
        res.message = e.what();
    }
    res.files = w.files;
    res.wall_seconds = elapsed(start);
    return res;
}

bool ScenarioResult::all_diagnosed() const
{
    return std::all_of(runs.begin(), runs.end(), [](const RunResult& r) { return r.diagnosed(); });
}

ScenarioResult run_scenario(const ScenarioConfig& cfg, const fs::path& out, int threads)
{
    cfg.validate();
    const auto start = std::chrono::steady_clock::now();
    std::error_code ec;
    fs::create_directories(out, ec);
    if (ec) {
        throw IoError("cannot create output directory " + out.string() + ": " + ec.message());
    }
    const auto plan = plan_runs(cfg);
    ScenarioResult result;
    result.runs.resize(plan.size());

    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::optional<IoError> io_error;
    auto worker = [&] {
        for (std::size_t i = next++; i < plan.size(); i = next++) {
            try {
                result.runs[i] = execute_run(cfg, plan[i], out);
            } catch (const IoError& e) {
                std::lock_guard lock(error_mutex);
                if (!io_error) {
                    io_error.emplace(e);
                }
            }
        }
    };
    const int n = std::max(1, std::min<int>(threads, static_cast<int>(plan.size())));
    std::vector<std::thread> pool;
    for (int i = 1; i < n; ++i) {
        pool.emplace_back(worker);
    }
    worker();
    for (auto& t : pool) {
        t.join();
    }
    if (io_error) {
        throw *io_error;
    }
    result.wall_seconds = elapsed(start);

    json manifest;
    manifest["schema"] = 1;
    manifest["version"] = version();
    manifest["config"] = config_json(cfg);
    manifest["threads"] = n;
    manifest["wall_seconds"] = result.wall_seconds;
    manifest["runs"] = json::array();
    for (const auto& r : result.runs) {
        manifest["runs"].push_back(run_json(r));
    }
    std::ofstream mf(out / "manifest.json");
    mf << manifest.dump(2) << '\n';
    mf.close();
    if (!mf) {
        throw IoError("cannot write " + (out / "manifest.json").string());
    }
    return result;
}

int resolve_threads(std::optional<int> flag)
{
    if (flag && *flag >= 1) {
        return *flag;
    }
    if (const char* env = std::getenv("BBGKY_BOSE_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= 1) {
            return static_cast<int>(v);
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace bbgky::scenario
