#pragma once

// Run configuration: a JSON document with sections problem, solver, output,
// verify and norms. Every object is checked against its allowed keys, so a
// misspelled key is an error rather than a silently ignored setting.
// The grammar is documented in README.md.

#include "subfrac/solver.hpp"
#include "subfrac_cli/expression.hpp"

#include <json.hpp>

#include <charconv>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace subfrac::cli {

using json = nlohmann::ordered_json;

/// Spatial data: zero, an expression in x, a mode list, a coefficient generator
/// over lattice indices, or a CSV file of coefficients or grid samples.
struct DataConfig {
    std::string type = "zero";  // zero | expression | modes | generator | coefficients_csv | samples_csv
    std::string expr;
    std::vector<std::pair<bases::MultiIndex, bases::Complex>> modes;
    std::string path;
};

/// Time profile of separable forcing: a constant, an expression in t, or (t, value) samples.
struct TimeConfig {
    std::string type = "constant";  // constant | expression | samples_csv
    double value = 1.0;
    std::string expr;
    std::string path;
};

struct ForcingConfig {
    std::string type = "zero";  // zero | separable | space_time
    TimeConfig time;
    DataConfig space;
    std::string expr;  // space_time: expression in x and t
    int intervals = 256;
    std::optional<double> grading;
};

struct BasisConfig {
    std::string kind = "torus";  // torus | sine
    int dimension = 1;
    std::string symbol = "laplacian";  // laplacian | biharmonic | custom
    int order = 2;                     // custom symbols
    std::vector<bases::EllipticSymbol::Term> terms;
    int cutoff = 8;
    int grid = 0;  // 0: SpectralBasis::default_grid(cutoff)
};

struct RunConfig {
    std::filesystem::path base_dir = ".";

    BasisConfig basis;
    double rho = 1.0;
    double horizon = 1.0;
    DataConfig initial;
    ForcingConfig forcing;

    unsigned threads = 0;
    spectral::DuhamelOptions duhamel;
    std::optional<double> membership_tau;
    std::optional<solver::Fault> fault;

    std::vector<double> output_times;  // empty: {horizon}

    solver::VerifySettings verify;

    std::vector<double> sobolev_orders{0.0, 1.0, 2.0};
    std::optional<double> norms_tau;
    std::vector<int> equivalence_cutoffs{16, 32, 64};
    int random_checks = 100;
    std::uint64_t seed = 1;
};

// ---------------------------------------------------------------------------
// Formatting

/// Shortest decimal that reads back to the same double; "0" for both zeros.
inline std::string format_double(double v) {
    if (v == 0.0) return "0";
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

// ---------------------------------------------------------------------------
// Parsing

namespace detail {

inline void check_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
    if (!j.is_object()) throw ConfigError(where + ": expected an object");
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [k, v] : j.items()) {
        if (!ok.count(k)) throw ConfigError(where + ": unknown key '" + k + "'");
    }
}

template <class T>
T get(const json& j, const std::string& where) {
    try {
        return j.get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(where + ": " + e.what());
    }
}

template <class T>
void read(const json& obj, const char* key, T& out, const std::string& where) {
    if (obj.contains(key)) out = get<T>(obj.at(key), where + "." + key);
}

template <class T>
void read(const json& obj, const char* key, std::optional<T>& out, const std::string& where) {
    if (obj.contains(key) && !obj.at(key).is_null()) out = get<T>(obj.at(key), where + "." + key);
}

inline DataConfig parse_data(const json& j, const std::string& where) {
    DataConfig d;
    check_keys(j, {"type", "expr", "modes", "path"}, where);
    read(j, "type", d.type, where);
    if (d.type == "zero") {
        if (j.size() > 1) throw ConfigError(where + ": zero data takes no further keys");
    } else if (d.type == "expression" || d.type == "generator") {
        if (!j.contains("expr")) throw ConfigError(where + ": missing 'expr'");
        read(j, "expr", d.expr, where);
    } else if (d.type == "modes") {
        if (!j.contains("modes") || !j.at("modes").is_array()) throw ConfigError(where + ": 'modes' must be an array");
        for (const auto& m : j.at("modes")) {
            const std::string w = where + ".modes[]";
            check_keys(m, {"index", "re", "im"}, w);
            if (!m.contains("index")) throw ConfigError(w + ": missing 'index'");
            double re = 0.0, im = 0.0;
            read(m, "re", re, w);
            read(m, "im", im, w);
            d.modes.emplace_back(get<bases::MultiIndex>(m.at("index"), w + ".index"), bases::Complex(re, im));
        }
    } else if (d.type == "coefficients_csv" || d.type == "samples_csv") {
        if (!j.contains("path")) throw ConfigError(where + ": missing 'path'");
        read(j, "path", d.path, where);
    } else {
        throw ConfigError(where + ": unknown data type '" + d.type + "'");
    }
    return d;
}

inline TimeConfig parse_time(const json& j, const std::string& where) {
    TimeConfig t;
    if (j.is_number()) {
        t.value = get<double>(j, where);
        return t;
    }
    check_keys(j, {"type", "value", "expr", "path"}, where);
    read(j, "type", t.type, where);
    if (t.type == "constant") {
        read(j, "value", t.value, where);
    } else if (t.type == "expression") {
        if (!j.contains("expr")) throw ConfigError(where + ": missing 'expr'");
        read(j, "expr", t.expr, where);
    } else if (t.type == "samples_csv") {
        if (!j.contains("path")) throw ConfigError(where + ": missing 'path'");
        read(j, "path", t.path, where);
    } else {
        throw ConfigError(where + ": unknown time profile type '" + t.type + "'");
    }
    return t;
}

inline ForcingConfig parse_forcing(const json& j, const std::string& where) {
    ForcingConfig f;
    check_keys(j, {"type", "time", "space", "expr", "intervals", "grading"}, where);
    read(j, "type", f.type, where);
    if (f.type == "zero") {
        if (j.size() > 1) throw ConfigError(where + ": zero forcing takes no further keys");
    } else if (f.type == "separable") {
        if (j.contains("time")) f.time = parse_time(j.at("time"), where + ".time");
        if (!j.contains("space")) throw ConfigError(where + ": missing 'space'");
        f.space = parse_data(j.at("space"), where + ".space");
    } else if (f.type == "space_time") {
        if (!j.contains("expr")) throw ConfigError(where + ": missing 'expr'");
        read(j, "expr", f.expr, where);
        read(j, "intervals", f.intervals, where);
        read(j, "grading", f.grading, where);
    } else {
        throw ConfigError(where + ": unknown forcing type '" + f.type + "'");
    }
    return f;
}

inline BasisConfig parse_basis(const json& j, const std::string& where) {
    BasisConfig b;
    check_keys(j, {"kind", "dimension", "symbol", "cutoff", "grid"}, where);
    read(j, "kind", b.kind, where);
    read(j, "dimension", b.dimension, where);
    read(j, "cutoff", b.cutoff, where);
    read(j, "grid", b.grid, where);
    if (b.kind != "torus" && b.kind != "sine") throw ConfigError(where + ".kind: expected 'torus' or 'sine'");
    if (j.contains("symbol")) {
        const auto& s = j.at("symbol");
        if (s.is_string()) {
            b.symbol = get<std::string>(s, where + ".symbol");
            if (b.symbol != "laplacian" && b.symbol != "biharmonic") {
                throw ConfigError(where + ".symbol: expected 'laplacian', 'biharmonic' or an object");
            }
        } else {
            const std::string w = where + ".symbol";
            check_keys(s, {"order", "terms"}, w);
            b.symbol = "custom";
            read(s, "order", b.order, w);
            if (!s.contains("terms") || !s.at("terms").is_array()) throw ConfigError(w + ": 'terms' must be an array");
            for (const auto& t : s.at("terms")) {
                check_keys(t, {"alpha", "coefficient"}, w + ".terms[]");
                bases::EllipticSymbol::Term term;
                read(t, "alpha", term.alpha, w + ".terms[]");
                read(t, "coefficient", term.coefficient, w + ".terms[]");
                b.terms.push_back(std::move(term));
            }
        }
    }
    if (b.kind == "sine") {
        if (b.dimension != 1) throw ConfigError(where + ": the sine basis is one-dimensional");
        if (b.symbol != "laplacian") throw ConfigError(where + ": the sine basis carries the Dirichlet Laplacian only");
    }
    return b;
}

inline std::vector<double> parse_number_list(const std::string& text, const std::string& where) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const char* b = item.data();
        const char* e = b + item.size();
        while (b < e && *b == ' ') ++b;
        double v = 0.0;
        const auto r = std::from_chars(b, e, v);
        if (r.ec != std::errc() || r.ptr != e) throw ConfigError(where + ": bad number '" + item + "'");
        out.push_back(v);
    }
    return out;
}

}  // namespace detail

inline RunConfig parse_config(const json& j, std::filesystem::path base_dir = ".") {
    RunConfig c;
    c.base_dir = std::move(base_dir);
    detail::check_keys(j, {"problem", "solver", "output", "verify", "norms"}, "config");
    if (!j.contains("problem")) throw ConfigError("config: missing 'problem'");

    const auto& p = j.at("problem");
    detail::check_keys(p, {"basis", "rho", "horizon", "initial", "forcing"}, "problem");
    if (p.contains("basis")) c.basis = detail::parse_basis(p.at("basis"), "problem.basis");
    detail::read(p, "rho", c.rho, "problem");
    detail::read(p, "horizon", c.horizon, "problem");
    if (p.contains("initial")) c.initial = detail::parse_data(p.at("initial"), "problem.initial");
    if (p.contains("forcing")) c.forcing = detail::parse_forcing(p.at("forcing"), "problem.forcing");

    if (j.contains("solver")) {
        const auto& s = j.at("solver");
        detail::check_keys(s, {"threads", "duhamel_tolerance", "duhamel_max_refinements", "membership_tau", "fault"},
                           "solver");
        detail::read(s, "threads", c.threads, "solver");
        detail::read(s, "duhamel_tolerance", c.duhamel.tolerance, "solver");
        detail::read(s, "duhamel_max_refinements", c.duhamel.max_refinements, "solver");
        detail::read(s, "membership_tau", c.membership_tau, "solver");
        if (s.contains("fault") && !s.at("fault").is_null()) {
            const auto& f = s.at("fault");
            detail::check_keys(f, {"mode", "relative_shift"}, "solver.fault");
            solver::Fault fault;
            if (!f.contains("mode")) throw ConfigError("solver.fault: missing 'mode'");
            detail::read(f, "mode", fault.mode, "solver.fault");
            detail::read(f, "relative_shift", fault.relative_shift, "solver.fault");
            c.fault = fault;
        }
    }

    if (j.contains("output")) {
        const auto& o = j.at("output");
        detail::check_keys(o, {"times"}, "output");
        detail::read(o, "times", c.output_times, "output");
    }

    if (j.contains("verify")) {
        const auto& v = j.at("verify");
        auto& s = c.verify;
        detail::check_keys(v,
                           {"probe_points", "probe_times", "probe_time_min", "times", "mesh", "grading",
                            "residual_window", "tol_residual", "tol_spectral", "ic_fractions", "tol_initial",
                            "tol_uniqueness", "epsilon", "tau", "tail", "blackbox"},
                           "verify");
        detail::read(v, "probe_points", s.probe_points, "verify");
        detail::read(v, "probe_times", s.probe_times, "verify");
        detail::read(v, "probe_time_min", s.probe_time_min, "verify");
        detail::read(v, "times", s.explicit_times, "verify");
        detail::read(v, "mesh", s.mesh_intervals, "verify");
        detail::read(v, "grading", s.grading, "verify");
        detail::read(v, "residual_window", s.residual_window, "verify");
        detail::read(v, "tol_residual", s.tol_residual_blackbox, "verify");
        detail::read(v, "tol_spectral", s.tol_residual_spectral, "verify");
        detail::read(v, "ic_fractions", s.ic_fractions, "verify");
        detail::read(v, "tol_initial", s.tol_initial, "verify");
        detail::read(v, "tol_uniqueness", s.tol_uniqueness, "verify");
        detail::read(v, "epsilon", s.epsilon, "verify");
        detail::read(v, "tau", s.tau, "verify");
        detail::read(v, "tail", s.tail_check, "verify");
        detail::read(v, "blackbox", s.blackbox, "verify");
    }

    if (j.contains("norms")) {
        const auto& n = j.at("norms");
        detail::check_keys(n, {"sobolev", "tau", "equivalence_cutoffs", "random_checks"}, "norms");
        detail::read(n, "sobolev", c.sobolev_orders, "norms");
        detail::read(n, "tau", c.norms_tau, "norms");
        detail::read(n, "equivalence_cutoffs", c.equivalence_cutoffs, "norms");
        detail::read(n, "random_checks", c.random_checks, "norms");
    }
    return c;
}

inline RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
    json j;
    try {
        j = json::parse(in, nullptr, true, true);
    } catch (const json::exception& e) {
        throw ConfigError("config '" + path.string() + "': " + e.what());
    }
    return parse_config(j, path.parent_path().empty() ? std::filesystem::path(".") : path.parent_path());
}

// ---------------------------------------------------------------------------
// Effective settings, for manifests

namespace detail {

inline json data_json(const DataConfig& d) {
    json j{{"type", d.type}};
    if (d.type == "expression" || d.type == "generator") j["expr"] = d.expr;
    if (d.type == "modes") {
        json arr = json::array();
        for (const auto& [n, v] : d.modes) arr.push_back({{"index", n}, {"re", v.real()}, {"im", v.imag()}});
        j["modes"] = arr;
    }
    if (d.type == "coefficients_csv" || d.type == "samples_csv") j["path"] = d.path;
    return j;
}

inline json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace detail

/// (N/2 + 1/2) / m for the configured symbol, the default tau of solve and verify.
inline double default_tau(const BasisConfig& b) {
    const int m = b.symbol == "custom" ? b.order : (b.symbol == "biharmonic" ? 4 : 2);
    return (0.5 * b.dimension + 0.5) / m;
}

/// Every setting that affects numerics, with defaults filled in.
inline json effective_json(const RunConfig& c) {
    const double tau = default_tau(c.basis);
    json basis{{"kind", c.basis.kind}, {"dimension", c.basis.dimension}, {"cutoff", c.basis.cutoff},
               {"grid", c.basis.grid > 0 ? c.basis.grid : bases::SpectralBasis::default_grid(c.basis.cutoff)}};
    if (c.basis.symbol == "custom") {
        json terms = json::array();
        for (const auto& t : c.basis.terms) terms.push_back({{"alpha", t.alpha}, {"coefficient", t.coefficient}});
        basis["symbol"] = {{"order", c.basis.order}, {"terms", terms}};
    } else {
        basis["symbol"] = c.basis.symbol;
    }

    json forcing{{"type", c.forcing.type}};
    if (c.forcing.type == "separable") {
        const auto& t = c.forcing.time;
        json tj{{"type", t.type}};
        if (t.type == "constant") tj["value"] = t.value;
        if (t.type == "expression") tj["expr"] = t.expr;
        if (t.type == "samples_csv") tj["path"] = t.path;
        forcing["time"] = tj;
        forcing["space"] = detail::data_json(c.forcing.space);
    } else if (c.forcing.type == "space_time") {
        forcing["expr"] = c.forcing.expr;
        forcing["intervals"] = c.forcing.intervals;
        forcing["grading"] = c.forcing.grading.value_or(fractional::default_grading(c.rho));
    }

    json fault = nullptr;
    if (c.fault) fault = {{"mode", c.fault->mode}, {"relative_shift", c.fault->relative_shift}};

    const auto& v = c.verify;
    json verify{{"probe_points", v.probe_points},
                {"probe_times", v.probe_times},
                {"probe_time_min", v.probe_time_min},
                {"times", v.explicit_times},
                {"mesh", v.mesh_intervals},
                {"grading", v.grading.value_or(fractional::default_grading(c.rho))},
                {"residual_window", v.residual_window},
                {"tol_residual", v.tol_residual_blackbox},
                {"tol_spectral", v.tol_residual_spectral},
                {"ic_fractions", v.ic_fractions},
                {"tol_initial", detail::optional_json(v.tol_initial)},
                {"tol_uniqueness", v.tol_uniqueness},
                {"epsilon", v.epsilon.value_or(c.rho / 2.0)},
                {"tau", v.tau.value_or(tau)},
                {"tail", v.tail_check},
                {"blackbox", v.blackbox}};

    std::vector<double> times = c.output_times.empty() ? std::vector<double>{c.horizon} : c.output_times;
    return json{{"problem",
                 {{"basis", basis},
                  {"rho", c.rho},
                  {"horizon", c.horizon},
                  {"initial", detail::data_json(c.initial)},
                  {"forcing", forcing}}},
                {"solver",
                 {{"threads", c.threads},
                  {"duhamel_tolerance", c.duhamel.tolerance},
                  {"duhamel_max_refinements", c.duhamel.max_refinements},
                  {"membership_tau", c.membership_tau.value_or(tau)},
                  {"fault", fault}}},
                {"output", {{"times", times}}},
                {"verify", verify},
                {"norms",
                 {{"sobolev", c.sobolev_orders},
                  {"tau", c.norms_tau.value_or(tau)},
                  {"equivalence_cutoffs", c.equivalence_cutoffs},
                  {"random_checks", c.random_checks},
                  {"seed", c.seed}}}};
}

// ---------------------------------------------------------------------------
// Building the problem

namespace detail {

inline std::vector<std::string> space_variables(int N) {
    std::vector<std::string> v;
    for (int a = 1; a <= N; ++a) v.push_back("x" + std::to_string(a));
    static const char* alias[] = {"x", "y", "z"};
    for (int a = 0; a < N && a < 3; ++a) v.emplace_back(alias[a]);
    return v;
}

inline std::vector<double> space_values(const std::vector<double>& x) {
    std::vector<double> v(x);
    for (std::size_t a = 0; a < x.size() && a < 3; ++a) v.push_back(x[a]);
    return v;
}

inline std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open CSV file '" + path.string() + "'");
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (std::isalpha(static_cast<unsigned char>(line[0]))) continue;  // header
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        rows.push_back(std::move(cells));
    }
    return rows;
}

inline double to_double(const std::string& s, const std::string& where) {
    return parse_number_list(s, where).at(0);
}

inline solver::SpatialData build_data(const DataConfig& d, const bases::SpectralBasis& basis,
                                      const std::filesystem::path& base) {
    const int N = basis.dimension();
    if (d.type == "zero") return solver::ZeroData{};
    if (d.type == "expression") {
        const Expression e(d.expr, space_variables(N));
        return solver::SpatialFunction([e](const std::vector<double>& x) { return e(space_values(x)); });
    }
    if (d.type == "generator") {
        std::vector<std::string> vars;
        for (int a = 1; a <= N; ++a) vars.push_back("n" + std::to_string(a));
        vars.emplace_back("r");
        vars.emplace_back("ninf");
        const Expression e(d.expr, vars);
        return solver::CoefficientGenerator([e](const bases::MultiIndex& n) {
            std::vector<double> v;
            double r2 = 0.0, inf = 0.0;
            for (int k : n) {
                v.push_back(k);
                r2 += static_cast<double>(k) * k;
                inf = std::max(inf, std::abs(static_cast<double>(k)));
            }
            v.push_back(std::sqrt(r2));
            v.push_back(inf);
            return bases::Complex(e(v), 0.0);
        });
    }
    if (d.type == "modes" || d.type == "coefficients_csv") {
        auto g = basis.zeros();
        auto put = [&](const bases::MultiIndex& n, bases::Complex v, const std::string& where) {
            if (static_cast<int>(n.size()) != N) throw ConfigError(where + ": index has the wrong dimension");
            if (const auto q = basis.find(n)) g.values[*q] += v;
        };
        if (d.type == "modes") {
            for (const auto& [n, v] : d.modes) put(n, v, "modes");
        } else {
            const auto path = base / d.path;
            for (const auto& row : read_csv(path)) {
                const std::string where = path.string();
                if (static_cast<int>(row.size()) != N + 2) throw ConfigError(where + ": expected index..., re, im");
                bases::MultiIndex n(N);
                for (int a = 0; a < N; ++a) n[a] = static_cast<int>(to_double(row[a], where));
                put(n, {to_double(row[N], where), to_double(row[N + 1], where)}, where);
            }
        }
        return g;
    }
    // samples_csv: rows of coordinates..., value in grid order
    const auto path = base / d.path;
    std::vector<double> values;
    for (const auto& row : read_csv(path)) {
        if (row.empty()) continue;
        values.push_back(to_double(row.back(), path.string()));
    }
    if (values.size() != basis.grid_points()) {
        std::ostringstream os;
        os << path.string() << ": expected " << basis.grid_points() << " grid samples, found " << values.size();
        throw ConfigError(os.str());
    }
    return solver::GridValues{std::move(values)};
}

inline solver::TimeProfile build_time(const TimeConfig& t, const std::filesystem::path& base) {
    if (t.type == "constant") return t.value;
    if (t.type == "expression") {
        const Expression e(t.expr, {"t"});
        return std::function<double(double)>([e](double s) { return e({s}); });
    }
    const auto path = base / t.path;
    std::vector<double> nodes, values;
    for (const auto& row : read_csv(path)) {
        if (row.size() != 2) throw ConfigError(path.string() + ": expected rows t, value");
        nodes.push_back(to_double(row[0], path.string()));
        values.push_back(to_double(row[1], path.string()));
    }
    return spectral::SampledForcing{fractional::TimeMesh::from_nodes(nodes), values};
}

}  // namespace detail

inline bases::SpectralBasis build_basis(const BasisConfig& b) {
    if (b.kind == "sine") return bases::SpectralBasis::dirichlet_sine(b.cutoff, b.grid);
    if (b.symbol == "laplacian") return bases::SpectralBasis::torus(bases::EllipticSymbol::laplacian(b.dimension), b.cutoff, b.grid);
    if (b.symbol == "biharmonic") return bases::SpectralBasis::torus(bases::EllipticSymbol::biharmonic(b.dimension), b.cutoff, b.grid);
    return bases::SpectralBasis::torus(bases::EllipticSymbol(b.dimension, b.order, b.terms), b.cutoff, b.grid);
}

inline solver::ProblemSpec build_problem(const RunConfig& c) {
    auto basis = build_basis(c.basis);
    solver::ProblemSpec p{basis, c.rho, detail::build_data(c.initial, basis, c.base_dir), solver::NoForcing{}, c.horizon};
    if (c.forcing.type == "separable") {
        p.forcing = solver::SeparableForcing{detail::build_time(c.forcing.time, c.base_dir),
                                             detail::build_data(c.forcing.space, basis, c.base_dir)};
    } else if (c.forcing.type == "space_time") {
        const auto mesh = fractional::TimeMesh::graded(c.horizon, c.forcing.intervals,
                                                       c.forcing.grading.value_or(fractional::default_grading(c.rho)));
        auto vars = detail::space_variables(basis.dimension());
        vars.emplace_back("t");
        const Expression e(c.forcing.expr, vars);
        solver::SpaceTimeSamples st{mesh, {}};
        for (std::size_t i = 0; i < mesh.size(); ++i) {
            std::vector<double> slice(basis.grid_points());
            for (std::size_t k = 0; k < slice.size(); ++k) {
                auto v = detail::space_values(basis.grid_coordinate(k));
                v.push_back(mesh[i]);
                slice[k] = e(v);
            }
            st.slices.push_back(std::move(slice));
        }
        p.forcing = std::move(st);
    }
    return p;
}

inline solver::SolveOptions build_options(const RunConfig& c) {
    solver::SolveOptions o;
    o.threads = c.threads;
    o.duhamel = c.duhamel;
    o.membership_tau = c.membership_tau;
    o.fault = c.fault;
    return o;
}

}  // namespace subfrac::cli
