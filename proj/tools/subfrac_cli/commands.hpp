#pragma once

// Subcommands ml, solve, verify and norms.
// Exit codes: 0 success, 1 verification failure, 2 usage or config error,
// 3 numerical accuracy failure.

#include "subfrac/subfrac.hpp"
#include "subfrac_cli/config.hpp"

#include <CLI11.hpp>
#include <boost/version.hpp>
#include <fftw3.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace subfrac::cli {

enum ExitCode : int { ok = 0, verification_failed = 1, usage_error = 2, numeric_error = 3 };

struct Overrides {
    std::optional<int> cutoff;
    std::optional<int> mesh;
    std::optional<double> tol;
    std::optional<std::string> probe_times;
    std::optional<unsigned> threads;
    std::optional<std::uint64_t> seed;
};

enum class Verbosity { quiet, normal, verbose };

/// --cutoff sets K, --mesh the verification mesh, --tol the black-box residual
/// tolerance, --probe-times both the solve output times and the verify probe times.
inline void apply_overrides(RunConfig& c, const Overrides& o) {
    if (o.cutoff) c.basis.cutoff = *o.cutoff;
    if (o.mesh) c.verify.mesh_intervals = *o.mesh;
    if (o.tol) c.verify.tol_residual_blackbox = *o.tol;
    if (o.probe_times) {
        const auto t = detail::parse_number_list(*o.probe_times, "--probe-times");
        c.output_times = t;
        c.verify.explicit_times = t;
    }
    if (o.threads) c.threads = *o.threads;
    if (o.seed) c.seed = *o.seed;
}

namespace detail {

using Clock = std::chrono::steady_clock;

inline double elapsed_ms(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

inline json versions() {
    return {{"subfrac", subfrac::version},
            {"boost", BOOST_LIB_VERSION},
            {"fftw", std::string(fftw_version)},
            {"compiler", __VERSION__},
            {"cli11", CLI11_VERSION}};
}

inline void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + path.string() + "'");
    out << text;
}

inline std::string index_header(int N) {
    std::string h;
    for (int a = 1; a <= N; ++a) h += "n" + std::to_string(a) + ",";
    return h + "re,im\n";
}

inline std::string coefficient_csv(const bases::CoefficientVector& g) {
    const int N = static_cast<int>(g.basis->dimension);
    std::string s = index_header(N);
    for (std::size_t q = 0; q < g.values.size(); ++q) {
        for (int k : g.basis->modes[q].index) s += std::to_string(k) + ",";
        s += format_double(g.values[q].real()) + "," + format_double(g.values[q].imag()) + "\n";
    }
    return s;
}

inline std::string slice_csv(const bases::SpectralBasis& b, const std::vector<double>& values) {
    std::string s;
    for (int a = 1; a <= b.dimension(); ++a) s += "x" + std::to_string(a) + ",";
    s += "value\n";
    for (std::size_t i = 0; i < values.size(); ++i) {
        for (const double x : b.grid_coordinate(i)) s += format_double(x) + ",";
        s += format_double(values[i]) + "\n";
    }
    return s;
}

inline std::string numbered(const std::string& stem, std::size_t k, const std::string& ext) {
    std::ostringstream os;
    os << stem << "_" << std::setw(3) << std::setfill('0') << k << ext;
    return os.str();
}

// Warnings from forcing integrals that missed their tolerance at time t.
inline void duhamel_warnings(const solver::SolutionField& f, double t, std::vector<std::string>& out) {
    for (const auto& g : f.groups()) {
        if (!g.forced) continue;
        const auto v = g.forced->evaluate(t);
        if (!v.within_tolerance) {
            out.push_back("forcing integral for lambda = " + format_double(g.lambda) + " at t = " + format_double(t) +
                          " has estimated error " + format_double(v.est_error));
        }
    }
}

}  // namespace detail

inline int cmd_ml(double rho, double mu, const std::vector<double>& zs, std::ostream& out) {
    out << "z,value,est_abs_error,regime\n";
    for (const double z : zs) {
        const auto e = special::ml({rho, mu}, z);
        out << format_double(z) << "," << format_double(e.value) << "," << format_double(e.est_abs_error) << ","
            << special::to_string(e.regime) << "\n";
    }
    return ok;
}

inline int cmd_solve(const RunConfig& c, const std::filesystem::path& out_dir, std::ostream& out, Verbosity v) {
    const auto start = detail::Clock::now();
    const auto spec = build_problem(c);
    const double t_build = detail::elapsed_ms(start);
    const auto field = solver::solve(spec, build_options(c));
    const double t_solve = detail::elapsed_ms(start) - t_build;

    std::filesystem::create_directories(out_dir);
    std::vector<std::string> warnings = field.warnings();
    const auto times = c.output_times.empty() ? std::vector<double>{c.horizon} : c.output_times;
    json outputs = json::array();
    double max_imag = 0.0;
    detail::write_file(out_dir / "initial_coefficients.csv", detail::coefficient_csv(field.initial_coefficients()));
    for (std::size_t k = 0; k < times.size(); ++k) {
        const double t = times[k];
        const auto slice = field.slice(t);
        max_imag = std::max(max_imag, slice.max_imag);
        const auto sname = detail::numbered("slice", k, ".csv");
        const auto cname = detail::numbered("coefficients", k, ".csv");
        detail::write_file(out_dir / sname, detail::slice_csv(field.basis(), slice.values));
        detail::write_file(out_dir / cname, detail::coefficient_csv(field.coefficients(t)));
        detail::duhamel_warnings(field, t, warnings);
        outputs.push_back({{"t", t}, {"slice", sname}, {"coefficients", cname}});
    }
    const double t_total = detail::elapsed_ms(start);

    json manifest{{"command", "solve"},
                  {"versions", detail::versions()},
                  {"settings", effective_json(c)},
                  {"threads_used", field.threads()},
                  {"modes", field.basis().mode_count()},
                  {"distinct_eigenvalues", field.groups().size()},
                  {"membership",
                   {{"sum", field.membership().sum},
                    {"threshold", field.membership().threshold},
                    {"hypothesis_holds", field.membership().hypothesis_holds},
                    {"last_shell_mass", field.membership().last_shell_mass},
                    {"note", field.membership().note}}},
                  {"max_imaginary_residue", max_imag},
                  {"initial_coefficients", "initial_coefficients.csv"},
                  {"outputs", outputs},
                  {"warnings", warnings},
                  {"timings_ms", {{"build", t_build}, {"solve", t_solve}, {"total", t_total}}}};
    detail::write_file(out_dir / "manifest.json", manifest.dump(2) + "\n");

    if (v != Verbosity::quiet) {
        out << "solved " << field.basis().mode_count() << " modes; wrote " << times.size() << " slice(s) to "
            << out_dir.string() << "\n";
        for (const auto& w : warnings) out << "warning: " << w << "\n";
        if (v == Verbosity::verbose) out << "time: " << format_double(t_total) << " ms\n";
    }
    return ok;
}

inline json report_json(const solver::VerificationReport& r) {
    json checks = json::array();
    for (const auto& c : r.checks) {
        checks.push_back({{"name", c.name},
                          {"measured", c.measured},
                          {"tolerance", c.tolerance},
                          {"pass", c.pass},
                          {"note", c.note}});
    }
    return {{"all_pass", r.all_pass()},
            {"checks", checks},
            {"residual_blackbox", r.residual_blackbox},
            {"residual_spectral", r.residual_spectral},
            {"initial_condition", {{"times", r.ic_times}, {"errors", r.ic_errors}}},
            {"uniqueness_residuals", r.uniqueness_residuals},
            {"tail",
             {{"cutoff", r.tail.cutoff},
              {"doubled_cutoff", r.tail.doubled_cutoff},
              {"epsilon", r.tail.epsilon},
              {"tau", r.tail.tau},
              {"times", r.tail.times},
              {"measured_gap", r.tail.measured_gap},
              {"triangle_bound", r.tail.triangle_bound},
              {"surrogate", r.tail.surrogate}}},
            {"stability", {{"times", r.stability_times}, {"sup", r.stability_sup}}}};
}

inline int cmd_verify(const RunConfig& c, const std::filesystem::path& out_dir, std::ostream& out, Verbosity v) {
    const auto start = detail::Clock::now();
    const auto spec = build_problem(c);
    const auto opts = build_options(c);
    const auto field = solver::solve(spec, opts);
    const auto report = solver::verify(field, spec, c.verify, opts);
    const double elapsed = detail::elapsed_ms(start);

    std::filesystem::create_directories(out_dir);
    json doc{{"command", "verify"},
             {"versions", detail::versions()},
             {"settings", effective_json(c)},
             {"report", report_json(report)},
             {"warnings", field.warnings()},
             {"timings_ms", {{"total", elapsed}}}};
    detail::write_file(out_dir / "report.json", doc.dump(2) + "\n");

    if (v != Verbosity::quiet) {
        for (const auto& ch : report.checks) {
            out << std::left << std::setw(24) << ch.name << (ch.pass ? "PASS" : "FAIL") << "  measured "
                << format_double(ch.measured) << "  tolerance " << (ch.tolerance > 0.0 ? format_double(ch.tolerance) : "-") << "\n";
        }
        for (const auto& w : field.warnings()) out << "warning: " << w << "\n";
        if (v == Verbosity::verbose) out << "time: " << format_double(elapsed) << " ms\n";
    }
    return report.all_pass() ? ok : verification_failed;
}

inline int cmd_norms(const RunConfig& c, std::ostream& out) {
    const auto spec = build_problem(c);
    const auto& basis = spec.basis;
    const auto g = solver::coefficients_of(spec.initial, basis);
    const double tau = c.norms_tau.value_or(solver::detail::default_tau(basis));

    out << "sobolev\n";
    for (const double a : c.sobolev_orders) out << "  a=" << format_double(a) << " " << format_double(bases::sobolev_norm(g, a)) << "\n";

    const auto m = bases::domain_membership(g, tau);
    out << "membership tau=" << format_double(tau) << "\n"
        << "  sum " << format_double(m.sum) << "\n"
        << "  threshold " << format_double(m.threshold) << "\n"
        << "  hypothesis " << (m.hypothesis_holds ? "holds" : "fails") << "\n"
        << "  last_shell_mass " << format_double(m.last_shell_mass) << "\n"
        << "  last_shell_nondecreasing " << (m.last_shell_nondecreasing ? "yes" : "no") << "\n"
        << "  note " << m.note << "\n";

    const auto sym = basis.symbol() ? *basis.symbol() : bases::EllipticSymbol::laplacian(1);
    out << "equivalence tau=" << format_double(tau) << "\n";
    for (const auto& e : bases::equivalence_constants_sequence(sym, tau, c.equivalence_cutoffs)) {
        out << "  K=" << e.cutoff << " c1 " << format_double(e.c1) << " c2 " << format_double(e.c2) << "\n";
    }

    if (c.random_checks > 0) {
        const auto e = bases::equivalence_constants(sym, tau, basis.cutoff());
        std::mt19937_64 rng(c.seed);
        std::normal_distribution<double> normal;
        int held = 0;
        for (int i = 0; i < c.random_checks; ++i) {
            auto r = basis.zeros();
            for (auto& val : r.values) val = {normal(rng), normal(rng)};
            const double graph = bases::graph_norm_squared(r, tau);
            const double sob = std::pow(bases::sobolev_norm(r, tau * sym.order()), 2.0);
            const double slack = 1e-12 * graph;
            if (e.c1 * sob <= graph + slack && graph <= e.c2 * sob + slack) ++held;
        }
        out << "sandwich seed=" << c.seed << " held " << held << "/" << c.random_checks << "\n";
    }
    return ok;
}

/// Entry point shared by the executable and the tests.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Spectral solver kit for the time-fractional subdiffusion equation"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(subfrac::version));

    double rho = 1.0, mu = 1.0;
    std::vector<double> zs;
    auto* ml = app.add_subcommand("ml", "Evaluate E_{rho,mu}(z) for a list of z");
    ml->add_option("rho", rho, "order rho")->required();
    ml->add_option("mu", mu, "parameter mu")->required();
    ml->add_option("z", zs, "arguments")->required();

    std::string config_path;
    std::string out_dir = ".";
    Overrides ov;
    bool quiet = false, verbose = false;
    auto common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "configuration file (JSON)")->required();
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--cutoff", ov.cutoff, "frequency cutoff K");
        sub->add_option("--mesh", ov.mesh, "time mesh intervals for verification");
        sub->add_option("--tol", ov.tol, "black-box residual tolerance");
        sub->add_option("--probe-times", ov.probe_times, "comma-separated output and probe times");
        sub->add_option("--threads", ov.threads, "worker threads (default SUBFRAC_THREADS or all cores)");
        sub->add_option("--seed", ov.seed, "seed for randomized checks");
        sub->add_flag("--quiet", quiet, "print nothing on success");
        sub->add_flag("--verbose", verbose, "print timings");
    };
    auto* solve = app.add_subcommand("solve", "Solve and write slices, coefficients and a manifest");
    auto* verify = app.add_subcommand("verify", "Solve, run the verification suite and write report.json");
    auto* norms = app.add_subcommand("norms", "Sobolev norms, membership and equivalence constants of the initial data");
    common(solve);
    common(verify);
    common(norms);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? ok : usage_error;
    }
    const Verbosity v = quiet ? Verbosity::quiet : (verbose ? Verbosity::verbose : Verbosity::normal);

    try {
        if (ml->parsed()) return cmd_ml(rho, mu, zs, out);
        auto cfg = load_config(config_path);
        apply_overrides(cfg, ov);
        if (solve->parsed()) return cmd_solve(cfg, out_dir, out, v);
        if (verify->parsed()) return cmd_verify(cfg, out_dir, out, v);
        return cmd_norms(cfg, out);
    } catch (const AccuracyError& e) {
        err << "accuracy error: " << e.what() << "\n";
        return numeric_error;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return usage_error;
    } catch (const DomainError& e) {
        err << "domain error: " << e.what() << "\n";
        return usage_error;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "file error: " << e.what() << "\n";
        return usage_error;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return numeric_error;
    }
}

}  // namespace subfrac::cli
