#pragma once

// Series solution u(x,t) = sum_n T_n(t) v_n(x) of
//
//   d^rho u/dt^rho + A u = f,   t^(1-rho) u(x,t) -> phi(x) / Gamma(rho) as t -> 0+,
//
// over a spectral basis, plus the verification suite that checks the result
// against independent routes (numerical fractional derivative, closed-form
// mode identities, quadrature projections, cutoff doubling).

#include "subfrac/bases.hpp"
#include "subfrac/errors.hpp"
#include "subfrac/fractional_calculus.hpp"
#include "subfrac/spectral_core.hpp"
#include "subfrac/special_functions.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <exception>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <variant>
#include <vector>

namespace subfrac::solver {

using bases::Complex;
using bases::MultiIndex;

using SpatialFunction = std::function<double(const std::vector<double>&)>;
using CoefficientGenerator = std::function<Complex(const MultiIndex&)>;

/// Values on the basis grid (see SpectralBasis::grid_coordinate).
struct GridValues {
    std::vector<double> values;
};

/// Identically zero spatial data.
struct ZeroData {};

using SpatialData = std::variant<ZeroData, SpatialFunction, GridValues, bases::CoefficientVector, CoefficientGenerator>;

/// Time profile sigma(t) of separable forcing: a constant, a function, or samples.
using TimeProfile = std::variant<double, std::function<double(double)>, spectral::SampledForcing>;

/// f(x,t) = sigma(t) g(x).
struct SeparableForcing {
    TimeProfile sigma = 1.0;
    SpatialData g = ZeroData{};
};

/// f on mesh x grid: slices[i] holds grid values at time mesh[i].
struct SpaceTimeSamples {
    fractional::TimeMesh mesh;
    std::vector<std::vector<double>> slices;
};

/// f given by its coefficients at each mesh node; modes absent from a slice's basis are zero.
struct SampledCoefficients {
    fractional::TimeMesh mesh;
    std::vector<bases::CoefficientVector> slices;
};

struct NoForcing {};

using ForcingSpec = std::variant<NoForcing, SeparableForcing, SpaceTimeSamples, SampledCoefficients>;

struct ProblemSpec {
    bases::SpectralBasis basis;
    double rho = 1.0;
    SpatialData initial = ZeroData{};
    ForcingSpec forcing = NoForcing{};
    double horizon = 1.0;
};

/// Replaces the eigenvalue used for one mode: lambda -> lambda * (1 + relative_shift).
/// Used to check that verification detects a wrong field.
struct Fault {
    MultiIndex mode;
    double relative_shift = 0.1;
};

struct SolveOptions {
    unsigned threads = 0;  // 0: SUBFRAC_THREADS, else hardware concurrency
    spectral::DuhamelOptions duhamel;
    std::optional<double> membership_tau;  // default (N/2 + 1/2) / m
    std::optional<Fault> fault;
};

namespace detail {

inline unsigned resolve_threads(unsigned requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("SUBFRAC_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs fn(i) for i in [0, n) on up to threads workers; rethrows the first exception.
template <class F>
void parallel_for(std::size_t n, unsigned threads, F&& fn) {
    threads = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, threads), std::max<std::size_t>(n, 1)));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                    next = n;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace detail

/// Coefficients of spatial data on basis. Coefficient vectors from another
/// basis of the same kind are matched by lattice index; missing modes are zero.
inline bases::CoefficientVector coefficients_of(const SpatialData& data, const bases::SpectralBasis& basis) {
    return std::visit(
        [&](const auto& d) -> bases::CoefficientVector {
            using D = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<D, ZeroData>) {
                return basis.zeros();
            } else if constexpr (std::is_same_v<D, SpatialFunction>) {
                return basis.analyze_function(d);
            } else if constexpr (std::is_same_v<D, GridValues>) {
                return basis.analyze(d.values);
            } else if constexpr (std::is_same_v<D, bases::CoefficientVector>) {
                if (!d.basis) throw ConfigError("coefficient vector carries no basis");
                if (d.basis->kind != basis.kind() || d.basis->dimension != basis.dimension()) {
                    throw ConfigError("coefficient vector belongs to an incompatible basis");
                }
                auto out = basis.zeros();
                for (std::size_t q = 0; q < d.values.size(); ++q) {
                    if (const auto p = basis.find(d.basis->modes[q].index)) out.values[*p] = d.values[q];
                }
                return out;
            } else {
                auto out = basis.zeros();
                for (std::size_t q = 0; q < basis.mode_count(); ++q) out.values[q] = d(basis.modes()[q].index);
                return out;
            }
        },
        data);
}

inline bool is_zero(const SpatialData& d) { return std::holds_alternative<ZeroData>(d); }

/// The truncated series u(x,t) = sum_n T_n(t) v_n(x). Immutable after solve.
class SolutionField {
public:
    /// Eigenvalue group: all modes with the same lambda share their time functions.
    struct Group {
        double lambda = 0.0;
        spectral::ModeSolution homogeneous;           // phi = 1, no forcing
        std::optional<spectral::ModeSolution> forced;  // phi = 0, forcing sigma
    };

    struct Mode {
        bases::Eigenpair pair;
        std::size_t group = 0;
        Complex phi = 0.0;
        Complex forcing_amplitude = 0.0;     // separable forcing coefficient g_n
        std::vector<Complex> forcing_samples;  // f_n at the nodes of forcing_mesh(), space-time forcing only
    };

    const bases::SpectralBasis& basis() const { return basis_; }
    double rho() const { return rho_; }
    double horizon() const { return horizon_; }
    const std::vector<Group>& groups() const { return groups_; }
    const std::vector<Mode>& modes() const { return modes_; }
    const bases::CoefficientVector& initial_coefficients() const { return phi_; }
    const bases::MembershipReport& membership() const { return membership_; }
    const std::vector<std::string>& warnings() const { return warnings_; }
    unsigned threads() const { return threads_; }
    const std::optional<fractional::TimeMesh>& forcing_mesh() const { return forcing_mesh_; }

    /// T_n(t) for every mode, ordered like basis().modes().
    bases::CoefficientVector coefficients(double t) const { return mode_values(t, false); }

    /// t^(1-rho) T_n(t) for every mode.
    bases::CoefficientVector weighted_coefficients(double t) const { return mode_values(t, true); }

    double evaluate(const std::vector<double>& x, double t) const {
        check_time(t);
        return basis_.evaluate(coefficients(t), x);
    }

    /// t^(1-rho) u(x,t); tends to phi(x)/Gamma(rho) as t -> 0+.
    double weighted_evaluate(const std::vector<double>& x, double t) const {
        if (!(t > 0.0)) throw DomainError("weighted_evaluate: t must be positive");
        return basis_.evaluate(weighted_coefficients(t), x);
    }

    /// u(., t) on the basis grid.
    bases::GridSamples slice(double t) const {
        check_time(t);
        return basis_.synthesize(coefficients(t));
    }

private:
    friend SolutionField solve(const ProblemSpec&, const SolveOptions&);

    SolutionField(bases::SpectralBasis basis, double rho, double horizon)
        : basis_(std::move(basis)), rho_(rho), horizon_(horizon) {}

    void check_time(double t) const {
        if (!(t > 0.0)) throw DomainError("solution field: t must be positive (use weighted_evaluate near 0)");
        if (t > horizon_ * (1.0 + 1e-12)) throw DomainError("solution field: t exceeds the horizon");
    }

    bases::CoefficientVector mode_values(double t, bool weighted) const {
        if (!(t > 0.0)) throw DomainError("solution field: t must be positive");
        std::vector<double> h(groups_.size()), f(groups_.size(), 0.0);
        std::vector<std::vector<double>> w(forcing_mesh_ ? groups_.size() : 0);
        detail::parallel_for(groups_.size(), threads_, [&](std::size_t i) {
            const auto& g = groups_[i];
            h[i] = weighted ? g.homogeneous.weighted(t) : g.homogeneous(t);
            if (g.forced) f[i] = weighted ? g.forced->weighted(t) : (*g.forced)(t);
            if (forcing_mesh_) w[i] = spectral::detail::sampled_weights(*forcing_mesh_, rho_, g.lambda, t);
        });
        const double scale = weighted ? std::pow(t, 1.0 - rho_) : 1.0;
        auto out = basis_.zeros();
        for (std::size_t q = 0; q < modes_.size(); ++q) {
            const auto& m = modes_[q];
            Complex v = m.phi * h[m.group] + m.forcing_amplitude * f[m.group];
            if (!m.forcing_samples.empty()) {
                const auto& wg = w[m.group];
                Complex d = 0.0;
                for (std::size_t j = 0; j < wg.size(); ++j) d += wg[j] * m.forcing_samples[j];
                v += scale * d;
            }
            out.values[q] = v;
        }
        return out;
    }

    bases::SpectralBasis basis_;
    double rho_;
    double horizon_;
    std::vector<Group> groups_;
    std::vector<Mode> modes_;
    bases::CoefficientVector phi_;
    bases::MembershipReport membership_;
    std::vector<std::string> warnings_;
    std::optional<fractional::TimeMesh> forcing_mesh_;
    unsigned threads_ = 1;
};

namespace detail {

inline spectral::Forcing time_forcing(const TimeProfile& sigma) {
    return std::visit(
        [](const auto& s) -> spectral::Forcing {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, double>) {
                return spectral::ConstantForcing{s};
            } else if constexpr (std::is_same_v<S, std::function<double(double)>>) {
                return spectral::FunctionForcing{s};
            } else {
                return s;
            }
        },
        sigma);
}

inline double default_tau(const bases::SpectralBasis& b) {
    return (0.5 * b.dimension() + 0.5) / b.order();
}

}  // namespace detail

inline void validate(const ProblemSpec& spec) {
    special::detail::check_order(spec.rho);
    if (!(spec.horizon > 0.0) || !std::isfinite(spec.horizon)) throw ConfigError("problem: horizon must be positive");
    auto check_sampled = [&](const fractional::TimeMesh& mesh, std::size_t slices) {
        if (slices != mesh.size()) throw ConfigError("space-time forcing: one slice per mesh node");
        if (mesh.horizon() < spec.horizon * (1.0 - 1e-14)) {
            throw ConfigError("space-time forcing: samples do not cover the horizon");
        }
    };
    if (const auto* st = std::get_if<SpaceTimeSamples>(&spec.forcing)) check_sampled(st->mesh, st->slices.size());
    if (const auto* sc = std::get_if<SampledCoefficients>(&spec.forcing)) check_sampled(sc->mesh, sc->slices.size());
    if (const auto* sf = std::get_if<SeparableForcing>(&spec.forcing)) {
        if (const auto* s = std::get_if<spectral::SampledForcing>(&sf->sigma)) {
            if (s->mesh.horizon() < spec.horizon * (1.0 - 1e-14)) {
                throw ConfigError("forcing time samples do not cover the horizon");
            }
        }
    }
}

namespace detail {

/// Sampled space-time forcing as coefficients on spec.basis, if the spec has one.
inline std::optional<SampledCoefficients> sampled_forcing(const ProblemSpec& spec, unsigned threads) {
    if (const auto* st = std::get_if<SpaceTimeSamples>(&spec.forcing)) {
        SampledCoefficients out{st->mesh, std::vector<bases::CoefficientVector>(st->slices.size())};
        parallel_for(st->slices.size(), threads, [&](std::size_t i) { out.slices[i] = spec.basis.analyze(st->slices[i]); });
        return out;
    }
    if (const auto* sc = std::get_if<SampledCoefficients>(&spec.forcing)) {
        SampledCoefficients out{sc->mesh, {}};
        for (const auto& c : sc->slices) out.slices.push_back(coefficients_of(c, spec.basis));
        return out;
    }
    return std::nullopt;
}

}  // namespace detail

/// Builds the per-mode solutions. Modes sharing an eigenvalue share their time functions.
inline SolutionField solve(const ProblemSpec& spec, const SolveOptions& opt = {}) {
    validate(spec);
    SolutionField field(spec.basis, spec.rho, spec.horizon);
    field.threads_ = detail::resolve_threads(opt.threads);
    const auto& basis = spec.basis;
    const std::size_t n = basis.mode_count();

    field.phi_ = coefficients_of(spec.initial, basis);
    const double tau = opt.membership_tau.value_or(detail::default_tau(basis));
    field.membership_ = bases::domain_membership(field.phi_, tau);
    if (!field.membership_.hypothesis_holds) field.warnings_.push_back("membership: " + field.membership_.note);
    if (field.membership_.last_shell_nondecreasing) {
        field.warnings_.push_back("membership: last-shell mass is not decreasing; initial data may lie outside D(A^tau)");
    }

    std::optional<std::size_t> faulty;
    if (opt.fault) {
        faulty = basis.find(opt.fault->mode);
        if (!faulty) throw ConfigError("fault: mode is not enumerated by the basis");
    }

    std::optional<spectral::Forcing> sigma;
    bases::CoefficientVector amp = basis.zeros();
    if (const auto* sf = std::get_if<SeparableForcing>(&spec.forcing)) {
        if (!is_zero(sf->g)) {
            sigma = detail::time_forcing(sf->sigma);
            amp = coefficients_of(sf->g, basis);
        }
    }

    // Group by eigenvalue (after any fault), keeping first-seen order.
    std::map<double, std::size_t> index;
    std::vector<double> lambdas;
    field.modes_.resize(n);
    for (std::size_t q = 0; q < n; ++q) {
        auto& m = field.modes_[q];
        m.pair = basis.modes()[q];
        if (faulty && *faulty == q) m.pair.lambda *= 1.0 + opt.fault->relative_shift;
        const auto [it, inserted] = index.emplace(m.pair.lambda, lambdas.size());
        if (inserted) lambdas.push_back(m.pair.lambda);
        m.group = it->second;
        m.phi = field.phi_.values[q];
        m.forcing_amplitude = amp.values[q];
    }

    std::vector<std::optional<SolutionField::Group>> groups(lambdas.size());
    detail::parallel_for(lambdas.size(), field.threads_, [&](std::size_t i) {
        const double lam = lambdas[i];
        SolutionField::Group g{lam, spectral::ModeSolution({lam, 1.0, spectral::ZeroForcing{}}, spec.rho, opt.duhamel),
                               std::nullopt};
        if (sigma) g.forced.emplace(spectral::ModeProblem{lam, 0.0, *sigma}, spec.rho, opt.duhamel);
        groups[i] = std::move(g);
    });
    field.groups_.reserve(groups.size());
    for (auto& g : groups) field.groups_.push_back(std::move(*g));

    if (const auto sampled = detail::sampled_forcing(spec, field.threads_)) {
        field.forcing_mesh_ = sampled->mesh;
        for (std::size_t q = 0; q < n; ++q) {
            std::vector<Complex> f(sampled->mesh.size());
            bool any = false;
            for (std::size_t i = 0; i < f.size(); ++i) {
                f[i] = sampled->slices[i].values[q];
                any = any || f[i] != 0.0;
            }
            if (any) field.modes_[q].forcing_samples = std::move(f);
        }
    }
    return field;
}

/// Forcing f_n(t) for mode position q of the truncated problem.
inline Complex forcing_coefficient(const SolutionField& field, std::size_t q, double t) {
    const auto& m = field.modes()[q];
    Complex v = 0.0;
    const auto& g = field.groups()[m.group];
    if (g.forced) v += m.forcing_amplitude * spectral::forcing_value(g.forced->problem().forcing, t);
    if (!m.forcing_samples.empty()) {
        const auto& s = field.forcing_mesh()->nodes();
        const auto it = std::lower_bound(s.begin(), s.end(), t);
        const std::size_t j = static_cast<std::size_t>(it - s.begin());
        if (j == s.size()) {
            v += m.forcing_samples.back();
        } else if (s[j] == t || j == 0) {
            v += m.forcing_samples[j];
        } else {
            const double a = (t - s[j - 1]) / (s[j] - s[j - 1]);
            v += (1.0 - a) * m.forcing_samples[j - 1] + a * m.forcing_samples[j];
        }
    }
    return v;
}

// ---------------------------------------------------------------------------
// Verification

struct Check {
    std::string name;
    double measured = 0.0;
    double tolerance = 0.0;
    bool pass = true;
    std::string note;
};

struct TailReport {
    int cutoff = 0;
    int doubled_cutoff = 0;
    std::vector<double> times;
    std::vector<double> measured_gap;    // sup_x |u_2K - u_K| at each time
    std::vector<double> triangle_bound;  // sum over tail modes of |T_n(t)| sup|v_n|
    std::vector<double> surrogate;       // t^(2(eps-1)) sum_tail lambda^(2 tau) |phi_n|^2
    double epsilon = 0.0;
    double tau = 0.0;
};

struct VerificationReport {
    std::vector<Check> checks;
    double residual_blackbox = 0.0;  // relative
    double residual_spectral = 0.0;  // relative
    std::vector<double> ic_times;
    std::vector<double> ic_errors;
    std::vector<double> uniqueness_residuals;  // per mode, max over probe times
    TailReport tail;
    std::vector<double> stability_times;
    std::vector<double> stability_sup;

    bool all_pass() const {
        return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
    }
};

struct VerifySettings {
    int probe_points = 17;                  // per spatial axis
    int probe_times = 8;                    // log-spaced in [probe_time_min * T, T]
    double probe_time_min = 1e-3;
    std::vector<double> explicit_times;     // overrides the log-spaced times when non-empty
    int mesh_intervals = fractional::default_intervals;
    std::optional<double> grading;          // default fractional::default_grading(rho)
    double residual_window = spectral::residual_window_start;
    double tol_residual_blackbox = 5e-6;
    double tol_residual_spectral = 1e-10;
    std::vector<double> ic_fractions{1e-3, 1e-4, 1e-5};
    std::optional<double> tol_initial;      // bound on the error at the smallest probe, if any
    double tol_uniqueness = 1e-9;
    std::optional<double> epsilon;          // default rho / 2
    std::optional<double> tau;              // default as in solve
    bool tail_check = true;
    bool blackbox = true;
};

namespace detail {

inline std::vector<double> probe_times(const VerifySettings& s, double horizon) {
    if (!s.explicit_times.empty()) return s.explicit_times;
    std::vector<double> t(static_cast<std::size_t>(s.probe_times));
    const int n = s.probe_times;
    for (int i = 0; i < n; ++i) {
        const double e = n == 1 ? 0.0 : std::log10(s.probe_time_min) * (1.0 - static_cast<double>(i) / (n - 1));
        t[static_cast<std::size_t>(i)] = horizon * std::pow(10.0, e);
    }
    t.back() = horizon;
    return t;
}

// Probe points: torus 2 pi j / P, interval pi j / (P - 1) (both endpoints), j per axis.
inline std::vector<std::vector<double>> probe_points(const bases::SpectralBasis& b, int per_axis) {
    const int N = b.dimension();
    std::vector<std::vector<double>> pts;
    const bool torus = b.kind() == bases::BasisKind::torus;
    const double h = torus ? 2.0 * bases::pi / per_axis : bases::pi / (per_axis - 1);
    std::vector<int> j(N, 0);
    for (;;) {
        std::vector<double> x(N);
        for (int a = 0; a < N; ++a) x[a] = h * j[a];
        pts.push_back(std::move(x));
        int a = N - 1;
        while (a >= 0 && j[a] == per_axis - 1) j[a--] = 0;
        if (a < 0) break;
        ++j[a];
    }
    return pts;
}

// Table of v_q(x_p), row per point.
inline std::vector<std::vector<Complex>> eigen_table(const bases::SpectralBasis& b,
                                                     const std::vector<std::vector<double>>& pts) {
    std::vector<std::vector<Complex>> tab(pts.size(), std::vector<Complex>(b.mode_count()));
    for (std::size_t p = 0; p < pts.size(); ++p) {
        for (std::size_t q = 0; q < b.mode_count(); ++q) tab[p][q] = b.eigenfunction(q, pts[p]);
    }
    return tab;
}

inline double series_at(const std::vector<Complex>& row, const std::vector<Complex>& c) {
    Complex s = 0.0;
    for (std::size_t q = 0; q < c.size(); ++q) s += c[q] * row[q];
    return s.real();
}

inline double sup_eigenfunction(const bases::SpectralBasis& b) {
    return b.kind() == bases::BasisKind::torus ? std::pow(2.0 * bases::pi, -0.5 * b.dimension())
                                               : std::sqrt(2.0 / bases::pi);
}

// Quadrature inner product (u, v_q) from grid samples: trapezoid on the torus,
// composite Simpson on the interval.
inline Complex project(const bases::SpectralBasis& b, const std::vector<double>& u, std::size_t q) {
    Complex s = 0.0;
    const std::size_t total = b.grid_points();
    if (b.kind() == bases::BasisKind::torus) {
        for (std::size_t i = 0; i < total; ++i) s += u[i] * std::conj(b.eigenfunction(q, b.grid_coordinate(i)));
        return s * std::pow(b.grid_step(), b.dimension());
    }
    const std::size_t G = total - 1;
    for (std::size_t i = 0; i <= G; ++i) {
        const double w = (i == 0 || i == G) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        s += w * u[i] * b.eigenfunction(q, b.grid_coordinate(i));
    }
    return s * (b.grid_step() / 3.0);
}

// Exact residual of the mode equation for unit time functions, from the identities
//   D^rho [t^(rho-1) E_{rho,rho}(-l t^rho)] = t^-1 E_{rho,0}(-l t^rho),
//   D^rho [t^rho E_{rho,rho+1}(-l t^rho)]   = E_{rho,1}(-l t^rho).
// lambda_used is the eigenvalue inside the time function, lambda_true the one in the equation.
inline double homogeneous_identity_residual(double rho, double lambda_used, double lambda_true, double t) {
    const double z = -lambda_used * std::pow(t, rho);
    const double d = lambda_used == 0.0 ? 0.0 : special::ml({rho, 0.0}, z).value / t;
    return d + lambda_true * special::ml_kernel(rho, lambda_used, t);
}

inline double constant_identity_residual(double rho, double lambda_used, double lambda_true, double t) {
    const double z = -lambda_used * std::pow(t, rho);
    const double d = lambda_used == 0.0 ? 1.0 : special::ml({rho, 1.0}, z).value;
    return d + lambda_true * special::ml_kernel_antiderivative(rho, lambda_used, t) - 1.0;
}

inline double field_sup(const SolutionField& f, const std::vector<std::vector<Complex>>& tab,
                        const std::vector<double>& times) {
    double m = 0.0;
    for (const double t : times) {
        const auto c = f.coefficients(t).values;
        for (const auto& row : tab) m = std::max(m, std::abs(series_at(row, c)));
    }
    return m;
}

}  // namespace detail

/// Runs every diagnostic; each entry records its tolerance and verdict.
inline VerificationReport verify(const SolutionField& field, const ProblemSpec& spec, const VerifySettings& s = {},
                                 const SolveOptions& solve_options = {}) {
    VerificationReport rep;
    const auto& basis = field.basis();
    const double rho = field.rho();
    const double T = field.horizon();
    const auto times = detail::probe_times(s, T);
    const auto pts = detail::probe_points(basis, s.probe_points);
    const auto tab = detail::eigen_table(basis, pts);
    const std::size_t nm = basis.mode_count();
    const unsigned threads = field.threads();

    // The true eigenvalues come from the problem's basis, not from the field.
    auto true_lambda = [&](std::size_t q) { return spec.basis.modes()[q].lambda; };

    // (a) black-box residual: D^rho of sampled u against A u - f.
    if (s.blackbox) {
        const auto mesh =
            fractional::TimeMesh::graded(T, s.mesh_intervals, s.grading.value_or(fractional::default_grading(rho)));
        const fractional::RLDerivative deriv(mesh, rho - 1.0, rho);
        const std::size_t nt = mesh.size();
        std::vector<std::vector<Complex>> wc(nt);  // weighted coefficients per node
        detail::parallel_for(nt, threads, [&](std::size_t i) {
            wc[i] = i == 0 ? std::vector<Complex>() : field.weighted_coefficients(mesh[i]).values;
        });
        // t -> 0+ limit of the weighted coefficients: phi_n / Gamma(rho)
        wc[0].resize(nm);
        for (std::size_t q = 0; q < nm; ++q) wc[0][q] = field.modes()[q].phi * special::rgamma(rho);

        auto samples_at = [&](std::size_t p) {
            std::vector<double> g(nt);
            for (std::size_t i = 0; i < nt; ++i) g[i] = detail::series_at(tab[p], wc[i]);
            return g;
        };
        // A u and f in coefficient space at the derivative nodes inside the window.
        const auto nodes = deriv.apply(samples_at(0)).t;
        std::vector<std::size_t> keep;
        for (std::size_t k = 0; k < nodes.size(); ++k) {
            if (nodes[k] >= s.residual_window * T) keep.push_back(k);
        }
        std::vector<std::vector<Complex>> ac(keep.size()), fc(keep.size());
        detail::parallel_for(keep.size(), threads, [&](std::size_t i) {
            const double t = nodes[keep[i]];
            const auto c = field.coefficients(t).values;
            ac[i].resize(nm);
            fc[i].resize(nm);
            for (std::size_t q = 0; q < nm; ++q) {
                ac[i][q] = true_lambda(q) * c[q];
                fc[i][q] = forcing_coefficient(field, q, t);
            }
        });

        std::vector<double> res(pts.size(), 0.0), scale_au(pts.size(), 0.0), scale_f(pts.size(), 0.0);
        detail::parallel_for(pts.size(), threads, [&](std::size_t p) {
            const auto d = deriv.apply(samples_at(p));
            for (std::size_t i = 0; i < keep.size(); ++i) {
                const double au = detail::series_at(tab[p], ac[i]);
                const double f = detail::series_at(tab[p], fc[i]);
                res[p] = std::max(res[p], std::abs(d.value[keep[i]] + au - f));
                scale_au[p] = std::max(scale_au[p], std::abs(au));
                scale_f[p] = std::max(scale_f[p], std::abs(f));
            }
        });
        const double r = *std::max_element(res.begin(), res.end());
        const double sc = *std::max_element(scale_au.begin(), scale_au.end()) +
                          *std::max_element(scale_f.begin(), scale_f.end());
        rep.residual_blackbox = sc > 0.0 ? r / sc : r;
        rep.checks.push_back({"residual_blackbox", rep.residual_blackbox, s.tol_residual_blackbox,
                              rep.residual_blackbox <= s.tol_residual_blackbox,
                              "sup |D^rho u + A u - f| / (sup|A u| + sup|f|) on t >= window * T"});
    }

    // (a) spectral residual: closed-form mode identities.
    {
        double r = 0.0, sc = 0.0;
        bool closed_form = true;
        for (const double t : times) {
            const auto c = field.coefficients(t).values;
            std::vector<double> rh(field.groups().size()), rf(field.groups().size(), 0.0);
            for (std::size_t gi = 0; gi < field.groups().size(); ++gi) rh[gi] = std::numeric_limits<double>::quiet_NaN();
            for (std::size_t q = 0; q < nm; ++q) {
                const auto& m = field.modes()[q];
                const auto& g = field.groups()[m.group];
                const double lt = true_lambda(q);
                double res_q = 0.0;
                if (m.phi != 0.0) res_q += std::abs(m.phi) * std::abs(detail::homogeneous_identity_residual(rho, g.lambda, lt, t));
                if (g.forced && m.forcing_amplitude != 0.0) {
                    const auto* cf = std::get_if<spectral::ConstantForcing>(&g.forced->problem().forcing);
                    if (cf) {
                        res_q += std::abs(m.forcing_amplitude * cf->c) *
                                 std::abs(detail::constant_identity_residual(rho, g.lambda, lt, t));
                    } else {
                        closed_form = false;
                    }
                }
                if (!m.forcing_samples.empty()) closed_form = false;
                r = std::max(r, res_q);
                sc = std::max(sc, lt * std::abs(c[q]) + std::abs(forcing_coefficient(field, q, t)));
            }
        }
        rep.residual_spectral = sc > 0.0 ? r / sc : r;
        rep.checks.push_back({"residual_spectral", rep.residual_spectral, s.tol_residual_spectral,
                              rep.residual_spectral <= s.tol_residual_spectral,
                              closed_form ? "closed-form mode identities"
                                          : "closed-form identities cover the homogeneous and constant-forcing parts only"});
    }

    // (b) initial condition: sup_x |t^(1-rho) u - phi_K / Gamma(rho)|.
    {
        const auto& phi = field.initial_coefficients().values;
        std::vector<Complex> target(nm);
        for (std::size_t q = 0; q < nm; ++q) target[q] = phi[q] * special::rgamma(rho);
        bool decreasing = true;
        for (const double frac : s.ic_fractions) {
            const double t = frac * T;
            const auto w = field.weighted_coefficients(t).values;
            std::vector<Complex> diff(nm);
            for (std::size_t q = 0; q < nm; ++q) diff[q] = w[q] - target[q];
            double e = 0.0;
            for (const auto& row : tab) e = std::max(e, std::abs(detail::series_at(row, diff)));
            if (!rep.ic_errors.empty() && !(e < rep.ic_errors.back() || (e == 0.0 && rep.ic_errors.back() == 0.0))) {
                decreasing = false;
            }
            rep.ic_times.push_back(t);
            rep.ic_errors.push_back(e);
        }
        const double last = rep.ic_errors.empty() ? 0.0 : rep.ic_errors.back();
        const bool bounded = !s.tol_initial || last <= *s.tol_initial;
        rep.checks.push_back({"initial_condition", last, s.tol_initial.value_or(0.0), decreasing && bounded,
                              decreasing ? "errors decrease toward t = 0" : "errors do not decrease toward t = 0"});
    }

    // (c) uniqueness probe: quadrature projections of u(., t) against independently solved modes.
    {
        rep.uniqueness_residuals.assign(nm, 0.0);
        const auto phi_spec = coefficients_of(spec.initial, spec.basis);
        bases::CoefficientVector amp = spec.basis.zeros();
        std::optional<spectral::Forcing> sigma;
        if (const auto* sf = std::get_if<SeparableForcing>(&spec.forcing)) {
            if (!is_zero(sf->g)) {
                sigma = detail::time_forcing(sf->sigma);
                amp = coefficients_of(sf->g, spec.basis);
            }
        }
        const auto st = detail::sampled_forcing(spec, threads);
        std::vector<std::vector<double>> slices;
        for (const double t : times) slices.push_back(field.slice(t).values);
        detail::parallel_for(nm, threads, [&](std::size_t q) {
            const double lam = true_lambda(q);
            const spectral::ModeSolution h({lam, 1.0, spectral::ZeroForcing{}}, rho, solve_options.duhamel);
            std::optional<spectral::ModeSolution> fsol;
            if (sigma) fsol.emplace(spectral::ModeProblem{lam, 0.0, *sigma}, rho, solve_options.duhamel);
            std::optional<spectral::ModeSolution> sre, sim;
            if (st) {
                std::vector<double> re(st->mesh.size()), im(st->mesh.size());
                for (std::size_t i = 0; i < st->mesh.size(); ++i) {
                    re[i] = st->slices[i].values[q].real();
                    im[i] = st->slices[i].values[q].imag();
                }
                sre.emplace(spectral::ModeProblem{lam, 0.0, spectral::SampledForcing{st->mesh, re}}, rho);
                sim.emplace(spectral::ModeProblem{lam, 0.0, spectral::SampledForcing{st->mesh, im}}, rho);
            }
            double worst = 0.0;
            for (std::size_t k = 0; k < times.size(); ++k) {
                const double t = times[k];
                Complex Tq = phi_spec.values[q] * h(t);
                if (fsol) Tq += amp.values[q] * (*fsol)(t);
                if (sre) Tq += Complex((*sre)(t), (*sim)(t));
                const Complex w = detail::project(basis, slices[k], q);
                worst = std::max(worst, std::abs(w - Tq) / std::max(1.0, std::abs(Tq)));
            }
            rep.uniqueness_residuals[q] = worst;
        });
        const double worst = rep.uniqueness_residuals.empty()
                                 ? 0.0
                                 : *std::max_element(rep.uniqueness_residuals.begin(), rep.uniqueness_residuals.end());
        rep.checks.push_back({"uniqueness_projection", worst, s.tol_uniqueness, worst <= s.tol_uniqueness,
                              "max_k |w_k - T_k| / max(1, |T_k|) over probe times"});
    }

    // (d) truncation tail: cutoff K against 2K, gap taken in coefficient space.
    if (s.tail_check) {
        auto& tr = rep.tail;
        tr.cutoff = basis.cutoff();
        tr.doubled_cutoff = 2 * basis.cutoff();
        tr.epsilon = s.epsilon.value_or(rho / 2.0);
        tr.tau = s.tau.value_or(detail::default_tau(basis));
        ProblemSpec big = spec;
        if (basis.kind() == bases::BasisKind::torus) {
            big.basis = bases::SpectralBasis::torus(*basis.symbol(), tr.doubled_cutoff);
        } else {
            big.basis = bases::SpectralBasis::dirichlet_sine(tr.doubled_cutoff);
        }
        if (const auto* gv = std::get_if<GridValues>(&spec.initial)) {
            big.initial = coefficients_of(*gv, basis);  // grid data carries no information past K
        }
        if (std::holds_alternative<SpaceTimeSamples>(spec.forcing)) {
            big.forcing = *detail::sampled_forcing(spec, threads);  // grid samples carry no information past K
        }
        SolveOptions bo = solve_options;
        bo.fault.reset();
        const SolutionField fb = solve(big, bo);
        const auto& bb = fb.basis();
        const auto bpts_tab = detail::eigen_table(bb, pts);
        const double vmax = detail::sup_eigenfunction(bb);
        for (const double t : times) {
            const auto cb = fb.coefficients(t).values;
            const auto ck = field.coefficients(t).values;
            std::vector<Complex> diff(cb);
            for (std::size_t q = 0; q < nm; ++q) {
                if (const auto p = bb.find(basis.modes()[q].index)) diff[*p] -= ck[q];
            }
            double gap = 0.0;
            for (const auto& row : bpts_tab) gap = std::max(gap, std::abs(detail::series_at(row, diff)));
            double tri = 0.0, sur = 0.0;
            for (std::size_t q = 0; q < bb.mode_count(); ++q) {
                if (basis.find(bb.modes()[q].index)) continue;
                tri += std::abs(cb[q]) * vmax;
                const double lam = bb.modes()[q].lambda;
                if (lam > 0.0) sur += std::pow(lam, 2.0 * tr.tau) * std::norm(fb.initial_coefficients().values[q]);
            }
            tr.times.push_back(t);
            tr.measured_gap.push_back(gap);
            tr.triangle_bound.push_back(tri);
            tr.surrogate.push_back(std::pow(t, 2.0 * (tr.epsilon - 1.0)) * sur);
        }
        // The bound is exact up to rounding in the synthesized sums.
        double excess = 0.0;
        for (std::size_t k = 0; k < tr.times.size(); ++k) {
            excess = std::max(excess, tr.measured_gap[k] - tr.triangle_bound[k]);
        }
        const double slack = 1e-13 * std::max(1.0, detail::field_sup(field, tab, times));
        rep.checks.push_back({"truncation_tail", excess, slack, excess <= slack,
                              "max over probe times of sup_x |u_2K - u_K| minus the tail triangle bound"});
    }

    // (e) stability samples.
    {
        for (const double t : times) {
            const auto c = field.coefficients(t).values;
            double m = 0.0;
            for (const auto& row : tab) m = std::max(m, std::abs(detail::series_at(row, c)));
            rep.stability_times.push_back(t);
            rep.stability_sup.push_back(m);
        }
        const bool finite = std::all_of(rep.stability_sup.begin(), rep.stability_sup.end(),
                                        [](double v) { return std::isfinite(v); });
        rep.checks.push_back({"stability", rep.stability_sup.empty() ? 0.0 : rep.stability_sup.back(), 0.0, finite,
                              "sup_x |u(x,t)| at the probe times (reported)"});
    }
    return rep;
}

}  // namespace subfrac::solver
