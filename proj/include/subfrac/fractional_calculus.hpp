#pragma once

// Riemann-Liouville fractional integrals and derivatives of sampled functions
// on graded time meshes.
//
// A sampled function is stored as t^p g(t) with g given at the mesh nodes, so
// the weak singularity at t = 0 is carried analytically. I^beta is evaluated
// by product integration: g is linearly interpolated on each subinterval and
// integrated exactly against (t - xi)^(beta-1) xi^p. The derivative of order
// rho is d/dt I^(1-rho) by three-point differences, Richardson-extrapolated
// between the mesh and its every-other-node coarsening.

#include "subfrac/errors.hpp"
#include "subfrac/special_functions.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/beta.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace subfrac::fractional {

/// Default grading exponent for order rho. Interpolating a factor that behaves
/// like t^rho near 0 costs O(M^(-2 gamma rho)) there; gamma rho = 1.5 keeps that
/// below the O(M^-2) bulk error so Richardson extrapolation removes the latter cleanly.
inline double default_grading(double rho) { return std::max(2.0, 1.5 / rho); }

inline constexpr int default_intervals = 1024;

/// Ascending time nodes starting exactly at 0.
class TimeMesh {
public:
    /// t_i = T (i/M)^gamma, i = 0..M.
    static TimeMesh graded(double horizon, int intervals, double gamma) {
        if (!(horizon > 0.0) || !std::isfinite(horizon)) throw DomainError("TimeMesh: horizon must be positive");
        if (intervals < 2) throw DomainError("TimeMesh: need at least two intervals");
        if (!(gamma >= 1.0) || !std::isfinite(gamma)) throw DomainError("TimeMesh: grading exponent must be >= 1");
        std::vector<double> t(intervals + 1);
        for (int i = 0; i <= intervals; ++i) {
            t[i] = horizon * std::pow(static_cast<double>(i) / intervals, gamma);
        }
        t.back() = horizon;
        TimeMesh m(std::move(t));
        m.gamma_ = gamma;
        return m;
    }

    static TimeMesh from_nodes(std::vector<double> nodes) {
        if (nodes.size() < 3) throw DomainError("TimeMesh: need at least three nodes");
        if (nodes.front() != 0.0) throw DomainError("TimeMesh: first node must be 0");
        for (std::size_t i = 1; i < nodes.size(); ++i) {
            if (!(nodes[i] > nodes[i - 1]) || !std::isfinite(nodes[i])) {
                throw DomainError("TimeMesh: nodes must be finite and strictly increasing");
            }
        }
        return TimeMesh(std::move(nodes));
    }

    const std::vector<double>& nodes() const { return t_; }
    double operator[](std::size_t i) const { return t_[i]; }
    std::size_t size() const { return t_.size(); }
    int intervals() const { return static_cast<int>(t_.size()) - 1; }
    double horizon() const { return t_.back(); }
    /// Grading exponent for graded meshes; nullopt for meshes built from nodes.
    std::optional<double> grading() const { return gamma_; }

    /// Every other node. Requires an even number of intervals.
    TimeMesh coarsened() const {
        if (intervals() % 2 != 0 || intervals() < 4) {
            throw DomainError("TimeMesh: coarsening needs an even interval count >= 4");
        }
        std::vector<double> c;
        c.reserve(t_.size() / 2 + 1);
        for (std::size_t i = 0; i < t_.size(); i += 2) c.push_back(t_[i]);
        TimeMesh m(std::move(c));
        m.gamma_ = gamma_;
        return m;
    }

private:
    explicit TimeMesh(std::vector<double> t) : t_(std::move(t)) {}
    std::vector<double> t_;
    std::optional<double> gamma_;
};

/// f(t) = t^p g(t) with g sampled at every mesh node (including g(0)).
struct SingularSample {
    TimeMesh mesh;
    double p = 0.0;
    std::vector<double> g;

    /// Samples the smooth factor directly: g_i = g(t_i).
    template <class G>
    static SingularSample from_factor(TimeMesh mesh, double p, G&& g) {
        SingularSample s{std::move(mesh), p, {}};
        s.g.resize(s.mesh.size());
        for (std::size_t i = 0; i < s.mesh.size(); ++i) s.g[i] = g(s.mesh[i]);
        s.validate();
        return s;
    }

    /// Samples f at the positive nodes and divides out t^p; g(0) = g0 is supplied by the caller.
    template <class F>
    static SingularSample from_function(TimeMesh mesh, double p, F&& f, double g0) {
        SingularSample s{std::move(mesh), p, {}};
        s.g.resize(s.mesh.size());
        s.g[0] = g0;
        for (std::size_t i = 1; i < s.mesh.size(); ++i) {
            const double t = s.mesh[i];
            s.g[i] = f(t) * std::pow(t, -p);
        }
        s.validate();
        return s;
    }

    double value(std::size_t i) const { return std::pow(mesh[i], p) * g[i]; }

    void validate() const {
        if (!(p > -1.0) || !std::isfinite(p)) {
            std::ostringstream os;
            os << "SingularSample: exponent must exceed -1, got " << p;
            throw DomainError(os.str());
        }
        if (g.size() != mesh.size()) throw DomainError("SingularSample: sample count does not match mesh");
    }
};

namespace detail {

inline bool is_nonnegative_integer(double x) { return x >= 0.0 && x == std::nearbyint(x); }

inline const std::array<std::pair<double, double>, 10>& gauss_legendre10() {
    static const auto rule = [] {
        using G = boost::math::quadrature::gauss<double, 10>;
        std::array<std::pair<double, double>, 10> r{};
        const auto& x = G::abscissa();
        const auto& w = G::weights();
        for (std::size_t k = 0; k < x.size(); ++k) {
            r[2 * k] = {x[k], w[k]};
            r[2 * k + 1] = {-x[k], w[k]};
        }
        return r;
    }();
    return rule;
}

// int_a^b (t - xi)^(order-1) xi^q dxi via the incomplete beta function (q > -1, order > 0, b <= t).
inline double power_moment(double q, double order, double t, double a, double b) {
    namespace bm = boost::math;
    const double xa = a / t;
    const double xb = std::min(b / t, 1.0);
    const double scale = std::pow(t, q + order);
    const double s = q + 1.0;
    double v = 0.0;
    if (xb <= 0.5) {
        v = bm::beta(s, order, xb) - (xa > 0.0 ? bm::beta(s, order, xa) : 0.0);
    } else if (xa >= 0.5) {
        v = bm::betac(s, order, xa) - (xb < 1.0 ? bm::betac(s, order, xb) : 0.0);
    } else {
        v = bm::beta(s, order) - (xa > 0.0 ? bm::beta(s, order, xa) : 0.0) -
            (xb < 1.0 ? bm::betac(s, order, xb) : 0.0);
    }
    return scale * v;
}

// int_c^{c+h} u^(beta-1+m) (t-u)^p du, m in {0,1}, by the binomial series of (t-u)^p in u/t.
// Requires (c+h)/t <= 1/2.
inline std::array<double, 2> near_end_moments(double p, double beta, double t, double c, double h) {
    // Powers are taken of u/t so that tiny t cannot overflow the running coefficient.
    std::array<double, 2> j{0.0, 0.0};
    const double xe = (c + h) / t;
    const double xc = c / t;
    const std::array<double, 2> scale{std::pow(t, p + beta), std::pow(t, p + beta + 1.0)};
    double coef = 1.0;  // binom(p,k) (-1)^k
    for (int k = 0; k < 200; ++k) {
        double last = 0.0;
        for (int m = 0; m < 2; ++m) {
            const double s = beta + k + m;
            const double piece = (std::pow(xe, s) - (xc > 0.0 ? std::pow(xc, s) : 0.0)) / s;
            const double term = scale[m] * coef * piece;
            j[m] += term;
            last = std::max(last, std::abs(term) / std::max(std::abs(j[m]), 1e-300));
        }
        if (last < 1e-18 || coef == 0.0) break;
        coef *= -(p - k) / (k + 1.0);
    }
    return j;
}

}  // namespace detail

/// Lower-triangular product-integration weights for I^beta applied to t^p g(t)
/// on a fixed mesh: (I^beta f)(t_i) = sum_{j<=i} W_ij g_j.
class ProductIntegrator {
public:
    ProductIntegrator(TimeMesh mesh, double p, double beta) : mesh_(std::move(mesh)), p_(p), beta_(beta) {
        if (!(beta > 0.0) || !std::isfinite(beta)) throw DomainError("fractional integral: order must be positive");
        if (!(p > -1.0)) throw DomainError("fractional integral: exponent must exceed -1");
        build();
    }

    const TimeMesh& mesh() const { return mesh_; }
    double exponent() const { return p_; }
    double order() const { return beta_; }

    /// Values of I^beta (t^p g) at every node. Node 0 carries the limit t -> 0+.
    std::vector<double> apply(const std::vector<double>& g) const {
        if (g.size() != mesh_.size()) throw DomainError("ProductIntegrator: sample count does not match mesh");
        std::vector<double> out(mesh_.size());
        out[0] = limit_at_zero(g[0]);
        for (std::size_t i = 1; i < mesh_.size(); ++i) {
            const double* w = &w_[offset(i)];
            double s = 0.0;
            for (std::size_t j = 0; j <= i; ++j) s += w[j] * g[j];
            out[i] = s;
        }
        return out;
    }

private:
    static std::size_t offset(std::size_t i) { return i * (i + 1) / 2; }

    double limit_at_zero(double g0) const {
        // p = rho - 1, beta = 1 - rho sums to zero only up to rounding
        const double e = p_ + beta_;
        if (std::abs(e) <= 4.0 * std::numeric_limits<double>::epsilon()) {
            return g0 * std::tgamma(p_ + 1.0);  // Gamma(p+1)/Gamma(1)
        }
        if (e > 0.0) return 0.0;
        return g0 == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), g0);
    }

    void build() {
        const auto& t = mesh_.nodes();
        const std::size_t n = t.size();
        const auto& gl = detail::gauss_legendre10();
        const bool smooth_origin = detail::is_nonnegative_integer(p_);

        // Interval-local parts of the Gauss-Legendre weights do not depend on the row.
        std::vector<double> xi((n - 1) * 10), left((n - 1) * 10), right((n - 1) * 10);
        for (std::size_t j = 0; j + 1 < n; ++j) {
            const double a = t[j], b = t[j + 1], h = b - a;
            for (std::size_t k = 0; k < 10; ++k) {
                const double x = a + 0.5 * h * (gl[k].first + 1.0);
                const double w = 0.5 * h * gl[k].second * std::pow(x, p_);
                xi[j * 10 + k] = x;
                left[j * 10 + k] = w * (b - x) / h;
                right[j * 10 + k] = w * (x - a) / h;
            }
        }

        const double rg = special::rgamma(beta_);
        w_.assign(offset(n), 0.0);
        for (std::size_t i = 1; i < n; ++i) {
            const double ti = t[i];
            double* row = &w_[offset(i)];
            for (std::size_t j = 0; j < i; ++j) {
                const double a = t[j], b = t[j + 1], h = b - a;
                const double c = ti - b;
                double wl = 0.0, wr = 0.0;
                const bool near_end = c < 2.0 * h;
                const bool near_origin = !smooth_origin && a < 2.0 * h;
                if (near_end && (c + h) <= 0.5 * ti) {
                    const auto m = detail::near_end_moments(p_, beta_, ti, c, h);
                    // In u = t - xi: (b - xi)/h = (u - c)/h and (xi - a)/h = (c + h - u)/h.
                    wl = (m[1] - c * m[0]) / h;
                    wr = ((c + h) * m[0] - m[1]) / h;
                } else if (near_end || near_origin) {
                    const double m0 = detail::power_moment(p_, beta_, ti, a, b);
                    const double m1 = detail::power_moment(p_ + 1.0, beta_, ti, a, b);
                    wl = (b * m0 - m1) / h;
                    wr = (m1 - a * m0) / h;
                } else {
                    const std::size_t base = j * 10;
                    for (std::size_t k = 0; k < 10; ++k) {
                        const double kern = std::pow(ti - xi[base + k], beta_ - 1.0);
                        wl += kern * left[base + k];
                        wr += kern * right[base + k];
                    }
                }
                row[j] += wl * rg;
                row[j + 1] += wr * rg;
            }
        }
    }

    TimeMesh mesh_;
    double p_;
    double beta_;
    std::vector<double> w_;
};

/// (I^beta f)(t_i) at every mesh node.
inline std::vector<double> rl_integral(const SingularSample& f, double beta) {
    f.validate();
    return ProductIntegrator(f.mesh, f.p, beta).apply(f.g);
}

/// Derivative values with a Richardson error estimate.
struct DerivativeResult {
    std::vector<double> t;          // coarse interior nodes t_2, t_4, ..., t_{M-2}
    std::vector<double> value;
    std::vector<double> est_error;  // |fine - coarse| / 3 per node
    double max_est_error = 0.0;
    std::optional<std::string> warning;
};

namespace detail {

// Three-point derivative at interior nodes of a nonuniform mesh.
inline std::vector<double> central_difference(const std::vector<double>& t, const std::vector<double>& F) {
    std::vector<double> d(t.size(), 0.0);
    for (std::size_t i = 1; i + 1 < t.size(); ++i) {
        const double hm = t[i] - t[i - 1];
        const double hp = t[i + 1] - t[i];
        d[i] = (-hp / (hm * (hm + hp))) * F[i - 1] + ((hp - hm) / (hm * hp)) * F[i] +
               (hm / (hp * (hm + hp))) * F[i + 1];
    }
    return d;
}

}  // namespace detail

/// Applies d/dt I^(1-rho) to samples of t^p g on a fixed mesh, reusable across many g.
class RLDerivative {
public:
    RLDerivative(const TimeMesh& mesh, double p, double rho) : fine_(mesh), coarse_(mesh.coarsened()), p_(p), rho_(rho) {
        special::detail::check_order(rho);
        if (!(p > -1.0)) throw DomainError("fractional derivative: exponent must exceed -1");
        if (rho < 1.0) {
            if (p + 1.0 - rho < -4.0 * std::numeric_limits<double>::epsilon()) {
                throw DomainError("fractional derivative: t^p I^(1-rho) is unbounded at 0; need p >= rho - 1");
            }
            fine_int_.emplace(fine_, p, 1.0 - rho);
            coarse_int_.emplace(coarse_, p, 1.0 - rho);
        }
    }

    const TimeMesh& mesh() const { return fine_; }

    DerivativeResult apply(const std::vector<double>& g, std::optional<double> tolerance = std::nullopt) const {
        if (g.size() != fine_.size()) throw DomainError("RLDerivative: sample count does not match mesh");
        std::vector<double> gc;
        gc.reserve(coarse_.size());
        for (std::size_t i = 0; i < g.size(); i += 2) gc.push_back(g[i]);

        std::vector<double> Ff, Fc;
        if (fine_int_) {
            Ff = fine_int_->apply(g);
            Fc = coarse_int_->apply(gc);
        } else {
            Ff = pointwise(fine_, g);
            Fc = pointwise(coarse_, gc);
        }
        const auto df = detail::central_difference(fine_.nodes(), Ff);
        const auto dc = detail::central_difference(coarse_.nodes(), Fc);

        DerivativeResult r;
        const std::size_t nc = coarse_.size();
        for (std::size_t i = 1; i + 1 < nc; ++i) {
            const double f = df[2 * i];
            const double diff = (f - dc[i]) / 3.0;
            r.t.push_back(coarse_[i]);
            r.value.push_back(f + diff);
            r.est_error.push_back(std::abs(diff));
            r.max_est_error = std::max(r.max_est_error, std::abs(diff));
        }
        if (tolerance && r.max_est_error > *tolerance) {
            std::ostringstream os;
            os << "fractional derivative: Richardson estimate " << r.max_est_error << " exceeds tolerance "
               << *tolerance;
            r.warning = os.str();
        }
        return r;
    }

private:
    std::vector<double> pointwise(const TimeMesh& m, const std::vector<double>& g) const {
        std::vector<double> v(m.size());
        for (std::size_t i = 0; i < m.size(); ++i) {
            v[i] = (i == 0 && p_ == 0.0) ? g[0] : std::pow(m[i], p_) * g[i];
        }
        return v;
    }

    TimeMesh fine_;
    TimeMesh coarse_;
    double p_;
    double rho_;
    std::optional<ProductIntegrator> fine_int_;
    std::optional<ProductIntegrator> coarse_int_;
};

/// d^rho/dt^rho f = d/dt I^(1-rho) f at the interior nodes of the coarsened mesh.
/// For rho = 1 this is the classical derivative.
inline DerivativeResult rl_derivative(const SingularSample& f, double rho,
                                      std::optional<double> tolerance = std::nullopt) {
    f.validate();
    return RLDerivative(f.mesh, f.p, rho).apply(f.g, tolerance);
}

struct LimitResult {
    double value = 0.0;
    double est_error = 0.0;
    std::optional<std::string> warning;
};

/// lim_{t->0+} t^(1-rho) f(t) for f = t^(rho-1) g. The value g(0) stored in the
/// sample is not used; the limit is extrapolated from g at the first positive
/// nodes as a polynomial in s = t^rho, and the error estimate is the change
/// from the next lower degree.
inline LimitResult weighted_limit(const SingularSample& f, double rho, std::optional<double> tolerance = std::nullopt,
                                  int points = 4) {
    f.validate();
    special::detail::check_order(rho);
    if (std::abs(f.p - (rho - 1.0)) > 1e-14) throw DomainError("weighted_limit: sample exponent must be rho - 1");
    if (points < 2) throw DomainError("weighted_limit: need at least two nodes");
    if (f.mesh.size() < static_cast<std::size_t>(points) + 1) throw DomainError("weighted_limit: mesh too short");

    // Neville tableau at s = 0; row k of the final column is the degree-k extrapolant.
    std::vector<double> s(points), p(points);
    for (int i = 0; i < points; ++i) {
        s[i] = std::pow(f.mesh[i + 1], rho);
        p[i] = f.g[i + 1];
    }
    double lower = p[0];
    for (int k = 1; k < points; ++k) {
        for (int i = points - 1; i >= k; --i) {
            p[i] = (s[i] * p[i - 1] - s[i - k] * p[i]) / (s[i] - s[i - k]);
        }
        if (k == points - 2) lower = p[points - 2];
    }
    LimitResult r;
    r.value = p[points - 1];
    r.est_error = std::abs(r.value - lower);
    if (tolerance && r.est_error > *tolerance) {
        std::ostringstream os;
        os << "weighted_limit: extrapolation disagreement " << r.est_error << " exceeds tolerance " << *tolerance;
        r.warning = os.str();
    }
    return r;
}

}  // namespace subfrac::fractional
