#pragma once

// Two-parameter Mittag-Leffler function E_{rho,mu}(z) for real z and the
// relaxation kernels built from it.
//
// Three evaluation regimes are used:
//   series      power series with Neumaier summation (small |z|, any z > 0)
//   asymptotic  algebraic expansion in 1/|z| truncated at the smallest term (z <= -T0)
//   integral    real-line collapse of the Hankel contour (0 < rho < 1) or
//               the incomplete-gamma integral (rho == 1) for the band in between
// Every evaluation carries an error estimate; a result whose estimate misses the
// requested tolerance raises AccuracyError rather than being returned.

#include "subfrac/errors.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/tools/minima.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/sin_pi.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace subfrac::special {

enum class Regime { series, asymptotic, integral };

inline std::string_view to_string(Regime r) {
    switch (r) {
    case Regime::series: return "series";
    case Regime::asymptotic: return "asymptotic";
    case Regime::integral: return "integral";
    }
    return "unknown";
}

struct MLParams {
    double rho = 1.0;  // series exponent step, > 0
    double mu = 1.0;   // offset; any real
};

struct MLEvaluation {
    double value = 0.0;
    double est_abs_error = 0.0;
    Regime regime = Regime::series;
};

struct MLOptions {
    double series_radius = 10.0;          // Z0: series is attempted for |z| <= Z0
    double asymptotic_threshold = 50.0;   // T0: expansion is used for z <= -T0
    double tolerance = 1e-12;             // committed bound, scaled by max(1, |E|)
    int max_series_terms = 10000;
    std::optional<Regime> force;          // bypass regime selection (testing)
};

namespace detail {

inline constexpr double eps = std::numeric_limits<double>::epsilon();
inline constexpr double pi = boost::math::constants::pi<double>();

inline bool is_nonpositive_integer(double x) {
    return x <= 0.0 && x == std::nearbyint(x);
}

}  // namespace detail

/// 1/Gamma(x). Exactly zero at the poles of Gamma; no overflow for large x.
inline double rgamma(double x) {
    if (std::isnan(x)) return x;
    if (detail::is_nonpositive_integer(x)) return 0.0;
    if (x > 171.0) return std::exp(-boost::math::lgamma(x));
    if (x >= 0.5) return 1.0 / std::tgamma(x);
    // Reflection: 1/Gamma(x) = Gamma(1-x) sin(pi x) / pi.
    const double s = boost::math::sin_pi(x);
    const double y = 1.0 - x;
    if (y > 171.0) {
        return std::copysign(std::exp(boost::math::lgamma(y) - std::log(detail::pi)) * std::abs(s), s);
    }
    return std::tgamma(y) * s / detail::pi;
}

/// log|1/Gamma(x)|, -inf at the poles of Gamma.
inline double log_abs_rgamma(double x) {
    if (detail::is_nonpositive_integer(x)) return -std::numeric_limits<double>::infinity();
    if (x > 0.0) return -boost::math::lgamma(x);
    return boost::math::lgamma(1.0 - x) + std::log(std::abs(boost::math::sin_pi(x))) - std::log(detail::pi);
}

namespace detail {

struct Neumaier {
    double sum = 0.0;
    double comp = 0.0;
    void add(double v) {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v)) comp += (sum - t) + v;
        else comp += (v - t) + sum;
        sum = t;
    }
    double value() const { return sum + comp; }
};

inline void check_params(const MLParams& p) {
    if (!(p.rho > 0.0) || !std::isfinite(p.rho)) {
        std::ostringstream os;
        os << "Mittag-Leffler: rho must be positive, got " << p.rho;
        throw DomainError(os.str());
    }
    if (!std::isfinite(p.mu)) throw DomainError("Mittag-Leffler: mu must be finite");
}

inline double allowed_error(const MLOptions& o, double value) {
    return o.tolerance * std::max(1.0, std::abs(value));
}

// z^k / Gamma(rho k + mu), switching to log form when either factor would overflow.
// `rel_err` receives a bound on the relative rounding error of the returned term.
inline double series_term(int k, double z, double log_az, double rho, double mu, double& rel_err) {
    // arg + lo = rho k + mu exactly up to second order; psi(arg) amplifies the
    // rounding of arg, so it is folded back in as a first-order factor.
    const double prod = rho * k;
    const double prod_err = std::fma(rho, static_cast<double>(k), -prod);
    const double arg = prod + mu;
    const double bv = arg - prod;
    const double lo = (prod - (arg - bv)) + (mu - bv) + prod_err;
    // log(x) - 1/(2x) tracks psi(x) closely enough for a factor this close to one
    const double correction = (arg > 2.0 && lo != 0.0) ? 1.0 - (std::log(arg) - 0.5 / arg) * lo : 1.0;
    if (arg <= 171.0 && k * log_az < 650.0) {
        rel_err = 16.0 * eps;
        return std::pow(z, k) * rgamma(arg) * correction;
    }
    rel_err = 0.0;
    if (is_nonpositive_integer(arg)) return 0.0;
    // 1/Gamma(x) for x < 0 has the sign of sin(pi x)
    const bool rneg = arg < 0.0 && boost::math::sin_pi(arg) < 0.0;
    const double lr = log_abs_rgamma(arg);
    // exp amplifies the absolute error of its argument
    rel_err = (8.0 + std::abs(k * log_az) + 2.0 * std::abs(lr)) * eps;
    const double mag = std::exp(k * log_az + lr) * correction;
    const bool neg = (rneg != (z < 0.0 && (k % 2) == 1));
    return neg ? -mag : mag;
}

// Power series. Returns nullopt when the term cap is hit before the tail is negligible.
inline std::optional<MLEvaluation> ml_series(double rho, double mu, double z, const MLOptions& o) {
    if (z == 0.0) {
        const double v = rgamma(mu);
        return MLEvaluation{v, eps * std::abs(v), Regime::series};
    }
    const double az = std::abs(z);
    const double log_az = std::log(az);
    // Terms decay monotonically once rho k + mu exceeds roughly |z|^(1/rho).
    const double peak = std::exp(log_az / rho);
    Neumaier acc;
    double abs_sum = 0.0;
    double term_err = 0.0;
    double prev = 0.0;
    double last = 0.0;
    bool converged = false;
    for (int k = 0; k < o.max_series_terms; ++k) {
        double rel = 0.0;
        const double term = series_term(k, z, log_az, rho, mu, rel);
        if (!std::isfinite(term)) return std::nullopt;
        acc.add(term);
        abs_sum += std::abs(term);
        term_err += rel * std::abs(term);
        prev = last;
        last = term;
        if (k >= 2 && rho * k + mu > peak + 1.0) {
            const double scale = std::max(std::abs(acc.value()), 1e-6);
            if (std::abs(term) <= 1e-18 * scale) {
                converged = true;
                break;
            }
        }
    }
    if (!converged) return std::nullopt;
    double tail = 10.0 * std::abs(last);
    if (prev != 0.0) {
        const double r = std::abs(last / prev);
        if (r < 1.0) tail = std::abs(last) * r / (1.0 - r);
    }
    const double v = acc.value();
    if (!std::isfinite(v) || !std::isfinite(abs_sum)) return std::nullopt;
    const double err = term_err + 4.0 * eps * abs_sum + eps * std::abs(v) + tail;
    return MLEvaluation{v, err, Regime::series};
}

// E(-t) ~ sum_{k>=1} (-1)^{k+1} t^{-k} / Gamma(mu - rho k), t > 0, truncated at the smallest term.
inline MLEvaluation ml_asymptotic(double rho, double mu, double t) {
    const double log_t = std::log(t);
    Neumaier acc;
    double abs_sum = 0.0;
    // |1/Gamma(y)| <= Gamma(1-y)/pi for y < 1; the bound is smooth in k, so its
    // minimum marks the optimal truncation point.
    auto envelope = [&](int k) {
        const double y = mu - rho * k;
        if (y >= 1.0) return std::exp(log_abs_rgamma(y) - k * log_t);
        return std::exp(boost::math::lgamma(1.0 - y) - std::log(pi) - k * log_t);
    };
    double next_env = envelope(1);
    for (int k = 1; k < 100000; ++k) {
        const double y = mu - rho * k;
        const double r = rgamma(y);
        double term = 0.0;
        if (r != 0.0) {
            term = std::copysign(std::exp(log_abs_rgamma(y) - k * log_t), r);
            if (k % 2 == 0) term = -term;
        }
        acc.add(term);
        abs_sum += std::abs(term);
        const double env = next_env;
        next_env = envelope(k + 1);
        const double scale = std::max(std::abs(acc.value()), 1e-6);
        const bool bounded = mu - rho * (k + 1) < 1.0;
        if ((bounded && next_env > env) || next_env <= 1e-18 * scale) break;
    }
    const double v = acc.value();
    double err = next_env + 16.0 * eps * abs_sum + eps * std::abs(v);
    if (rho > 2.0 / 3.0) {
        // Exponentially small contribution of the poles next to the negative axis.
        const double c = std::cos(pi / rho);
        err += std::exp((1.0 - mu) / rho * log_t + c * std::exp(log_t / rho)) / rho;
    }
    return MLEvaluation{v, err, Regime::asymptotic};
}

inline boost::math::quadrature::tanh_sinh<double>& tanh_sinh_rule() {
    thread_local boost::math::quadrature::tanh_sinh<double> rule;
    return rule;
}

struct Quad {
    double value;
    double error;
};

// The rule is applied on [0, b - a]: with a nonzero lower limit Boost 1.74 loses
// the endpoint complement on the left half of the interval.
template <class F>
Quad integrate(F f, double a, double b) {
    double err = 0.0;
    double l1 = 0.0;
    auto shifted = [&](double y) { return f(a + y); };
    const double v = tanh_sinh_rule().integrate(shifted, 0.0, b - a, 1e-14, &err, &l1);
    return {v, err + 8.0 * eps * l1};
}

// 0 < rho < 1, mu <= 1, x > 0: E_{rho,mu}(-x) as a real integral over (0, inf).
inline MLEvaluation ml_integral_fractional(double rho, double mu, double x) {
    const double a = boost::math::sin_pi(1.0 - mu);
    const double b = boost::math::sin_pi(1.0 - mu + rho);
    const double c = std::cos(pi * rho);
    const double expo = (1.0 - mu) / rho;
    auto kernel = [=](double chi) {
        if (chi <= 0.0) return 0.0;
        const double denom = chi * chi + 2.0 * chi * x * c + x * x;
        const double w = std::exp(expo * std::log(chi) - std::exp(std::log(chi) / rho));
        return w * (chi * a + x * b) / denom;
    };
    // exp(-chi^(1/rho)) underflows past this point
    const double upper = std::pow(800.0, rho);
    Quad q{0.0, 0.0};
    const double split = c < 0.0 ? -x * c : 0.0;
    if (split > 0.0 && split < upper) {
        const Quad lo = integrate(kernel, 0.0, split);
        const Quad hi = integrate(kernel, split, upper);
        q = {lo.value + hi.value, lo.error + hi.error};
    } else {
        q = integrate(kernel, 0.0, upper);
    }
    const double scale = 1.0 / (rho * pi);
    const double v = q.value * scale;
    return MLEvaluation{v, q.error * scale + 4.0 * eps * std::abs(v), Regime::integral};
}

// rho == 1, mu > 1, x > 0: E_{1,mu}(-x) = (1/Gamma(mu-1)) int_0^1 s^(mu-2) e^(-x(1-s)) ds.
inline MLEvaluation ml_integral_classical(double mu, double x) {
    const double expo = mu - 2.0;
    auto f = [=](double s, double sc) {
        // sc is a - s (< 0) on the left half and b - s (> 0) on the right half
        const double one_minus_s = sc > 0.0 ? sc : 1.0 - s;
        if (s <= 0.0) return expo == 0.0 ? std::exp(-x) : 0.0;
        return std::exp(expo * std::log(s) - x * one_minus_s);
    };
    double err = 0.0;
    double l1 = 0.0;
    const double q = tanh_sinh_rule().integrate(f, 0.0, 1.0, 1e-14, &err, &l1);
    const double r = rgamma(mu - 1.0);
    const double v = q * r;
    return MLEvaluation{v, (err + 8.0 * eps * l1) * std::abs(r) + 4.0 * eps * std::abs(v),
                        Regime::integral};
}

// Band between the series disc and the asymptotic region, z = -x < 0.
inline MLEvaluation ml_integral(double rho, double mu, double x) {
    if (rho == 1.0) {
        if (mu == 1.0) {
            const double v = std::exp(-x);
            return MLEvaluation{v, 2.0 * eps * v, Regime::integral};
        }
        if (mu > 1.0) return ml_integral_classical(mu, x);
        // E_{1,mu}(z) = 1/Gamma(mu) + z E_{1,mu+1}(z)
        const MLEvaluation up = ml_integral(1.0, mu + 1.0, x);
        const double r = rgamma(mu);
        const double v = r - x * up.value;
        return MLEvaluation{v, x * up.est_abs_error + 2.0 * eps * (std::abs(r) + std::abs(v)),
                            Regime::integral};
    }
    if (mu <= 1.0) return ml_integral_fractional(rho, mu, x);
    // E_{rho,mu}(z) = (E_{rho,mu-rho}(z) - 1/Gamma(mu-rho)) / z
    const MLEvaluation down = ml_integral(rho, mu - rho, x);
    const double r = rgamma(mu - rho);
    const double v = (r - down.value) / x;
    const double err = (down.est_abs_error + 2.0 * eps * (std::abs(r) + std::abs(down.value))) / x +
                       eps * std::abs(v);
    return MLEvaluation{v, err, Regime::integral};
}

[[noreturn]] inline void accuracy_failure(const MLParams& p, double z, const MLEvaluation* e) {
    std::ostringstream os;
    os.precision(17);
    os << "Mittag-Leffler E_{" << p.rho << "," << p.mu << "}(" << z << "): ";
    if (e) {
        os << to_string(e->regime) << " regime estimate " << e->est_abs_error
           << " misses the requested tolerance";
    } else {
        os << "series did not converge (overflow or term cap)";
    }
    throw AccuracyError(os.str());
}

}  // namespace detail

/// E_{rho,mu}(z) = sum_k z^k / Gamma(rho k + mu) with a certified error estimate.
inline MLEvaluation ml(MLParams p, double z, const MLOptions& o = {}) {
    detail::check_params(p);
    if (std::isnan(z)) throw DomainError("Mittag-Leffler: argument is NaN");

    if (p.rho == 1.0 && p.mu == 1.0) {
        const double v = std::exp(z);
        if (!std::isfinite(v)) detail::accuracy_failure(p, z, nullptr);
        return MLEvaluation{v, 2.0 * detail::eps * v, Regime::series};
    }

    auto certified = [&](const MLEvaluation& e) {
        return std::isfinite(e.value) && e.est_abs_error <= detail::allowed_error(o, e.value);
    };
    auto accept = [&](const MLEvaluation& e) {
        if (!certified(e)) detail::accuracy_failure(p, z, &e);
        return e;
    };

    if (o.force) {
        switch (*o.force) {
        case Regime::series: {
            const auto s = detail::ml_series(p.rho, p.mu, z, o);
            if (!s) detail::accuracy_failure(p, z, nullptr);
            return accept(*s);
        }
        case Regime::asymptotic:
            if (z >= 0.0) throw DomainError("asymptotic regime needs a negative argument");
            return accept(detail::ml_asymptotic(p.rho, p.mu, -z));
        case Regime::integral:
            if (z >= 0.0) throw DomainError("integral regime needs a negative argument");
            if (p.rho > 1.0) throw DomainError("integral regime needs rho <= 1");
            return accept(detail::ml_integral(p.rho, p.mu, -z));
        }
    }

    if (z >= 0.0) {
        const auto s = detail::ml_series(p.rho, p.mu, z, o);
        if (!s) detail::accuracy_failure(p, z, nullptr);
        return accept(*s);
    }

    const double x = -z;
    if (x <= o.series_radius) {
        const auto s = detail::ml_series(p.rho, p.mu, z, o);
        if (s && certified(*s)) return *s;
    }
    if (x >= o.asymptotic_threshold) {
        const MLEvaluation a = detail::ml_asymptotic(p.rho, p.mu, x);
        if (certified(a) || p.rho > 1.0) return accept(a);
    }
    if (p.rho > 1.0) {
        // No real-line integral representation is implemented past rho = 1.
        const auto s = detail::ml_series(p.rho, p.mu, z, o);
        if (!s) detail::accuracy_failure(p, z, nullptr);
        return accept(*s);
    }
    return accept(detail::ml_integral(p.rho, p.mu, x));
}

namespace detail {

inline void check_order(double rho) {
    if (!(rho > 0.0 && rho <= 1.0)) {
        std::ostringstream os;
        os << "fractional order must lie in (0, 1], got " << rho;
        throw DomainError(os.str());
    }
}

inline void check_lambda(double lambda) {
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
        throw DomainError("eigenvalue must be finite and nonnegative");
    }
}

}  // namespace detail

/// t^(rho-1) E_{rho,rho}(-lambda t^rho), the response of one mode to unit initial data.
inline double ml_kernel(double rho, double lambda, double t) {
    detail::check_order(rho);
    detail::check_lambda(lambda);
    if (!(t > 0.0)) throw DomainError("ml_kernel: t must be positive (singular at t = 0)");
    const double lead = std::pow(t, rho - 1.0);
    if (lambda == 0.0) return lead * rgamma(rho);
    return lead * ml({rho, rho}, -lambda * std::pow(t, rho)).value;
}

/// int_0^t ml_kernel(rho, lambda, s) ds = t^rho E_{rho,rho+1}(-lambda t^rho).
inline double ml_kernel_antiderivative(double rho, double lambda, double t) {
    detail::check_order(rho);
    detail::check_lambda(lambda);
    if (!(t >= 0.0)) throw DomainError("ml_kernel_antiderivative: t must be nonnegative");
    if (t == 0.0) return 0.0;
    const double tr = std::pow(t, rho);
    if (lambda == 0.0) return tr * rgamma(rho + 1.0);
    return tr * ml({rho, rho + 1.0}, -lambda * tr).value;
}

/// int_0^t ml_kernel_antiderivative(rho, lambda, s) ds = t^(rho+1) E_{rho,rho+2}(-lambda t^rho).
inline double ml_kernel_second_antiderivative(double rho, double lambda, double t) {
    detail::check_order(rho);
    detail::check_lambda(lambda);
    if (!(t >= 0.0)) throw DomainError("ml_kernel_second_antiderivative: t must be nonnegative");
    if (t == 0.0) return 0.0;
    const double tr = std::pow(t, rho);
    if (lambda == 0.0) return tr * t * rgamma(rho + 2.0);
    return tr * t * ml({rho, rho + 2.0}, -lambda * tr).value;
}

struct KernelBound {
    double supremum = 0.0;
    double argmax = 0.0;
};

/// Measured sup of (1 + t)|E_{rho,rho}(-t)| over [0, t_max]: t = 0 plus a
/// log-spaced grid on [1e-8, t_max], refined by Brent's method around the best node.
inline KernelBound kernel_bound_constant(double rho, double t_max = 1e4, int grid = 20000) {
    detail::check_order(rho);
    if (!(t_max > 1e-8)) throw DomainError("kernel_bound_constant: t_max must exceed 1e-8");
    auto f = [&](double t) { return (1.0 + t) * std::abs(t == 0.0 ? rgamma(rho) : ml({rho, rho}, -t).value); };
    std::vector<double> t(static_cast<std::size_t>(grid) + 1, 0.0);
    for (int i = 1; i <= grid; ++i) t[i] = 1e-8 * std::pow(t_max / 1e-8, (i - 1.0) / (grid - 1.0));
    KernelBound b{f(0.0), 0.0};
    std::size_t best = 0;
    for (std::size_t i = 1; i < t.size(); ++i) {
        const double v = f(t[i]);
        if (v > b.supremum) {
            b = {v, t[i]};
            best = i;
        }
    }
    if (best > 0) {
        const double lo = t[best - 1];
        const double hi = best + 1 < t.size() ? t[best + 1] : t[best];
        const auto r = boost::math::tools::brent_find_minima([&](double x) { return -f(x); }, lo, hi, 50);
        if (-r.second > b.supremum) b = {-r.second, r.first};
    }
    return b;
}

}  // namespace subfrac::special
