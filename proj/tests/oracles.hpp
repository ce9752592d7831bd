#pragma once

// Independent reference computations used only by the tests.

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

namespace oracle {

using mp = boost::multiprecision::mpfr_float;

/// E_{rho,mu}(z) by the power series in MPFR arithmetic. The working precision
/// grows with the largest term so cancellation for negative z stays below 2^-80.
inline double ml_series(double rho, double mu, double z) {
    const double az = std::abs(z);
    const double peak_log2 = az > 0.0 ? std::pow(az, 1.0 / rho) / std::log(2.0) : 0.0;
    const unsigned bits = static_cast<unsigned>(peak_log2) + 160;
    const unsigned digits = static_cast<unsigned>(bits * 0.30103) + 5;
    const unsigned saved = mp::default_precision();
    mp::default_precision(digits);

    const mp zz(z), r(rho), m(mu);
    mp sum = 0, power = 1;
    mp tail_guard = 0;
    for (long k = 0; k < 2000000; ++k) {
        const mp arg = r * k + m;
        const bool pole = arg <= 0 && arg == floor(arg);
        if (!pole) {
            const mp term = power / boost::multiprecision::tgamma(arg);
            sum += term;
            // Stop once terms are past the peak and negligible.
            if (k > 10 && arg > 2 && abs(term) < ldexp(mp(1), -static_cast<int>(bits)) * (abs(sum) + 1)) {
                if (tail_guard > 0 && abs(term) < tail_guard) break;
                tail_guard = abs(term);
            }
        }
        power *= zz;
    }
    const double out = static_cast<double>(sum);
    mp::default_precision(saved);
    return out;
}

/// exp(x^2) erfc(x) in MPFR, finite for large x where the double product overflows.
inline double exp_sq_erfc(double x) {
    const unsigned saved = mp::default_precision();
    mp::default_precision(60);
    const mp v = exp(mp(x) * x) * boost::multiprecision::erfc(mp(x));
    mp::default_precision(saved);
    return static_cast<double>(v);
}

/// 1/Gamma(x) in MPFR.
inline double rgamma(double x) {
    const unsigned saved = mp::default_precision();
    mp::default_precision(50);
    const mp v = 1 / boost::multiprecision::tgamma(mp(x));
    mp::default_precision(saved);
    return static_cast<double>(v);
}

/// Adaptive Gauss-Kronrod on [a, b].
inline double integrate(const std::function<double(double)>& f, double a, double b, double tol = 1e-13) {
    double err = 0.0;
    return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 20, tol, &err);
}

/// Sum over the lattice |n|_inf <= K in dimension N of f(n).
inline void for_lattice(int N, int K, const std::function<void(const std::vector<int>&)>& f) {
    std::vector<int> n(N, -K);
    for (;;) {
        f(n);
        int a = N - 1;
        while (a >= 0 && n[a] == K) n[a--] = -K;
        if (a < 0) return;
        ++n[a];
    }
}

/// Grunwald-Letnikov approximation of d^rho f at t on a uniform step h (first order).
inline double grunwald_letnikov(const std::function<double(double)>& f, double rho, double t, int steps) {
    const double h = t / steps;
    double w = 1.0, s = 0.0;
    for (int j = 0; j < steps; ++j) {
        s += w * f(t - j * h);
        w *= (j - rho) / (j + 1);
    }
    return s / std::pow(h, rho);
}

}  // namespace oracle
