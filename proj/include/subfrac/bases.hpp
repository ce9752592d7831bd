#pragma once

// Spectral bases with explicit eigenpairs:
//
//   torus T^N = [0, 2pi)^N with a homogeneous constant-coefficient symbol A(n),
//     v_n(x) = (2pi)^(-N/2) exp(i n.x),  lambda_n = A(n),  |n|_inf <= K;
//   interval (0, pi) with Dirichlet conditions,
//     v_k(x) = sqrt(2/pi) sin(k x),  lambda_k = k^2,  k = 1..K.
//
// Transforms are FFTW-backed (complex DFT on the torus, DST-I on the interval)
// and normalized so that analysis is the L2 inner product with v.

#include "subfrac/errors.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <memory>
#include <mutex>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace subfrac::bases {

inline constexpr double pi = 3.141592653589793238462643383279502884;

using MultiIndex = std::vector<int>;
using Complex = std::complex<double>;

/// A(n) = sum_{|alpha| = m} a_alpha (i n)^alpha on Z^N.
class EllipticSymbol {
public:
    struct Term {
        MultiIndex alpha;
        double coefficient = 0.0;
    };

    /// Validates order, multi-indices, realness and positivity on |n|_inf <= probe.
    EllipticSymbol(int dimension, int order, std::vector<Term> terms, int probe = 6)
        : n_(dimension), m_(order), terms_(std::move(terms)) {
        validate(probe);
    }

    /// -Laplacian: A(n) = |n|^2.
    static EllipticSymbol laplacian(int dimension) {
        std::vector<Term> t;
        for (int j = 0; j < dimension; ++j) {
            MultiIndex a(dimension, 0);
            a[j] = 2;
            t.push_back({a, -1.0});
        }
        return EllipticSymbol(dimension, 2, std::move(t));
    }

    /// Laplacian squared: A(n) = |n|^4.
    static EllipticSymbol biharmonic(int dimension) {
        std::vector<Term> t;
        for (int j = 0; j < dimension; ++j) {
            for (int k = j; k < dimension; ++k) {
                MultiIndex a(dimension, 0);
                a[j] += 2;
                a[k] += 2;
                t.push_back({a, j == k ? 1.0 : 2.0});
            }
        }
        return EllipticSymbol(dimension, 4, std::move(t));
    }

    int dimension() const { return n_; }
    int order() const { return m_; }
    const std::vector<Term>& terms() const { return terms_; }

    /// A(n) as a real number: (i n)^alpha = i^m n^alpha with m even.
    double operator()(const MultiIndex& n) const {
        double s = 0.0;
        for (const auto& term : terms_) {
            double p = term.coefficient;
            for (int d = 0; d < n_; ++d) p *= ipow(n[d], term.alpha[d]);
            s += p;
        }
        return ((m_ / 2) % 2 == 0 ? s : -s) + 0.0;  // + 0.0 maps -0 to +0
    }

    /// Sum a_alpha (i n)^alpha evaluated in complex arithmetic, term by term.
    Complex complex_value(const MultiIndex& n) const {
        Complex s = 0.0;
        for (const auto& term : terms_) {
            Complex p = term.coefficient;
            for (int d = 0; d < n_; ++d) {
                for (int r = 0; r < term.alpha[d]; ++r) p *= Complex(0.0, n[d]);
            }
            s += p;
        }
        return s;
    }

private:
    static double ipow(double x, int e) {
        double r = 1.0;
        for (int i = 0; i < e; ++i) r *= x;
        return r;
    }

    void validate(int probe) const {
        if (n_ < 1) throw ConfigError("symbol: dimension must be >= 1");
        if (m_ < 2 || m_ % 2 != 0) throw ConfigError("symbol: order must be even and >= 2");
        if (terms_.empty()) throw ConfigError("symbol: no coefficients");
        for (const auto& term : terms_) {
            if (static_cast<int>(term.alpha.size()) != n_) throw ConfigError("symbol: multi-index has wrong length");
            int total = 0;
            for (int a : term.alpha) {
                if (a < 0) throw ConfigError("symbol: negative multi-index entry");
                total += a;
            }
            if (total != m_) {
                std::ostringstream os;
                os << "symbol: multi-index of order " << total << " in a symbol of order " << m_;
                throw ConfigError(os.str());
            }
            if (!std::isfinite(term.coefficient)) throw ConfigError("symbol: non-finite coefficient");
        }
        // Probe lattice |n|_inf <= probe, excluding the origin.
        MultiIndex n(n_, -probe);
        for (;;) {
            const bool origin = std::all_of(n.begin(), n.end(), [](int v) { return v == 0; });
            const Complex c = complex_value(n);
            const double scale = std::max(1.0, std::abs(c));
            if (std::abs(c.imag()) > 1e-12 * scale) throw ConfigError("symbol: A(n) is not real");
            if (!origin && !(c.real() > 0.0)) {
                std::ostringstream os;
                os << "symbol: not positive (A(n) = " << c.real() << " at n = (";
                for (int d = 0; d < n_; ++d) os << (d ? "," : "") << n[d];
                os << "))";
                throw ConfigError(os.str());
            }
            int d = n_ - 1;
            while (d >= 0 && n[d] == probe) n[d--] = -probe;
            if (d < 0) break;
            ++n[d];
        }
    }

    int n_;
    int m_;
    std::vector<Term> terms_;
};

/// A(n) for a validated symbol.
inline double symbol_eval(const EllipticSymbol& sym, const MultiIndex& n) {
    if (static_cast<int>(n.size()) != sym.dimension()) throw ConfigError("symbol_eval: lattice point has wrong dimension");
    return sym(n);
}

enum class BasisKind { torus, dirichlet_sine };

struct Eigenpair {
    MultiIndex index;  // lattice point n (torus) or {k} (sine)
    double lambda = 0.0;
};

namespace detail {

inline std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

template <class T>
struct FftwBuffer {
    explicit FftwBuffer(std::size_t n) : ptr(static_cast<T*>(fftw_malloc(sizeof(T) * std::max<std::size_t>(n, 1)))) {
        if (!ptr) throw std::bad_alloc();
    }
    ~FftwBuffer() { fftw_free(ptr); }
    FftwBuffer(const FftwBuffer&) = delete;
    FftwBuffer& operator=(const FftwBuffer&) = delete;
    T* ptr;
};

// Executes a freshly planned transform; planning is serialized, execution is not.
template <class MakePlan>
void run_plan(MakePlan make) {
    fftw_plan plan = nullptr;
    {
        std::lock_guard<std::mutex> lock(fftw_planner_mutex());
        plan = make();
    }
    if (!plan) throw std::runtime_error("FFTW planning failed");
    fftw_execute(plan);
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
}

struct BasisData {
    BasisKind kind = BasisKind::torus;
    int dimension = 1;
    int order = 2;
    int cutoff = 0;
    int grid = 0;  // torus: points per axis; sine: intervals on [0, pi]
    std::optional<EllipticSymbol> symbol;
    std::vector<Eigenpair> modes;
    std::vector<std::size_t> transform_index;  // torus: flat DFT index; sine: k - 1
    std::vector<std::size_t> lattice_to_mode;  // torus: flat index of n + K in (2K+1)^N
};

}  // namespace detail

class SpectralBasis;

/// Coefficients g_n ordered like basis.modes(). Sine coefficients are real
/// and stored with zero imaginary part.
struct CoefficientVector {
    std::shared_ptr<const detail::BasisData> basis;
    std::vector<Complex> values;
};

/// Samples on a basis grid after synthesis; max_imag is the largest discarded
/// imaginary part (nonzero only for non-Hermitian torus coefficients).
struct GridSamples {
    std::vector<double> values;
    double max_imag = 0.0;
};

class SpectralBasis {
public:
    static int default_grid(int cutoff) { return 4 * (cutoff + 1); }

    /// Torus basis for sym on |n|_inf <= cutoff, grid points per axis (0 = default).
    static SpectralBasis torus(const EllipticSymbol& sym, int cutoff, int grid = 0) {
        if (cutoff < 0) throw ConfigError("torus basis: cutoff must be >= 0");
        if (grid == 0) grid = default_grid(cutoff);
        if (grid < 2 * cutoff + 2) {
            std::ostringstream os;
            os << "torus basis: grid of " << grid << " points per axis aliases cutoff " << cutoff << " (need >= "
               << 2 * cutoff + 2 << ")";
            throw ConfigError(os.str());
        }
        auto d = std::make_shared<detail::BasisData>();
        d->kind = BasisKind::torus;
        d->dimension = sym.dimension();
        d->order = sym.order();
        d->cutoff = cutoff;
        d->grid = grid;
        d->symbol = sym;
        const int N = sym.dimension();
        const int side = 2 * cutoff + 1;
        std::size_t count = 1;
        for (int i = 0; i < N; ++i) count *= static_cast<std::size_t>(side);

        // Lexicographic lattice enumeration, then a stable sort by eigenvalue.
        std::vector<Eigenpair> pairs;
        pairs.reserve(count);
        MultiIndex n(N, -cutoff);
        for (std::size_t c = 0; c < count; ++c) {
            pairs.push_back({n, sym(n)});
            int ax = N - 1;
            while (ax >= 0 && n[ax] == cutoff) n[ax--] = -cutoff;
            if (ax >= 0) ++n[ax];
        }
        std::stable_sort(pairs.begin(), pairs.end(),
                         [](const Eigenpair& a, const Eigenpair& b) { return a.lambda < b.lambda; });
        d->modes = std::move(pairs);
        d->transform_index.resize(count);
        d->lattice_to_mode.resize(count);
        for (std::size_t q = 0; q < count; ++q) {
            const auto& idx = d->modes[q].index;
            std::size_t flat = 0, lat = 0;
            for (int ax = 0; ax < N; ++ax) {
                const int k = idx[ax];
                flat = flat * static_cast<std::size_t>(grid) + static_cast<std::size_t>(k >= 0 ? k : grid + k);
                lat = lat * static_cast<std::size_t>(side) + static_cast<std::size_t>(k + cutoff);
            }
            d->transform_index[q] = flat;
            d->lattice_to_mode[lat] = q;
        }
        return SpectralBasis(std::move(d));
    }

    /// Dirichlet sine basis on (0, pi), k = 1..cutoff, grid intervals (0 = default).
    static SpectralBasis dirichlet_sine(int cutoff, int grid = 0) {
        if (cutoff < 1) throw ConfigError("sine basis: cutoff must be >= 1");
        if (grid == 0) grid = default_grid(cutoff);
        if (grid < 2 * cutoff + 2 || grid % 2 != 0) {
            std::ostringstream os;
            os << "sine basis: grid of " << grid << " intervals is too coarse or odd for cutoff " << cutoff
               << " (need an even count >= " << 2 * cutoff + 2 << ")";
            throw ConfigError(os.str());
        }
        auto d = std::make_shared<detail::BasisData>();
        d->kind = BasisKind::dirichlet_sine;
        d->dimension = 1;
        d->order = 2;
        d->cutoff = cutoff;
        d->grid = grid;
        for (int k = 1; k <= cutoff; ++k) {
            d->modes.push_back({{k}, static_cast<double>(k) * k});
            d->transform_index.push_back(static_cast<std::size_t>(k - 1));
        }
        return SpectralBasis(std::move(d));
    }

    BasisKind kind() const { return d_->kind; }
    int dimension() const { return d_->dimension; }
    /// Order m of the operator (2 for the sine basis).
    int order() const { return d_->order; }
    int cutoff() const { return d_->cutoff; }
    int grid() const { return d_->grid; }
    const std::optional<EllipticSymbol>& symbol() const { return d_->symbol; }
    const std::vector<Eigenpair>& modes() const { return d_->modes; }
    std::size_t mode_count() const { return d_->modes.size(); }
    const std::shared_ptr<const detail::BasisData>& data() const { return d_; }

    /// First count modes in eigenvalue order.
    std::vector<Eigenpair> lowest(std::size_t count) const {
        count = std::min(count, d_->modes.size());
        return {d_->modes.begin(), d_->modes.begin() + static_cast<std::ptrdiff_t>(count)};
    }

    /// Position of lattice point n in modes(), if enumerated.
    std::optional<std::size_t> find(const MultiIndex& n) const {
        if (static_cast<int>(n.size()) != d_->dimension) return std::nullopt;
        const int K = d_->cutoff;
        if (d_->kind == BasisKind::dirichlet_sine) {
            if (n[0] < 1 || n[0] > K) return std::nullopt;
            return static_cast<std::size_t>(n[0] - 1);
        }
        std::size_t lat = 0;
        for (int v : n) {
            if (v < -K || v > K) return std::nullopt;
            lat = lat * static_cast<std::size_t>(2 * K + 1) + static_cast<std::size_t>(v + K);
        }
        return d_->lattice_to_mode[lat];
    }

    /// Number of grid samples: G^N on the torus, G + 1 (both endpoints) on the interval.
    std::size_t grid_points() const {
        if (d_->kind == BasisKind::dirichlet_sine) return static_cast<std::size_t>(d_->grid) + 1;
        std::size_t n = 1;
        for (int i = 0; i < d_->dimension; ++i) n *= static_cast<std::size_t>(d_->grid);
        return n;
    }

    /// Spatial step of the grid.
    double grid_step() const {
        return d_->kind == BasisKind::torus ? 2.0 * pi / d_->grid : pi / d_->grid;
    }

    /// Coordinates of grid sample flat (row-major, first axis slowest on the torus).
    std::vector<double> grid_coordinate(std::size_t flat) const {
        const double h = grid_step();
        if (d_->kind == BasisKind::dirichlet_sine) return {h * static_cast<double>(flat)};
        std::vector<double> x(d_->dimension);
        for (int ax = d_->dimension - 1; ax >= 0; --ax) {
            x[ax] = h * static_cast<double>(flat % static_cast<std::size_t>(d_->grid));
            flat /= static_cast<std::size_t>(d_->grid);
        }
        return x;
    }

    /// v_q(x) for mode position q.
    Complex eigenfunction(std::size_t q, const std::vector<double>& x) const {
        const auto& idx = d_->modes.at(q).index;
        if (d_->kind == BasisKind::dirichlet_sine) return std::sqrt(2.0 / pi) * std::sin(idx[0] * x.at(0));
        double phase = 0.0;
        for (int ax = 0; ax < d_->dimension; ++ax) phase += idx[ax] * x.at(ax);
        return std::pow(2.0 * pi, -0.5 * d_->dimension) * Complex(std::cos(phase), std::sin(phase));
    }

    /// Coefficients g_n = (u, v_n) of grid samples via FFT/DST.
    CoefficientVector analyze(const std::vector<double>& samples) const {
        if (samples.size() != grid_points()) {
            std::ostringstream os;
            os << "analyze: expected " << grid_points() << " grid samples, got " << samples.size();
            throw ConfigError(os.str());
        }
        CoefficientVector out{d_, std::vector<Complex>(d_->modes.size())};
        if (d_->kind == BasisKind::dirichlet_sine) {
            const int n = d_->grid - 1;
            detail::FftwBuffer<double> in(n), res(n);
            std::copy(samples.begin() + 1, samples.begin() + 1 + n, in.ptr);
            detail::run_plan([&] { return fftw_plan_r2r_1d(n, in.ptr, res.ptr, FFTW_RODFT00, FFTW_ESTIMATE); });
            const double scale = 0.5 * (pi / d_->grid) * std::sqrt(2.0 / pi);
            for (std::size_t q = 0; q < d_->modes.size(); ++q) out.values[q] = scale * res.ptr[d_->transform_index[q]];
            return out;
        }
        std::vector<Complex> z(samples.begin(), samples.end());
        return analyze(z);
    }

    /// Coefficients of complex torus samples.
    CoefficientVector analyze(const std::vector<Complex>& samples) const {
        if (d_->kind != BasisKind::torus) throw ConfigError("analyze: complex samples need a torus basis");
        if (samples.size() != grid_points()) {
            std::ostringstream os;
            os << "analyze: expected " << grid_points() << " grid samples, got " << samples.size();
            throw ConfigError(os.str());
        }
        CoefficientVector out{d_, std::vector<Complex>(d_->modes.size())};
        const std::size_t total = grid_points();
        detail::FftwBuffer<fftw_complex> buf(total);
        for (std::size_t i = 0; i < total; ++i) {
            buf.ptr[i][0] = samples[i].real();
            buf.ptr[i][1] = samples[i].imag();
        }
        std::vector<int> dims(d_->dimension, d_->grid);
        detail::run_plan([&] {
            return fftw_plan_dft(d_->dimension, dims.data(), buf.ptr, buf.ptr, FFTW_FORWARD, FFTW_ESTIMATE);
        });
        const double scale = std::pow(2.0 * pi, 0.5 * d_->dimension) / static_cast<double>(total);
        for (std::size_t q = 0; q < d_->modes.size(); ++q) {
            const auto& c = buf.ptr[d_->transform_index[q]];
            out.values[q] = scale * Complex(c[0], c[1]);
        }
        return out;
    }

    /// Series values sum_n g_n v_n on the grid.
    GridSamples synthesize(const CoefficientVector& g) const {
        check(g);
        GridSamples out;
        out.values.assign(grid_points(), 0.0);
        if (d_->kind == BasisKind::dirichlet_sine) {
            const int n = d_->grid - 1;
            detail::FftwBuffer<double> in(n), res(n);
            std::fill(in.ptr, in.ptr + n, 0.0);
            for (std::size_t q = 0; q < d_->modes.size(); ++q) {
                in.ptr[d_->transform_index[q]] = g.values[q].real();
                out.max_imag = std::max(out.max_imag, std::abs(g.values[q].imag()));
            }
            detail::run_plan([&] { return fftw_plan_r2r_1d(n, in.ptr, res.ptr, FFTW_RODFT00, FFTW_ESTIMATE); });
            const double scale = 0.5 * std::sqrt(2.0 / pi);
            for (int j = 0; j < n; ++j) out.values[j + 1] = scale * res.ptr[j];
            return out;
        }
        const auto z = synthesize_complex(g);
        for (std::size_t i = 0; i < z.size(); ++i) {
            out.values[i] = z[i].real();
            out.max_imag = std::max(out.max_imag, std::abs(z[i].imag()));
        }
        return out;
    }

    /// Complex series values on the torus grid.
    std::vector<Complex> synthesize_complex(const CoefficientVector& g) const {
        check(g);
        if (d_->kind != BasisKind::torus) throw ConfigError("synthesize_complex: needs a torus basis");
        const std::size_t total = grid_points();
        detail::FftwBuffer<fftw_complex> buf(total);
        for (std::size_t i = 0; i < total; ++i) buf.ptr[i][0] = buf.ptr[i][1] = 0.0;
        for (std::size_t q = 0; q < d_->modes.size(); ++q) {
            auto& c = buf.ptr[d_->transform_index[q]];
            c[0] = g.values[q].real();
            c[1] = g.values[q].imag();
        }
        std::vector<int> dims(d_->dimension, d_->grid);
        detail::run_plan([&] {
            return fftw_plan_dft(d_->dimension, dims.data(), buf.ptr, buf.ptr, FFTW_BACKWARD, FFTW_ESTIMATE);
        });
        const double scale = std::pow(2.0 * pi, -0.5 * d_->dimension);
        std::vector<Complex> out(total);
        for (std::size_t i = 0; i < total; ++i) out[i] = scale * Complex(buf.ptr[i][0], buf.ptr[i][1]);
        return out;
    }

    /// Pointwise series value sum_n g_n v_n(x); the real part for torus data.
    double evaluate(const CoefficientVector& g, const std::vector<double>& x) const {
        check(g);
        Complex s = 0.0;
        for (std::size_t q = 0; q < d_->modes.size(); ++q) {
            if (g.values[q] != 0.0) s += g.values[q] * eigenfunction(q, x);
        }
        return s.real();
    }

    /// Coefficients sampled from a function of the coordinates.
    template <class F>
    CoefficientVector analyze_function(F&& f) const {
        std::vector<double> s(grid_points());
        for (std::size_t i = 0; i < s.size(); ++i) s[i] = f(grid_coordinate(i));
        return analyze(s);
    }

    CoefficientVector zeros() const { return {d_, std::vector<Complex>(d_->modes.size())}; }

    /// max |g_{-n} - conj(g_n)|: zero for coefficients of real data.
    double hermitian_defect(const CoefficientVector& g) const {
        check(g);
        if (d_->kind == BasisKind::dirichlet_sine) {
            double m = 0.0;
            for (const auto& v : g.values) m = std::max(m, std::abs(v.imag()));
            return m;
        }
        double m = 0.0;
        for (std::size_t q = 0; q < d_->modes.size(); ++q) {
            MultiIndex neg = d_->modes[q].index;
            for (int& v : neg) v = -v;
            const auto p = find(neg);
            m = std::max(m, std::abs(g.values[*p] - std::conj(g.values[q])));
        }
        return m;
    }

    void check(const CoefficientVector& g) const {
        if (g.basis != d_ && g.basis && (g.basis->kind != d_->kind || g.basis->cutoff != d_->cutoff ||
                                         g.basis->dimension != d_->dimension)) {
            throw ConfigError("coefficient vector belongs to a different basis");
        }
        if (g.values.size() != d_->modes.size()) throw ConfigError("coefficient vector has the wrong length");
    }

private:
    explicit SpectralBasis(std::shared_ptr<const detail::BasisData> d) : d_(std::move(d)) {}
    std::shared_ptr<const detail::BasisData> d_;
};

namespace detail {

inline double norm2_index(const MultiIndex& n) {
    double s = 0.0;
    for (int v : n) s += static_cast<double>(v) * v;
    return s;
}

}  // namespace detail

/// ||g||_{L2^a} = sqrt(sum (1 + |n|^2)^a |g_n|^2).
inline double sobolev_norm(const CoefficientVector& g, double a) {
    if (!g.basis) throw ConfigError("sobolev_norm: coefficients carry no basis");
    double s = 0.0;
    for (std::size_t q = 0; q < g.values.size(); ++q) {
        const double w = std::pow(1.0 + detail::norm2_index(g.basis->modes[q].index), a);
        s += w * std::norm(g.values[q]);
    }
    return std::sqrt(s);
}

/// Truncated operator-power sum and the threshold verdict tau m > N/2.
struct MembershipReport {
    double sum = 0.0;              // sum lambda_n^(2 tau) |g_n|^2 over the cutoff
    double threshold = 0.0;        // N / (2m)
    bool hypothesis_holds = false; // tau > N / (2m)
    std::vector<double> shell_mass;  // contribution of each shell |n|_inf = s (sine: k = s), s = 0..K
    double last_shell_mass = 0.0;
    bool last_shell_nondecreasing = false;  // last shell mass above rounding level and >= previous shell mass
    std::string note;
};

inline MembershipReport domain_membership(const CoefficientVector& g, double tau, std::optional<int> order = std::nullopt) {
    if (!(tau > 0.0)) throw DomainError("domain_membership: tau must be positive");
    if (!g.basis) throw ConfigError("domain_membership: coefficients carry no basis");
    const auto& b = *g.basis;
    const int m = order.value_or(b.order);
    MembershipReport r;
    r.threshold = static_cast<double>(b.dimension) / (2.0 * m);
    r.hypothesis_holds = tau > r.threshold;
    r.shell_mass.assign(static_cast<std::size_t>(b.cutoff) + 1, 0.0);
    for (std::size_t q = 0; q < g.values.size(); ++q) {
        const auto& mode = b.modes[q];
        const double lam = mode.lambda;
        const double term = lam == 0.0 ? 0.0 : std::pow(lam, 2.0 * tau) * std::norm(g.values[q]);
        int shell = 0;
        for (int v : mode.index) shell = std::max(shell, std::abs(v));
        r.shell_mass[static_cast<std::size_t>(shell)] += term;
        r.sum += term;
    }
    r.last_shell_mass = r.shell_mass.back();
    if (r.shell_mass.size() >= 2) {
        // shells holding only rounding residue of band-limited data do not count
        const bool significant = r.last_shell_mass > 1e-24 * r.sum;
        r.last_shell_nondecreasing = significant && r.last_shell_mass >= r.shell_mass[r.shell_mass.size() - 2];
    }
    std::ostringstream os;
    os << "finite at cutoff K = " << b.cutoff << "; last-shell mass " << r.last_shell_mass;
    if (!r.hypothesis_holds) os << "; tau = " << tau << " does not exceed N/(2m) = " << r.threshold;
    r.note = os.str();
    return r;
}

struct EquivalenceConstants {
    int cutoff = 0;
    double c1 = 0.0;
    double c2 = 0.0;
};

/// min and max of (1 + A(n)^(2 tau)) / (1 + |n|^2)^(tau m) over |n|_inf <= K.
inline EquivalenceConstants equivalence_constants(const EllipticSymbol& sym, double tau, int cutoff) {
    if (!(tau > 0.0)) throw DomainError("equivalence_constants: tau must be positive");
    if (cutoff < 0) throw DomainError("equivalence_constants: cutoff must be >= 0");
    const int N = sym.dimension();
    const double tm = tau * sym.order();
    EquivalenceConstants r{cutoff, std::numeric_limits<double>::infinity(), 0.0};
    MultiIndex n(N, -cutoff);
    for (;;) {
        const double a = sym(n);
        const double ratio = (1.0 + std::pow(a, 2.0 * tau)) / std::pow(1.0 + detail::norm2_index(n), tm);
        r.c1 = std::min(r.c1, ratio);
        r.c2 = std::max(r.c2, ratio);
        int ax = N - 1;
        while (ax >= 0 && n[ax] == cutoff) n[ax--] = -cutoff;
        if (ax < 0) break;
        ++n[ax];
    }
    return r;
}

inline std::vector<EquivalenceConstants> equivalence_constants_sequence(const EllipticSymbol& sym, double tau,
                                                                        const std::vector<int>& cutoffs) {
    std::vector<EquivalenceConstants> out;
    out.reserve(cutoffs.size());
    for (int k : cutoffs) out.push_back(equivalence_constants(sym, tau, k));
    return out;
}

/// ||A^tau g||^2 + ||g||^2 = sum (1 + A(n)^(2 tau)) |g_n|^2.
inline double graph_norm_squared(const CoefficientVector& g, double tau) {
    if (!g.basis) throw ConfigError("graph_norm_squared: coefficients carry no basis");
    double s = 0.0;
    for (std::size_t q = 0; q < g.values.size(); ++q) {
        const double lam = g.basis->modes[q].lambda;
        s += (1.0 + (lam == 0.0 ? 0.0 : std::pow(lam, 2.0 * tau))) * std::norm(g.values[q]);
    }
    return s;
}

}  // namespace subfrac::bases
