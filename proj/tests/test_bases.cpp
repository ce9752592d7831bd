#include "oracles.hpp"
#include "subfrac/bases.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace subfrac;
using bases::Complex;
using bases::EllipticSymbol;
using bases::MultiIndex;
using bases::SpectralBasis;

namespace {

constexpr double pi = bases::pi;

// n1^4 + 2 n1^2 n2^2 + 3 n2^4 written as sum a_alpha (i n)^alpha
EllipticSymbol mixed_symbol() {
    return EllipticSymbol(2, 4, {{{4, 0}, 1.0}, {{2, 2}, 2.0}, {{0, 4}, 3.0}});
}

bases::CoefficientVector random_hermitian(const SpectralBasis& b, std::mt19937_64& rng, int band) {
    std::normal_distribution<double> G;
    auto g = b.zeros();
    for (std::size_t q = 0; q < b.mode_count(); ++q) {
        const auto& n = b.modes()[q].index;
        int s = 0;
        for (int v : n) s = std::max(s, std::abs(v));
        if (s > band) continue;
        MultiIndex neg = n;
        for (int& v : neg) v = -v;
        const auto p = *b.find(neg);
        if (p < q) continue;
        if (p == q) {
            g.values[q] = G(rng);
        } else {
            g.values[q] = Complex(G(rng), G(rng));
            g.values[p] = std::conj(g.values[q]);
        }
    }
    return g;
}

double grid_l2_squared(const SpectralBasis& b, const std::vector<double>& u) {
    const double w = std::pow(b.grid_step(), b.dimension());
    double s = 0.0;
    for (double v : u) s += w * v * v;
    return s;
}

double max_abs_diff(const std::vector<Complex>& a, const std::vector<Complex>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace

TEST(Symbol, Examples) {
    EXPECT_EQ(bases::symbol_eval(EllipticSymbol::laplacian(2), {3, 4}), 25.0);
    EXPECT_EQ(bases::symbol_eval(EllipticSymbol::biharmonic(2), {1, 2}), 25.0);
    const auto mixed = mixed_symbol();
    EXPECT_EQ(bases::symbol_eval(mixed, {1, 1}), 6.0);
    // brute force: sum a_alpha prod (i n_j)^alpha_j in complex arithmetic
    for (int a = -4; a <= 4; ++a) {
        for (int b = -4; b <= 4; ++b) {
            Complex s = 0.0;
            const std::vector<std::pair<std::array<int, 2>, double>> terms{{{4, 0}, 1.0}, {{2, 2}, 2.0}, {{0, 4}, 3.0}};
            for (const auto& [alpha, c] : terms) {
                s += c * std::pow(Complex(0.0, a), alpha[0]) * std::pow(Complex(0.0, b), alpha[1]);
            }
            EXPECT_NEAR(bases::symbol_eval(mixed, {a, b}), s.real(), 1e-9);
            EXPECT_NEAR(mixed.complex_value({a, b}).imag(), 0.0, 1e-12);
        }
    }
    EXPECT_EQ(bases::symbol_eval(mixed, {0, 0}), 0.0);
}

TEST(Symbol, Validation) {
    EXPECT_THROW(EllipticSymbol(1, 3, {{{3}, 1.0}}), ConfigError);
    EXPECT_THROW(EllipticSymbol(1, 2, {{{2}, 1.0}}), ConfigError);  // A(n) = -n^2
    EXPECT_THROW(EllipticSymbol(2, 2, {{{2, 0}, -1.0}}), ConfigError);  // vanishes on n = (0, 1)
    EXPECT_THROW(EllipticSymbol(2, 2, {{{1, 0}, -1.0}}), ConfigError);  // |alpha| != m
    EXPECT_THROW(EllipticSymbol(2, 2, {{{2, 0, 0}, -1.0}}), ConfigError);
    EXPECT_NO_THROW(EllipticSymbol(2, 2, {{{2, 0}, -1.0}, {{1, 1}, -0.5}, {{0, 2}, -1.0}}));
}

TEST(Analyze, SingleTorusMode) {
    const auto b = SpectralBasis::torus(EllipticSymbol::laplacian(1), 5);
    const auto g = b.analyze_function([](const std::vector<double>& x) { return std::cos(3.0 * x[0]); });
    std::vector<Complex> z(b.grid_points());
    for (std::size_t i = 0; i < z.size(); ++i) z[i] = std::exp(Complex(0.0, 3.0 * b.grid_coordinate(i)[0]));
    const auto e = b.analyze(z);
    for (std::size_t q = 0; q < b.mode_count(); ++q) {
        const int n = b.modes()[q].index[0];
        EXPECT_NEAR(std::abs(e.values[q] - (n == 3 ? std::sqrt(2.0 * pi) : 0.0)), 0.0, 1e-13) << "n " << n;
        EXPECT_NEAR(std::abs(g.values[q] - (std::abs(n) == 3 ? 0.5 * std::sqrt(2.0 * pi) : 0.0)), 0.0, 1e-13);
    }
}

TEST(Analyze, SingleSineMode) {
    const auto b = SpectralBasis::dirichlet_sine(6);
    const auto g =
        b.analyze_function([](const std::vector<double>& x) { return std::sqrt(2.0 / pi) * std::sin(2.0 * x[0]); });
    for (std::size_t q = 0; q < b.mode_count(); ++q) {
        EXPECT_NEAR(g.values[q].real(), q == 1 ? 1.0 : 0.0, 1e-13);
        EXPECT_EQ(g.values[q].imag(), 0.0);
    }
}

TEST(Analyze, CosineOfSumHasConjugatePair) {
    const auto b = SpectralBasis::torus(EllipticSymbol::laplacian(2), 3);
    const auto g = b.analyze_function([](const std::vector<double>& x) { return std::cos(x[0] + x[1]); });
    const auto p = *b.find({1, 1});
    const auto m = *b.find({-1, -1});
    EXPECT_NEAR(std::abs(g.values[p] - std::conj(g.values[m])), 0.0, 1e-14);
    EXPECT_NEAR(g.values[p].real(), pi, 1e-13);  // (2 pi)^(N/2) / 2
    for (std::size_t q = 0; q < b.mode_count(); ++q) {
        if (q != p && q != m) {
            EXPECT_LT(std::abs(g.values[q]), 1e-13);
        }
    }
    EXPECT_LT(b.hermitian_defect(g), 1e-14);
}

TEST(Analyze, RoundTrips) {
    std::mt19937_64 rng(3);
    for (int N : {1, 2, 3}) {
        const int K = N == 3 ? 3 : 6;
        const auto b = SpectralBasis::torus(EllipticSymbol::laplacian(N), K);
        const auto g = random_hermitian(b, rng, K);
        const auto u = b.synthesize(g);
        EXPECT_LT(u.max_imag, 1e-12);
        EXPECT_LT(max_abs_diff(b.analyze(u.values).values, g.values), 1e-12) << "N " << N;
        const auto u2 = b.synthesize(b.analyze(u.values));
        for (std::size_t i = 0; i < u.values.size(); ++i) EXPECT_NEAR(u2.values[i], u.values[i], 1e-12);
    }
    const auto s = SpectralBasis::dirichlet_sine(12);
    std::normal_distribution<double> G;
    auto g = s.zeros();
    for (auto& v : g.values) v = G(rng);
    const auto u = s.synthesize(g);
    EXPECT_EQ(u.values.front(), 0.0);
    EXPECT_EQ(u.values.back(), 0.0);
    EXPECT_LT(max_abs_diff(s.analyze(u.values).values, g.values), 1e-12);
}

TEST(Analyze, SynthesisMatchesPointwiseSeries) {
    std::mt19937_64 rng(5);
    const auto b = SpectralBasis::torus(EllipticSymbol::laplacian(2), 4);
    const auto g = random_hermitian(b, rng, 4);
    const auto u = b.synthesize(g);
    for (std::size_t i = 0; i < u.values.size(); i += 7) {
        EXPECT_NEAR(b.evaluate(g, b.grid_coordinate(i)), u.values[i], 1e-12);
    }
}

TEST(Analyze, Parseval) {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 5; ++trial) {
        const auto b = SpectralBasis::torus(EllipticSymbol::laplacian(2), 8);
        const auto g = random_hermitian(b, rng, 8);
        const auto u = b.synthesize(g).values;
        double c = 0.0;
        for (const auto& v : g.values) c += std::norm(v);
        EXPECT_NEAR(grid_l2_squared(b, u), c, 1e-10 * c);
    }
    const auto s = SpectralBasis::dirichlet_sine(20);
    std::normal_distribution<double> G;
    auto g = s.zeros();
    double c = 0.0;
    for (auto& v : g.values) {
        v = G(rng);
        c += std::norm(v);
    }
    EXPECT_NEAR(grid_l2_squared(s, s.synthesize(g).values), c, 1e-10 * c);
}

TEST(Analyze, GridTooCoarse) {
    EXPECT_THROW(SpectralBasis::torus(EllipticSymbol::laplacian(1), 8, 17), ConfigError);
    EXPECT_NO_THROW(SpectralBasis::torus(EllipticSymbol::laplacian(1), 8, 18));
    EXPECT_THROW(SpectralBasis::dirichlet_sine(8, 17), ConfigError);
    EXPECT_THROW(SpectralBasis::dirichlet_sine(8, 16), ConfigError);
    const auto b = SpectralBasis::torus(EllipticSymbol::laplacian(1), 4);
    EXPECT_THROW(b.analyze(std::vector<double>(b.grid_points() + 1)), ConfigError);
    const auto other = SpectralBasis::torus(EllipticSymbol::laplacian(1), 5);
    EXPECT_THROW(b.synthesize(other.zeros()), ConfigError);
}

TEST(Basis, GramMatrixIsIdentity) {
    for (const auto& b : {SpectralBasis::torus(EllipticSymbol::laplacian(2), 3), SpectralBasis::dirichlet_sine(10)}) {
        const double w = std::pow(b.grid_step(), b.dimension());
        double worst = 0.0;
        for (std::size_t p = 0; p < b.mode_count(); ++p) {
            for (std::size_t q = 0; q < b.mode_count(); ++q) {
                Complex s = 0.0;
                for (std::size_t i = 0; i < b.grid_points(); ++i) {
                    const auto x = b.grid_coordinate(i);
                    s += w * b.eigenfunction(p, x) * std::conj(b.eigenfunction(q, x));
                }
                worst = std::max(worst, std::abs(s - (p == q ? 1.0 : 0.0)));
            }
        }
        EXPECT_LE(worst, 1e-10);
    }
}

TEST(Basis, EigenRelationByExactDerivatives) {
    // u = cos(x1 + 2 x2) + sin(3 x2) - cos(2 x1) / 2 under d1^4 + 2 d1^2 d2^2 + 3 d2^4
    const auto b = SpectralBasis::torus(mixed_symbol(), 4);
    auto u = [](const std::vector<double>& x) { return std::cos(x[0] + 2 * x[1]) + std::sin(3 * x[1]) - 0.5 * std::cos(2 * x[0]); };
    auto Au = [](const std::vector<double>& x) {
        return 57.0 * std::cos(x[0] + 2 * x[1]) + 243.0 * std::sin(3 * x[1]) - 8.0 * std::cos(2 * x[0]);
    };
    auto g = b.analyze_function(u);
    for (std::size_t q = 0; q < b.mode_count(); ++q) g.values[q] *= b.modes()[q].lambda;
    const auto v = b.synthesize(g).values;
    for (std::size_t i = 0; i < v.size(); ++i) EXPECT_NEAR(v[i], Au(b.grid_coordinate(i)), 1e-10);

    const auto s = SpectralBasis::dirichlet_sine(8);
    auto h = s.analyze_function([](const std::vector<double>& x) { return std::sin(2 * x[0]) + 0.3 * std::sin(5 * x[0]); });
    for (std::size_t q = 0; q < s.mode_count(); ++q) h.values[q] *= s.modes()[q].lambda;
    const auto w = s.synthesize(h).values;
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double x = s.grid_coordinate(i)[0];
        EXPECT_NEAR(w[i], 4.0 * std::sin(2 * x) + 7.5 * std::sin(5 * x), 1e-10);
    }
}

TEST(Basis, TieOrderIsLexicographic) {
    const auto b = SpectralBasis::torus(EllipticSymbol::laplacian(2), 2);
    const auto low = b.lowest(5);
    EXPECT_EQ(low[0].index, (MultiIndex{0, 0}));
    const std::vector<MultiIndex> ones{{-1, 0}, {0, -1}, {0, 1}, {1, 0}};
    for (int i = 0; i < 4; ++i) {
        EXPECT_EQ(low[i + 1].index, ones[i]);
        EXPECT_EQ(low[i + 1].lambda, 1.0);
    }
    for (std::size_t q = 1; q < b.mode_count(); ++q) {
        const auto& a = b.modes()[q - 1];
        const auto& c = b.modes()[q];
        EXPECT_TRUE(a.lambda < c.lambda || (a.lambda == c.lambda && a.index < c.index));
    }
    const auto s = SpectralBasis::dirichlet_sine(5);
    for (int k = 1; k <= 5; ++k) EXPECT_EQ(s.modes()[k - 1].lambda, k * k);
    EXPECT_EQ(*b.find({1, -2}), *b.find({1, -2}));
    EXPECT_FALSE(b.find({3, 0}).has_value());
}

TEST(Sobolev, Examples) {
    const auto b = SpectralBasis::torus(EllipticSymbol::laplacian(3), 2);
    auto g = b.zeros();
    EXPECT_EQ(bases::sobolev_norm(g, 1.0), 0.0);
    g.values[*b.find({1, 0, 0})] = 1.0;
    EXPECT_NEAR(bases::sobolev_norm(g, 1.0), std::sqrt(2.0), 1e-15);

    const auto one = SpectralBasis::torus(EllipticSymbol::laplacian(1), 16);
    auto e = one.zeros();
    double direct = 0.0;
    for (std::size_t q = 0; q < one.mode_count(); ++q) {
        const int n = one.modes()[q].index[0];
        e.values[q] = std::exp(-std::abs(n));
        direct += std::pow(1.0 + n * n, 0.75) * std::exp(-2.0 * std::abs(n));
    }
    // 30-digit reference from a direct sum
    EXPECT_NEAR(bases::sobolev_norm(e, 0.75), 1.26982608847243733, 1e-14);
    EXPECT_NEAR(bases::sobolev_norm(e, 0.75), std::sqrt(direct), 1e-14);
}

TEST(Membership, SingleModeSum) {
    const auto b = SpectralBasis::torus(EllipticSymbol::laplacian(2), 4);
    auto g = b.zeros();
    g.values[*b.find({1, 2})] = Complex(0.3, -0.4);
    const auto r = bases::domain_membership(g, 0.8);
    EXPECT_NEAR(r.sum, std::pow(5.0, 1.6) * 0.25, 1e-14);
    EXPECT_TRUE(r.hypothesis_holds);
    EXPECT_EQ(r.threshold, 0.5);
    EXPECT_FALSE(r.last_shell_nondecreasing);
}

TEST(Membership, ThresholdVerdict) {
    const auto b = SpectralBasis::torus(EllipticSymbol::laplacian(3), 2);
    auto g = b.zeros();
    g.values[*b.find({0, 1, 0})] = 1.0;
    const auto r = bases::domain_membership(g, 0.7);
    EXPECT_FALSE(r.hypothesis_holds);  // 0.7 < 3/4
    EXPECT_NE(r.note.find("does not exceed"), std::string::npos);
    EXPECT_TRUE(bases::domain_membership(g, 0.76).hypothesis_holds);
    EXPECT_THROW(bases::domain_membership(g, 0.0), DomainError);
}

TEST(Membership, CriticalDecayKeepsShellMassGrowing) {
    // N = 1, m = 2: g_n = (1 + n^2)^(-s/2) gives shell mass 2 n^(4 tau) / (1 + n^2)^s,
    // nondecreasing exactly when tau m >= s.
    const auto b = SpectralBasis::torus(EllipticSymbol::laplacian(1), 32);
    const double s = 1.0;
    auto g = b.zeros();
    for (std::size_t q = 0; q < b.mode_count(); ++q) {
        const int n = b.modes()[q].index[0];
        g.values[q] = std::pow(1.0 + n * n, -s / 2);
    }
    const auto critical = bases::domain_membership(g, s / 2);
    EXPECT_TRUE(critical.last_shell_nondecreasing);
    for (std::size_t k = 1; k < critical.shell_mass.size(); ++k) {
        const double n = static_cast<double>(k);
        EXPECT_NEAR(critical.shell_mass[k], 2.0 * std::pow(n, 2.0 * s) / std::pow(1.0 + n * n, s), 1e-12);
    }
    EXPECT_FALSE(bases::domain_membership(g, 0.4 * s).last_shell_nondecreasing);
}

TEST(Membership, BandLimitedDataIsNotFlagged) {
    const auto b = SpectralBasis::torus(EllipticSymbol::laplacian(1), 8);
    const auto g = b.analyze_function([](const std::vector<double>& x) { return std::cos(2 * x[0]); });
    EXPECT_FALSE(bases::domain_membership(g, 1.0).last_shell_nondecreasing);
}

TEST(Equivalence, LaplacianExample) {
    for (int K : {1, 4, 16}) {
        const auto c = bases::equivalence_constants(EllipticSymbol::laplacian(1), 1.0, K);
        EXPECT_DOUBLE_EQ(c.c1, 0.5);
        EXPECT_DOUBLE_EQ(c.c2, 1.0);
    }
    EXPECT_THROW(bases::equivalence_constants(EllipticSymbol::laplacian(1), 0.0, 4), DomainError);
}

TEST(Equivalence, MatchesLatticeScan) {
    struct Case {
        EllipticSymbol sym;
        double tau;
        int K;
        std::function<double(int, int)> A;
    };
    const std::vector<Case> cases{
        {EllipticSymbol::biharmonic(2), 0.5, 32, [](int a, int b) { return std::pow(a * a + b * b, 2.0); }},
        {mixed_symbol(), 0.75, 16,
         [](int a, int b) { return std::pow(a, 4.0) + 2.0 * a * a * b * b + 3.0 * std::pow(b, 4.0); }}};
    for (const auto& c : cases) {
        double lo = 1e300, hi = 0.0;
        for (int a = -c.K; a <= c.K; ++a) {
            for (int b = -c.K; b <= c.K; ++b) {
                const double r = (1.0 + std::pow(c.A(a, b), 2.0 * c.tau)) / std::pow(1.0 + a * a + b * b, 4.0 * c.tau);
                lo = std::min(lo, r);
                hi = std::max(hi, r);
            }
        }
        const auto e = bases::equivalence_constants(c.sym, c.tau, c.K);
        EXPECT_NEAR(e.c1, lo, 1e-14 * lo);
        EXPECT_NEAR(e.c2, hi, 1e-14 * hi);
        EXPECT_GT(e.c1, 0.0);
    }
}

TEST(Equivalence, StabilizesWithCutoff) {
    const auto seq = bases::equivalence_constants_sequence(EllipticSymbol::laplacian(2), 1.0, {16, 32, 64});
    ASSERT_EQ(seq.size(), 3u);
    for (std::size_t i = 1; i < seq.size(); ++i) {
        EXPECT_LE(std::abs(seq[i].c1 - seq[i - 1].c1), 1e-3);
        EXPECT_LE(std::abs(seq[i].c2 - seq[i - 1].c2), 1e-3);
    }
}

TEST(Equivalence, NormSandwich) {
    std::mt19937_64 rng(23);
    std::normal_distribution<double> G;
    for (const auto& sym : {EllipticSymbol::laplacian(2), mixed_symbol()}) {
        const double tau = 0.75;
        const auto b = SpectralBasis::torus(sym, 6);
        const auto c = bases::equivalence_constants(sym, tau, 6);
        for (int trial = 0; trial < 100; ++trial) {
            auto g = b.zeros();
            for (auto& v : g.values) v = Complex(G(rng), G(rng)) * std::exp(-0.3 * trial * G(rng) * G(rng));
            const double s = std::pow(bases::sobolev_norm(g, tau * sym.order()), 2);
            const double graph = bases::graph_norm_squared(g, tau);
            EXPECT_LE(c.c1 * s, graph * (1 + 1e-13));
            EXPECT_LE(graph, c.c2 * s * (1 + 1e-13));
        }
    }
}
