#include <gtest/gtest.h>

#include <random>

#include "tcalg/blaschke.hpp"
#include "tcalg/circle.hpp"

namespace {

using namespace tcalg;

BlaschkeProduct half() { return make_blaschke(1.0, {0.0, 0.5}); }

/// Taylor coefficients of z (z - 0.5) / (1 - 0.5 z) from the geometric series.
std::vector<cplx> half_series(int count) {
    std::vector<cplx> geo(static_cast<std::size_t>(count), 0.0), out(static_cast<std::size_t>(count), 0.0);
    for (int m = 0; m < count; ++m) geo[static_cast<std::size_t>(m)] = std::pow(0.5, m);
    for (int k = 0; k < count; ++k) {
        if (k >= 2) out[static_cast<std::size_t>(k)] += geo[static_cast<std::size_t>(k - 2)];
        if (k >= 1) out[static_cast<std::size_t>(k)] -= 0.5 * geo[static_cast<std::size_t>(k - 1)];
    }
    return out;
}

TEST(CircleGrid, RejectsBadSizes) {
    EXPECT_THROW(CircleGrid(2), DomainError);
    EXPECT_THROW(CircleGrid(12), DomainError);
    EXPECT_NO_THROW(CircleGrid(4));
    const CircleGrid g(8);
    for (std::size_t j = 1; j < g.size(); ++j) EXPECT_LT(g.theta(j - 1), g.theta(j));
    EXPECT_LT(g.theta(7), two_pi);
}

TEST(Sample, Examples) {
    const CircleGrid g(4);
    for (cplx v : sample([](cplx) { return cplx(1.0); }, g)) EXPECT_EQ(v, cplx(1.0));
    const auto z = sample([](cplx x) { return x; }, g);
    const cplx expected[] = {1.0, cplx(0, 1), -1.0, cplx(0, -1)};
    for (int j = 0; j < 4; ++j) EXPECT_NEAR(std::abs(z[static_cast<std::size_t>(j)] - expected[j]), 0.0, 1e-15);
    const auto r = sample(half(), g);
    for (std::size_t j = 0; j < 4; ++j) EXPECT_EQ(r[j], half()(g.node(j)));
}

TEST(FourierCoefficients, Examples) {
    const CircleGrid g(8);
    const auto sq = fourier_coefficients(sample([](cplx z) { return z * z; }, g));
    for (int k = -3; k <= 4; ++k) EXPECT_NEAR(std::abs(sq(k) - (k == 2 ? 1.0 : 0.0)), 0.0, 1e-15) << k;

    const auto cosine = fourier_coefficients(sample([](cplx z) { return cplx(2.0 * z.real()); }, g));
    for (int k = -3; k <= 4; ++k)
        EXPECT_NEAR(std::abs(cosine(k) - (std::abs(k) == 1 ? 1.0 : 0.0)), 0.0, 1e-15) << k;

    const auto r = fourier_coefficients(sample(half(), CircleGrid(4096)));
    const auto oracle = half_series(60);
    EXPECT_NEAR(std::abs(r(1) - cplx(-0.5)), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(r(2) - cplx(0.75)), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(r(3) - cplx(0.375)), 0.0, 1e-14);
    for (int k = 0; k < 60; ++k) EXPECT_NEAR(std::abs(r(k) - oracle[static_cast<std::size_t>(k)]), 0.0, 1e-14);
    for (int k = 1; k < 100; ++k) EXPECT_NEAR(std::abs(r(-k)), 0.0, 1e-15);
}

TEST(FourierCoefficients, RejectsNonPowerOfTwo) {
    std::vector<cplx> s(12, 1.0);
    EXPECT_THROW(fourier_coefficients(s), DomainError);
}

TEST(L2Inner, Examples) {
    const CircleGrid g(8);
    const auto one = sample([](cplx) { return cplx(1.0); }, g);
    EXPECT_NEAR(std::abs(l2_inner(one, one) - 1.0), 0.0, 1e-15);
    const auto z = sample([](cplx x) { return x; }, g);
    const auto z2 = sample([](cplx x) { return x * x; }, g);
    EXPECT_NEAR(std::abs(l2_inner(z, z2)), 0.0, 1e-15);

    // e_1 of the basis for zeros [0, 0.5], written out directly.
    const auto e1 = sample([](cplx x) { return std::sqrt(0.75) * x / (1.0 - 0.5 * x); }, CircleGrid(4096));
    EXPECT_NEAR(std::abs(l2_inner(e1, e1) - 1.0), 0.0, 1e-10);

    std::vector<cplx> shorter(4, 1.0);
    EXPECT_THROW(l2_inner(one, shorter), DomainError);
}

TEST(L2Inner, LinearInFirstArgument) {
    const CircleGrid g(16);
    const auto z = sample([](cplx x) { return x; }, g);
    auto iz = z;
    for (cplx& v : iz) v *= cplx(0, 1);
    EXPECT_NEAR(std::abs(l2_inner(iz, z) - cplx(0, 1)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(l2_inner(z, iz) - cplx(0, -1)), 0.0, 1e-15);
}

TEST(Poisson, Examples) {
    EXPECT_NEAR(std::abs(poisson_extension(FourierSymbol::monomial(1), 0.5, 0.0) - 0.5), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(poisson_extension(FourierSymbol::monomial(0), 0.7, 2.0) - 1.0), 0.0, 1e-15);
    const auto r = fourier_coefficients(sample(half(), CircleGrid(4096)));
    const cplx inside = 0.9 * unit(pi / 3);
    EXPECT_NEAR(std::abs(poisson_extension(r, 0.9, pi / 3) - half()(inside)), 0.0, 1e-8);
    EXPECT_THROW(poisson_extension(r, 1.0, 0.0), DomainError);
}

TEST(CircleProperties, ParsevalAndSynthesisRoundTrip) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1, 1);
    const CircleGrid g(64);
    for (int t = 0; t < 20; ++t) {
        FourierSymbol f(20);
        for (int k = -20; k <= 20; ++k) f[k] = cplx(u(rng), u(rng));
        const auto s = synthesize(f, g);
        EXPECT_NEAR(l2_inner(s, s).real(), f.l2_norm_squared(), 1e-12 * f.l2_norm_squared());
        const auto back = fourier_coefficients(s);
        for (int k = -31; k <= 32; ++k) EXPECT_NEAR(std::abs(back(k) - f(k)), 0.0, 1e-14);
    }
}

TEST(CircleProperties, PoissonMatchesInteriorEvaluation) {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0, 1);
    const CircleGrid g(4096);
    for (int t = 0; t < 6; ++t) {
        std::vector<cplx> zeros{0.0};
        for (int k = 0; k < 2; ++k) zeros.push_back(std::polar(0.6 * std::sqrt(u(rng)), two_pi * u(rng)));
        const auto b = make_blaschke(unit(two_pi * u(rng)), zeros);
        const auto coeffs = fourier_coefficients(sample(b, g));
        for (double r : {0.0, 0.3, 0.8, 0.95}) {
            for (double theta : {0.1, 2.0, 4.5}) {
                EXPECT_NEAR(std::abs(poisson_extension(coeffs, r, theta) - b(r * unit(theta))), 0.0, 1e-8);
            }
        }
    }
}

TEST(FourierSymbol, ConjugateAndAnalyticity) {
    auto a = FourierSymbol::from_map({{-2, cplx(1, 2)}, {3, cplx(0, 1)}});
    EXPECT_FALSE(a.is_analytic());
    EXPECT_TRUE(FourierSymbol::monomial(3).is_analytic());
    const auto c = a.conjugate();
    EXPECT_EQ(c(2), cplx(1, -2));
    EXPECT_EQ(c(-3), cplx(0, -1));
    const cplx z = unit(0.77);
    EXPECT_NEAR(std::abs(c(z) - std::conj(a(z))), 0.0, 1e-14);
}

TEST(Aliasing, BoundDecaysWithGrid) {
    EXPECT_EQ(aliasing_bound(0.0, 4096), 0.0);
    EXPECT_LT(aliasing_bound(0.95, 4096), 1e-40);
    EXPECT_GT(aliasing_bound(0.95, 64), aliasing_bound(0.95, 4096));
}

} // namespace
