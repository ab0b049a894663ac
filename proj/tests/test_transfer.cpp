#include <gtest/gtest.h>

#include <random>

#include "tcalg/hardy.hpp"
#include "tcalg/tmbasis.hpp"
#include "tcalg/transfer.hpp"
#include "test_products.hpp"

namespace {

using namespace tcalg;
using tcalg::testing::test_products;

cplx one(cplx) { return 1.0; }
cplx ident(cplx z) { return z; }

FourierSymbol random_symbol(std::mt19937_64& rng, int band, bool analytic) {
    std::uniform_real_distribution<double> u(-1, 1);
    FourierSymbol f(band);
    for (int k = analytic ? 0 : -band; k <= band; ++k) f[k] = cplx(u(rng), u(rng));
    return f;
}

TEST(ApplyPointwise, Examples) {
    for (const auto& [name, b] : test_products()) {
        const TransferOperator op(b);
        for (double t : {0.0, 1.3, 4.0}) {
            const cplx w = unit(t);
            EXPECT_NEAR(std::abs(apply_pointwise(op, one, w) - 1.0), 0.0, 1e-12) << name;
            for (int l = 1; l <= 3; ++l) {
                const auto rl = [&](cplx z) { return std::pow(b(z), l); };
                EXPECT_NEAR(std::abs(apply_pointwise(op, rl, w) - std::pow(w, l)), 0.0, 1e-11) << name;
            }
        }
    }
    const TransferOperator sq(BlaschkeProduct::monomial(2));
    EXPECT_NEAR(std::abs(apply_pointwise(sq, ident, unit(0.4))), 0.0, 1e-15);
}

TEST(PartialFractionWeights, Examples) {
    const auto w2 = partial_fraction_weights(BlaschkeProduct::monomial(2), 1.0);
    ASSERT_EQ(w2.weights.size(), 2u);
    for (double v : w2.weights) EXPECT_NEAR(v, 0.5, 1e-15);

    const auto w5 = partial_fraction_weights(BlaschkeProduct::monomial(5), unit(2.2));
    for (double v : w5.weights) EXPECT_NEAR(v, 0.2, 1e-14);

    // Preimages of 1 are sorted by argument: 1 first, then -1.
    const auto half = partial_fraction_weights(make_blaschke(1.0, {0.0, 0.5}), 1.0);
    ASSERT_EQ(half.weights.size(), 2u);
    EXPECT_NEAR(std::abs(half.preimages.points[0] - 1.0), 0.0, 1e-12);
    EXPECT_NEAR(half.weights[0], 0.25, 1e-12);
    EXPECT_NEAR(half.weights[1], 0.75, 1e-12);
}

TEST(PartialFractionWeights, SumToOneAndPositive) {
    for (const auto& [name, b] : test_products()) {
        for (int j = 0; j < 256; ++j) {
            const auto pf = partial_fraction_weights(b, unit(two_pi * j / 256.0));
            double s = 0.0;
            for (double v : pf.weights) {
                EXPECT_GT(v, 0.0);
                s += v;
            }
            EXPECT_NEAR(s, 1.0, 1e-10) << name << " node " << j;
        }
    }
}

TEST(CovarianceCheck, Examples) {
    const TransferOperator sq(BlaschkeProduct::monomial(2));
    EXPECT_EQ(covariance_check(sq, one, ident, unit(0.3)), 0.0);
    EXPECT_NEAR(covariance_check(sq, ident, one, unit(0.3)), 0.0, 1e-15);
    const TransferOperator rnd(tcalg::testing::random_degree3());
    for (double t : {0.0, 0.7, 3.0, 5.5}) {
        EXPECT_LE(covariance_check(rnd, [](cplx z) { return z * z; }, ident, unit(t)), 1e-10);
    }
}

TEST(CovarianceCheck, TrigonometricPolynomials) {
    std::mt19937_64 rng(11);
    for (const auto& [name, b] : test_products()) {
        const TransferOperator op(b);
        for (int t = 0; t < 5; ++t) {
            const auto f = random_symbol(rng, 8, false);
            const auto g = random_symbol(rng, 8, false);
            for (int j = 0; j < 16; ++j) {
                const cplx w = unit(two_pi * (j + 0.37) / 16.0);
                EXPECT_LE(covariance_check(op, f, g, w), 1e-10) << name;
            }
        }
    }
}

TEST(BimoduleInner, Examples) {
    for (const auto& [name, b] : test_products()) {
        const TransferOperator op(b);
        const double c = 1.0 / std::sqrt(static_cast<double>(b.degree()));
        const auto constant = [c](cplx) { return cplx(c); };
        EXPECT_NEAR(std::abs(bimodule_inner(op, constant, constant, unit(1.0)) - 1.0), 0.0, 1e-12) << name;
        for (int k = 1; k <= b.degree(); ++k) {
            const auto v = basis_section(b, k);
            for (double t : {0.0, 2.5}) {
                EXPECT_NEAR(std::abs(bimodule_inner(op, v, v, unit(t)) - 1.0), 0.0, 1e-10) << name << " k=" << k;
            }
        }
    }
    const TransferOperator sq(BlaschkeProduct::monomial(2));
    EXPECT_NEAR(std::abs(bimodule_inner(sq, one, ident, unit(0.9))), 0.0, 1e-15);
}

TEST(BimoduleInner, GridMatchesPointwise) {
    const auto b = tcalg::testing::random_degree3();
    const CircleGrid grid(64);
    const auto table = make_preimage_table(b, grid);
    const auto p = [](cplx z) { return 1.0 + 0.5 * z; };
    const auto q = [](cplx z) { return z * z - 0.2; };
    const auto values = bimodule_inner_on_grid(table, p, q);
    const TransferOperator op(b);
    for (std::size_t j = 0; j < grid.size(); ++j)
        EXPECT_NEAR(std::abs(values[j] - bimodule_inner(op, p, q, grid.node(j))), 0.0, 1e-12);
}

TEST(TransferMatrix, MonomialExamples) {
    const CircleGrid grid(64);
    const auto l2 = transfer_matrix(TransferOperator(BlaschkeProduct::monomial(2)), 4, grid);
    EXPECT_EQ(l2.label, "L_R");
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) EXPECT_NEAR(std::abs(l2.entries(i, j) - (j == 2 * i ? 1.0 : 0.0)), 0.0, 1e-14);

    const auto l3 = transfer_matrix(TransferOperator(BlaschkeProduct::monomial(3)), 16, grid);
    for (int i = 0; i < 16; ++i)
        for (int j = 0; j < 16; ++j) EXPECT_NEAR(std::abs(l3.entries(i, j) - (j == 3 * i ? 1.0 : 0.0)), 0.0, 1e-14);
}

TEST(TransferMatrix, RejectsUnguardedSize) {
    EXPECT_THROW(transfer_matrix(TransferOperator(BlaschkeProduct::monomial(2)), 32, CircleGrid(64)), DomainError);
}

TEST(TransferMatrix, AdjointOfComposition) {
    const CircleGrid grid(4096);
    for (const auto& [name, b] : test_products()) {
        const auto l = transfer_matrix(TransferOperator(b), 32, grid);
        const auto c = composition_matrix(b, 32, grid);
        const Matrix diff = l.entries - c.entries.adjoint();
        EXPECT_LE(diff.cwiseAbs().maxCoeff(), 1e-8) << name;
    }
}

TEST(TransferProperties, PositivityAndHardyInvariance) {
    std::mt19937_64 rng(12);
    const CircleGrid grid(256);
    for (const auto& [name, b] : test_products()) {
        const auto table = make_preimage_table(b, grid);
        for (int t = 0; t < 4; ++t) {
            const auto p = random_symbol(rng, 6, false);
            const auto values = apply_on_grid(table, [&](cplx z) { return cplx(std::norm(p(z))); });
            for (cplx v : values) {
                EXPECT_GE(v.real(), -1e-12) << name;
                EXPECT_NEAR(v.imag(), 0.0, 1e-12) << name;
            }
            const auto f = random_symbol(rng, 8, true);
            const auto image = fourier_coefficients(apply_on_grid(table, f));
            for (int k = 1; k < 128; ++k) EXPECT_LE(std::abs(image(-k)), 1e-10) << name << " k=" << k;
        }
    }
}

TEST(ImageSymbol, MonomialClosedFormMatchesPreimageSums) {
    std::mt19937_64 rng(13);
    const CircleGrid grid(256);
    for (int n : {2, 3, 4}) {
        for (double angle : {0.0, 1.1}) {
            const auto b = BlaschkeProduct::monomial(n, unit(angle));
            const auto a = random_symbol(rng, 8, false);
            const auto closed = image_symbol(TransferOperator(b), a, grid);
            const auto table = make_preimage_table(b, grid);
            const auto sums = fourier_coefficients(apply_on_grid(table, a));
            for (int k = -10; k <= 10; ++k) EXPECT_NEAR(std::abs(closed(k) - sums(k)), 0.0, 1e-12) << n;
        }
    }
}

} // namespace
