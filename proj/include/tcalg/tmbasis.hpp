#pragma once

// Takenaka-Malmquist basis attached to R:
//   beta_{kn+l} = z_l, alpha_{kn+l} = lambda^k, and e_{kn+l} = Q_l R_l R^k,
// together with the isometries W_k = T_{Q_{k-1} R_{k-1}} C_R that satisfy the
// Cuntz relations, and the generator realization V_xi = sqrt(n) T_p C_R.

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "tcalg/blaschke.hpp"
#include "tcalg/circle.hpp"
#include "tcalg/hardy.hpp"
#include "tcalg/transfer.hpp"
#include "tcalg/truncated_operator.hpp"

namespace tcalg {

struct TMBasis {
    static constexpr int default_count = 32;

    BlaschkeProduct product;
    int count = default_count;

    TMBasis(BlaschkeProduct b, int l = default_count) : product(std::move(b)), count(l) {
        if (count < 1) throw DomainError("TM basis needs at least one element");
    }

    int degree() const noexcept { return product.degree(); }
    cplx alpha(int l) const { return std::pow(product.lambda(), l / degree()); }
    cplx beta(int l) const { return product.zeros()[static_cast<std::size_t>(l % degree())]; }
};

namespace detail {
inline cplx kernel_factor(cplx beta, cplx z) {
    const cplx den = 1.0 - std::conj(beta) * z;
    if (std::abs(den) < 1e-14) throw PoleError("TM element evaluated at a pole");
    return std::sqrt(1.0 - std::norm(beta)) / den;
}
} // namespace detail

/// e_l(z) from the product formula.
inline cplx tm_element(const TMBasis& basis, int l, cplx z) {
    if (l < 0) throw DomainError("TM index must be nonnegative");
    if (l == 0) return detail::kernel_factor(basis.beta(0), z);
    const cplx phase = basis.product.lambda() == cplx(1.0) ? cplx(1.0) : basis.alpha(l);
    cplx value = phase * detail::kernel_factor(basis.beta(l), z);
    for (int k = 0; k < l; ++k) {
        const cplx b = basis.beta(k);
        value *= (z - b) / (1.0 - std::conj(b) * z);
    }
    return value;
}

/// (Q_l(z), R_l(z)) for 0 <= l < n.
inline std::pair<cplx, cplx> factor_parts(const TMBasis& basis, int l, cplx z) {
    if (l < 0 || l >= basis.degree()) throw DomainError("factor index must lie in [0, n)");
    const cplx q = detail::kernel_factor(basis.beta(l), z);
    cplx r = 1.0;
    for (int k = 0; k < l; ++k) r *= basis.product.factor(static_cast<std::size_t>(k), z);
    return {q, r};
}

/// sup over the grid of |e_{kn+l} - Q_l R_l R^k|.
inline double factorization_residual(const TMBasis& basis, int k, int l, const CircleGrid& grid) {
    if (l < 0 || l >= basis.degree() || k < 0) throw DomainError("factorization_residual: bad (k, l)");
    const int index = k * basis.degree() + l;
    if (index >= basis.count) throw DomainError("factorization_residual: index beyond basis count");
    double sup = 0.0;
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const cplx z = grid.node(j);
        const auto [q, r] = factor_parts(basis, l, z);
        const cplx rhs = q * r * std::pow(basis.product(z), k);
        sup = std::max(sup, std::abs(tm_element(basis, index, z) - rhs));
    }
    return sup;
}

/// Samples of e_0..e_{count-1} on the grid.
inline std::vector<std::vector<cplx>> tm_samples(const TMBasis& basis, int count, const CircleGrid& grid) {
    std::vector<std::vector<cplx>> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int l = 0; l < count; ++l) out.push_back(sample([&](cplx z) { return tm_element(basis, l, z); }, grid));
    return out;
}

/// max_{i,j < count} |<e_i, e_j> - delta_ij| with quadrature inner products.
inline double gram_residual(const TMBasis& basis, int count, const CircleGrid& grid) {
    if (count < 1 || count > basis.count) throw DomainError("gram_residual: count outside basis");
    const auto e = tm_samples(basis, count, grid);
    double worst = 0.0;
    for (int i = 0; i < count; ++i) {
        for (int j = i; j < count; ++j) {
            const cplx g = l2_inner(e[static_cast<std::size_t>(i)], e[static_cast<std::size_t>(j)]);
            worst = std::max(worst, std::abs(g - (i == j ? 1.0 : 0.0)));
        }
    }
    return worst;
}

/// Coefficients of Q_l R_l. For R = lambda z^n this is z^l exactly.
inline FourierSymbol factor_symbol(const BlaschkeProduct& b, int l, const CircleGrid& grid) {
    if (b.is_monomial()) return FourierSymbol::monomial(l);
    const TMBasis basis(b, b.degree());
    return fourier_coefficients(sample(
        [&](cplx z) {
            const auto [q, r] = factor_parts(basis, l, z);
            return q * r;
        },
        grid));
}

/// W_1..W_n with W_k = T_{Q_{k-1} R_{k-1}} C_R; column l of W_k holds e_{ln+k-1}.
inline std::vector<TruncatedOperator> cuntz_family(const BlaschkeProduct& b, Eigen::Index size,
                                                   const CircleGrid& grid) {
    const auto c = composition_matrix(b, size, grid);
    std::vector<TruncatedOperator> out;
    out.reserve(static_cast<std::size_t>(b.degree()));
    for (int k = 1; k <= b.degree(); ++k) {
        const auto t = toeplitz_matrix(factor_symbol(b, k - 1, grid), size);
        out.emplace_back(t.entries * c.entries, "W_" + std::to_string(k));
    }
    return out;
}

struct ConsResidual {
    double completeness = 0.0;  // ||sum_k W_k W_k^* - I||
    double isometry = 0.0;      // max_k ||W_k^* W_k - I||
    double orthogonality = 0.0; // max_{k != j} ||W_k^* W_j||

    double worst() const noexcept { return std::max({completeness, isometry, orthogonality}); }
};

/// Cuntz relation residuals on the m x m corner.
inline ConsResidual cons_residual(const std::vector<TruncatedOperator>& w, Eigen::Index m) {
    if (w.empty()) throw DomainError("cons_residual: empty family");
    require_guarded_corner(w.front().dim(), m, "cons_residual");
    ConsResidual out;
    Matrix sum = -Matrix::Identity(m, m);
    for (const auto& wk : w) {
        const Matrix top = wk.entries.topRows(m);
        sum += top * top.adjoint();
    }
    out.completeness = operator_norm(sum).value;
    for (std::size_t k = 0; k < w.size(); ++k) {
        const Matrix ck = w[k].entries.leftCols(m);
        out.isometry = std::max(out.isometry, operator_norm(ck.adjoint() * ck - Matrix::Identity(m, m)).value);
        for (std::size_t j = 0; j < w.size(); ++j) {
            if (j == k) continue;
            const Matrix cj = w[j].entries.leftCols(m);
            out.orthogonality = std::max(out.orthogonality, operator_norm(ck.adjoint() * cj).value);
        }
    }
    return out;
}

struct QuotientGenerators {
    TruncatedOperator u; // T_z
    TruncatedOperator v; // C_R
    int degree = 0;

    /// V_xi = sqrt(n) T_p C_R for xi(z, R(z)) = p(z), p analytic.
    TruncatedOperator generator(const FourierSymbol& p) const {
        const auto t = toeplitz_matrix(p, v.dim());
        return TruncatedOperator(std::sqrt(static_cast<double>(degree)) * (t.entries * v.entries), "V_xi");
    }
};

inline QuotientGenerators quotient_generators(const BlaschkeProduct& b, Eigen::Index size, const CircleGrid& grid) {
    return {toeplitz_matrix(FourierSymbol::monomial(1), size, "T_z"), composition_matrix(b, size, grid), b.degree()};
}

/// The normalized section v_k(z, R(z)) = n^{-1/2} Q_{k-1}(z) R_{k-1}(z), k = 1..n.
inline auto basis_section(const BlaschkeProduct& b, int k) {
    if (k < 1 || k > b.degree()) throw DomainError("basis_section index must lie in [1, n]");
    return [basis = TMBasis(b, b.degree()), k](cplx z) {
        const auto [q, r] = factor_parts(basis, k - 1, z);
        return q * r / std::sqrt(static_cast<double>(basis.degree()));
    };
}

/// V_xi^* V_eta - T_{(xi|eta)_{A,h}} on the window x window block, where
/// xi(z, R(z)) = p(z) and eta(z, R(z)) = q(z) with p, q analytic. The inner
/// product symbol comes from preimage sums.
template <CircleFunction P, CircleFunction Q>
Matrix correspondence_residual(const BlaschkeProduct& b, const PreimageTable& table, const P& p, const Q& q,
                               Eigen::Index window) {
    const double n = static_cast<double>(b.degree());
    const Matrix vp = multiplier_columns(b, p, window, table.grid);
    const Matrix vq = multiplier_columns(b, q, window, table.grid);
    const auto inner = fourier_coefficients(bimodule_inner_on_grid(table, p, q));
    return n * (vp.adjoint() * vq) - toeplitz_corner(inner, window);
}

} // namespace tcalg
