#pragma once

// Truncated matrix models of Toeplitz and composition operators on H^2(T)
// and residual norms for the operator identities between them.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "tcalg/blaschke.hpp"
#include "tcalg/circle.hpp"
#include "tcalg/transfer.hpp"
#include "tcalg/truncated_operator.hpp"

namespace tcalg {

/// Fraction of the truncation that must stay free below a tested corner:
/// a corner of size m is only meaningful for N - m >= 3N/4.
inline constexpr Eigen::Index guard_band_divisor = 4;

inline void require_guarded_corner(Eigen::Index n, Eigen::Index m, const char* who) {
    if (m < 1 || m * guard_band_divisor > n) {
        throw DomainError(std::string(who) + ": corner " + std::to_string(m) + " violates guard band for N = " +
                          std::to_string(n));
    }
}

/// Entries a_{i-j}; the exact compression of T_a.
inline TruncatedOperator toeplitz_matrix(const FourierSymbol& a, Eigen::Index size, std::string label = "T_a") {
    if (size < 1) throw DomainError("toeplitz_matrix needs N >= 1");
    Matrix m(size, size);
    for (Eigen::Index j = 0; j < size; ++j)
        for (Eigen::Index i = 0; i < size; ++i) m(i, j) = a(static_cast<int>(i - j));
    return TruncatedOperator(std::move(m), std::move(label));
}

/// Column m holds the Fourier coefficients 0..rows-1 of R^m, m = 0..N-1.
/// R = lambda z^n is placed exactly (R^m = lambda^m z^{nm}); other products
/// are sampled on the grid and transformed.
inline TruncatedOperator composition_matrix(const BlaschkeProduct& b, Eigen::Index size, const CircleGrid& grid,
                                            Eigen::Index rows = 0) {
    if (rows == 0) rows = size;
    if (size < 1 || static_cast<std::size_t>(size) * 4 > grid.size())
        throw DomainError("composition_matrix needs N <= M/4");
    if (rows < size || static_cast<std::size_t>(rows) * 2 > grid.size())
        throw DomainError("composition_matrix rows must lie in [N, M/2]");

    Matrix c = Matrix::Zero(rows, size);
    if (b.is_monomial()) {
        cplx phase = 1.0;
        for (Eigen::Index m = 0; m < size; ++m) {
            const Eigen::Index r = m * b.degree();
            if (r < rows) c(r, m) = phase;
            phase *= b.lambda();
        }
        return TruncatedOperator(std::move(c), "C_R");
    }

    const auto values = sample(b, grid);
    std::vector<cplx> power(grid.size(), 1.0);
    for (Eigen::Index m = 0; m < size; ++m) {
        const auto coeffs = dft_coefficients(power);
        for (Eigen::Index i = 0; i < rows; ++i) c(i, m) = coeffs[static_cast<std::size_t>(i)];
        for (std::size_t j = 0; j < power.size(); ++j) power[j] *= values[j];
    }
    return TruncatedOperator(std::move(c), "C_R");
}

/// ||(C^* C - I) restricted to the top-left m x m block||.
inline double isometry_residual(const TruncatedOperator& c, Eigen::Index m) {
    require_guarded_corner(c.dim(), m, "isometry_residual");
    const Matrix cols = c.entries.leftCols(m);
    const Matrix gram = cols.adjoint() * cols - Matrix::Identity(m, m);
    return operator_norm(gram).value;
}

/// Band limit accepted by the covariance test unless overridden.
inline constexpr int default_symbol_band = 8;

/// T_{L(a)} top-left corner from the coefficients of L(a).
inline Matrix toeplitz_corner(const FourierSymbol& a, Eigen::Index m) {
    Matrix t(m, m);
    for (Eigen::Index j = 0; j < m; ++j)
        for (Eigen::Index i = 0; i < m; ++i) t(i, j) = a(static_cast<int>(i - j));
    return t;
}

/// C^* T_a C - T_{L(a)} on the m x m corner, with prebuilt pieces.
inline Matrix covariance_block(const TruncatedOperator& c, const PreimageTable& table, const BlaschkeProduct& b,
                               const FourierSymbol& a, Eigen::Index m) {
    const Matrix cols = c.entries.leftCols(m);
    const Matrix ta = toeplitz_matrix(a, c.rows()).entries;
    const Matrix lhs = cols.adjoint() * (ta * cols);
    return lhs - toeplitz_corner(image_symbol(table, b, a), m);
}

inline double covariance_residual(const BlaschkeProduct& b, const FourierSymbol& a, Eigen::Index size, Eigen::Index m,
                                  const CircleGrid& grid, int max_band = default_symbol_band) {
    if (a.band() > max_band) throw DomainError("covariance_residual: symbol band exceeds limit");
    require_guarded_corner(size, m, "covariance_residual");
    const auto c = composition_matrix(b, size, grid);
    const auto table = symbol_table(b, grid);
    return operator_norm(covariance_block(c, table, b, a, m)).value;
}

/// Coefficients of b o R for an analytic symbol b.
inline FourierSymbol compose_symbol(const FourierSymbol& bsym, const BlaschkeProduct& r, const CircleGrid& grid) {
    if (r.is_monomial()) {
        FourierSymbol out(bsym.band() * r.degree());
        cplx phase = 1.0;
        for (int k = 0; k <= bsym.band(); ++k) {
            out[k * r.degree()] = bsym(k) * phase;
            phase *= r.lambda();
        }
        return out;
    }
    return fourier_coefficients(sample([&](cplx z) { return bsym(r(z)); }, grid));
}

/// C T_b - T_{b o R} C on the m x m corner.
inline Matrix commutation_block(const TruncatedOperator& c, const FourierSymbol& bsym, const FourierSymbol& composed,
                                Eigen::Index m) {
    const Eigen::Index rows = c.rows();
    const Matrix tb = toeplitz_matrix(bsym, c.dim()).entries;
    const Matrix lhs = (c.entries * tb.leftCols(m)).topRows(m);
    const Matrix rhs = (toeplitz_matrix(composed, rows).entries.topRows(m)) * c.entries.leftCols(m);
    return lhs - rhs;
}

inline double commutation_residual(const BlaschkeProduct& r, const FourierSymbol& bsym, Eigen::Index size,
                                   Eigen::Index m, const CircleGrid& grid) {
    if (!bsym.is_analytic()) throw DomainError("commutation_residual needs an analytic symbol");
    require_guarded_corner(size, m, "commutation_residual");
    const auto c = composition_matrix(r, size, grid);
    return operator_norm(commutation_block(c, bsym, compose_symbol(bsym, r, grid), m)).value;
}

/// Columns 0..cols-1 of T_a C_R with rows up to the grid's Nyquist index:
/// column l holds the nonnegative coefficients of a R^l, since T_a f = P(a f).
/// Products of these blocks equal compressions of operator products up to
/// aliasing, independent of how far R^l spreads in frequency.
template <CircleFunction A>
Matrix multiplier_columns(const BlaschkeProduct& b, const A& a, Eigen::Index cols, const CircleGrid& grid) {
    const Eigen::Index rows = static_cast<Eigen::Index>(grid.size() / 2);
    if (cols < 1 || cols > rows) throw DomainError("multiplier_columns: bad column count");
    const auto rv = sample(b, grid);
    auto column = sample(a, grid);
    Matrix out(rows, cols);
    for (Eigen::Index l = 0; l < cols; ++l) {
        const auto coeffs = dft_coefficients(column);
        for (Eigen::Index i = 0; i < rows; ++i) out(i, l) = coeffs[static_cast<std::size_t>(i)];
        for (std::size_t j = 0; j < column.size(); ++j) column[j] *= rv[j];
    }
    return out;
}

/// C^* T_a C - T_{L(a)} on a window x window block, assembled from
/// Nyquist-height column blocks rather than the square compression.
inline Matrix covariance_window(const BlaschkeProduct& b, const PreimageTable& table, const FourierSymbol& a,
                                Eigen::Index window) {
    const Matrix c = multiplier_columns(b, [](cplx) { return cplx(1.0); }, window, table.grid);
    const Matrix tac = multiplier_columns(b, a, window, table.grid);
    return c.adjoint() * tac - toeplitz_corner(image_symbol(table, b, a), window);
}

/// Norms of the corners P_m^perp X P_m^perp for increasing cuts m.
/// Nonincreasing in m by construction; decay towards zero witnesses compactness.
inline std::vector<double> tail_compactness_profile(const Matrix& residual, std::span<const Eigen::Index> cuts) {
    const Eigen::Index dim = std::min(residual.rows(), residual.cols());
    std::vector<double> out;
    out.reserve(cuts.size());
    Eigen::Index prev = -1;
    for (Eigen::Index cut : cuts) {
        if (cut <= prev || cut < 0) throw DomainError("tail profile cuts must be strictly increasing");
        if (2 * cut > dim) throw DomainError("tail profile cut beyond half the window");
        prev = cut;
        out.push_back(operator_norm(residual.bottomRightCorner(dim - cut, dim - cut)).value);
    }
    return out;
}

inline std::vector<double> tail_compactness_profile(const TruncatedOperator& residual,
                                                    std::span<const Eigen::Index> cuts) {
    return tail_compactness_profile(residual.entries, cuts);
}

} // namespace tcalg
