#pragma once

// The transfer operator L(f)(w) = (1/n) sum_{R(z)=w} h(z) f(z)
//                              = sum_{R(z)=w} R(z) / (z R'(z)) f(z).
// Function values are always produced by preimage sums; the truncated matrix
// is assembled from those values, so matrix identities have an independent
// oracle.

#include <cstddef>
#include <vector>

#include "tcalg/blaschke.hpp"
#include "tcalg/circle.hpp"
#include "tcalg/truncated_operator.hpp"

namespace tcalg {

class TransferOperator {
public:
    explicit TransferOperator(BlaschkeProduct b) : product_(std::move(b)) {}

    const BlaschkeProduct& product() const noexcept { return product_; }
    int degree() const noexcept { return product_.degree(); }

private:
    BlaschkeProduct product_;
};

/// lambda_l = R(alpha_l) / (alpha_l R'(alpha_l)) over the preimages of w.
/// Each equals h(alpha_l)/n and they sum to one.
struct PartialFractionWeights {
    PreimageSet preimages;
    std::vector<double> weights;
};

inline PartialFractionWeights partial_fraction_weights(const BlaschkeProduct& b, cplx w) {
    PartialFractionWeights out{preimages(b, w), {}};
    out.weights.reserve(out.preimages.points.size());
    for (cplx a : out.preimages.points) {
        const cplx lam = b(a) / (a * b.derivative(a));
        out.weights.push_back(lam.real());
    }
    return out;
}

template <CircleFunction F>
cplx apply_pointwise(const TransferOperator& op, const F& f, cplx w) {
    const auto& b = op.product();
    const auto pre = preimages(b, w);
    cplx sum = 0.0;
    for (cplx z : pre.points) sum += weight_h(b, std::arg(z)) * f(z);
    return sum / static_cast<double>(b.degree());
}

/// |L((a o R) b)(w) - a(w) L(b)(w)|.
template <CircleFunction A, CircleFunction B>
double covariance_check(const TransferOperator& op, const A& a, const B& bfun, cplx w) {
    const auto& r = op.product();
    const auto lhs = apply_pointwise(op, [&](cplx z) { return cplx(a(r(z))) * cplx(bfun(z)); }, w);
    const auto rhs = cplx(a(w)) * apply_pointwise(op, bfun, w);
    return std::abs(lhs - rhs);
}

/// (xi|eta)(w) = sum_{R(z)=w} h(z) conj(p(z)) q(z) for xi(z,w) = p(z), eta(z,w) = q(z).
template <CircleFunction P, CircleFunction Q>
cplx bimodule_inner(const TransferOperator& op, const P& p, const Q& q, cplx w) {
    const auto& b = op.product();
    const auto pre = preimages(b, w);
    cplx sum = 0.0;
    for (cplx z : pre.points) sum += weight_h(b, std::arg(z)) * std::conj(cplx(p(z))) * cplx(q(z));
    return sum;
}

/// Preimages and weights h/n at every node of a grid, solved once and reused.
struct PreimageTable {
    CircleGrid grid;
    int degree = 0;
    std::vector<cplx> points;   // row-major: node j, branch l -> j * degree + l
    std::vector<double> weights; // h(z)/n
    double max_residual = 0.0;
    double min_separation = 0.0;
};

inline PreimageTable make_preimage_table(const BlaschkeProduct& b, const CircleGrid& grid) {
    PreimageTable t{grid, b.degree(), {}, {}, 0.0, 1e300};
    const std::size_t n = static_cast<std::size_t>(b.degree());
    t.points.resize(grid.size() * n);
    t.weights.resize(grid.size() * n);
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const auto pre = preimages(b, grid.node(j));
        for (std::size_t l = 0; l < n; ++l) {
            t.points[j * n + l] = pre.points[l];
            t.weights[j * n + l] = 1.0 / log_derivative_on_circle(b, std::arg(pre.points[l]));
            t.max_residual = std::max(t.max_residual, pre.residuals[l]);
        }
        t.min_separation = std::min(t.min_separation, pre.min_separation);
    }
    return t;
}

/// L(f) at every grid node.
template <CircleFunction F>
std::vector<cplx> apply_on_grid(const PreimageTable& t, const F& f) {
    const std::size_t n = static_cast<std::size_t>(t.degree);
    std::vector<cplx> out(t.grid.size(), 0.0);
    for (std::size_t j = 0; j < out.size(); ++j) {
        cplx s = 0.0;
        for (std::size_t l = 0; l < n; ++l) s += t.weights[j * n + l] * cplx(f(t.points[j * n + l]));
        out[j] = s;
    }
    return out;
}

/// (xi|eta)_{A,h} at every grid node: n L(conj(p) q).
template <CircleFunction P, CircleFunction Q>
std::vector<cplx> bimodule_inner_on_grid(const PreimageTable& t, const P& p, const Q& q) {
    auto out = apply_on_grid(t, [&](cplx z) { return std::conj(cplx(p(z))) * cplx(q(z)); });
    for (cplx& v : out) v *= static_cast<double>(t.degree);
    return out;
}

/// The table image_symbol needs: empty for lambda z^n, whose images are in
/// closed form, and the full preimage table otherwise.
inline PreimageTable symbol_table(const BlaschkeProduct& b, const CircleGrid& grid) {
    if (!b.is_monomial()) return make_preimage_table(b, grid);
    return PreimageTable{grid, b.degree(), {}, {}, 0.0, 0.0};
}

/// Fourier coefficients of L(a) for a band-limited symbol a.
/// For R = lambda z^n the image is known in closed form,
/// L(z^j) = lambda^{-j/n} w^{j/n} when n | j and 0 otherwise, and is used
/// directly so that power-map identities come out exact. Otherwise the
/// coefficients are extracted from preimage sums on the table's grid.
inline FourierSymbol image_symbol(const PreimageTable& t, const BlaschkeProduct& b, const FourierSymbol& a) {
    if (b.is_monomial()) {
        const int n = b.degree();
        FourierSymbol out(a.band() / n);
        for (int k = -a.band(); k <= a.band(); ++k) {
            if (k % n != 0 || a(k) == cplx(0.0)) continue;
            const int q = k / n;
            const cplx phase = b.lambda() == cplx(1.0) ? cplx(1.0) : std::pow(b.lambda(), -q);
            out[q] += a(k) * phase;
        }
        return out;
    }
    const auto values = apply_on_grid(t, a);
    return fourier_coefficients(values);
}

inline FourierSymbol image_symbol(const TransferOperator& op, const FourierSymbol& a, const CircleGrid& grid) {
    return image_symbol(symbol_table(op.product(), grid), op.product(), a);
}

/// Matrix of L on span{z^0..z^{N-1}}: entry (i, j) = <L(z^j), z^i>.
inline TruncatedOperator transfer_matrix(const PreimageTable& t, Eigen::Index size) {
    const std::size_t m = t.grid.size();
    if (size < 1 || static_cast<std::size_t>(size) * 4 > m) throw DomainError("transfer_matrix needs N <= M/4");
    const std::size_t n = static_cast<std::size_t>(t.degree);
    Matrix out(size, size);
    std::vector<cplx> powers(t.points.size(), 1.0);
    std::vector<cplx> column(m);
    for (Eigen::Index j = 0; j < size; ++j) {
        for (std::size_t node = 0; node < m; ++node) {
            cplx s = 0.0;
            for (std::size_t l = 0; l < n; ++l) s += t.weights[node * n + l] * powers[node * n + l];
            column[node] = s;
        }
        const auto coeffs = dft_coefficients(column);
        for (Eigen::Index i = 0; i < size; ++i) out(i, j) = coeffs[static_cast<std::size_t>(i)];
        for (std::size_t k = 0; k < powers.size(); ++k) powers[k] *= t.points[k];
    }
    return TruncatedOperator(std::move(out), "L_R");
}

inline TruncatedOperator transfer_matrix(const TransferOperator& op, Eigen::Index size, const CircleGrid& grid) {
    return transfer_matrix(make_preimage_table(op.product(), grid), size);
}

} // namespace tcalg
