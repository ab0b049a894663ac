#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <random>
#include <string>

#include "tcalg/error.hpp"
#include "tcalg/types.hpp"

namespace tcalg {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Compression P_N B P_N of a Hardy-space operator to span{z^0..z^{N-1}}.
/// Tall column blocks (rows > cols) are allowed for intermediate products.
struct TruncatedOperator {
    Matrix entries;
    std::string label;

    TruncatedOperator() = default;
    TruncatedOperator(Matrix m, std::string l) : entries(std::move(m)), label(std::move(l)) {
        if (label.empty()) throw DomainError("truncated operator needs a label");
        if (!entries.allFinite()) throw DomainError("truncated operator '" + label + "' has non-finite entries");
    }

    Eigen::Index dim() const noexcept { return entries.cols(); }
    Eigen::Index rows() const noexcept { return entries.rows(); }
    cplx operator()(Eigen::Index i, Eigen::Index j) const { return entries(i, j); }

    /// Top-left m x m block.
    Matrix corner(Eigen::Index m) const {
        if (m > entries.rows() || m > entries.cols()) throw DomainError("corner larger than operator");
        return entries.topLeftCorner(m, m);
    }
};

struct NormEstimate {
    double value = 0.0;
    int iterations = 0;
    bool converged = true;
};

/// Largest singular value by power iteration on X^* X.
inline NormEstimate operator_norm(const Matrix& x, double tol = 1e-12, int max_iterations = 10000) {
    NormEstimate out;
    if (x.size() == 0) return out;
    const double fro = x.norm();
    if (fro == 0.0) return out;
    if (x.cols() == 1) {
        out.value = fro;
        return out;
    }

    std::mt19937_64 rng(0x5eed);
    std::normal_distribution<double> normal;
    Vector v(x.cols());
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = cplx(normal(rng), normal(rng));
    v.normalize();

    double sigma = 0.0;
    for (int it = 1; it <= max_iterations; ++it) {
        const Vector xv = x * v;
        Vector w = x.adjoint() * xv;
        const double next = std::sqrt(std::abs(v.dot(w).real()));
        const double wn = w.norm();
        out.iterations = it;
        if (wn == 0.0) {
            sigma = 0.0;
            break;
        }
        v = w / wn;
        if (std::abs(next - sigma) <= tol * std::max(next, 1e-300)) {
            sigma = next;
            out.value = sigma;
            return out;
        }
        sigma = next;
    }
    out.value = sigma;
    out.converged = sigma == 0.0;
    // The iterate is a lower bound; a last Rayleigh estimate is reported either way.
    if (!out.converged) out.value = (x * v).norm();
    return out;
}

inline NormEstimate operator_norm(const TruncatedOperator& x) { return operator_norm(x.entries); }

} // namespace tcalg
