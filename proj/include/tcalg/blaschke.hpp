#pragma once

// Finite Blaschke products R(z) = lambda * prod_k (z - z_k) / (1 - conj(z_k) z)
// with z_0 = 0, so that R(0) = 0 and deg R = n >= 2.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <sstream>
#include <vector>

#include "tcalg/error.hpp"
#include "tcalg/types.hpp"

namespace tcalg {

class BlaschkeProduct {
public:
    /// Unit-modulus tolerance accepted for lambda before renormalization.
    static constexpr double lambda_tolerance = 1e-12;
    /// Zeros beyond this modulus are accepted but flagged as ill-conditioned.
    static constexpr double conditioning_radius = 0.95;

    static BlaschkeProduct make(cplx lambda, std::vector<cplx> zeros) {
        using K = BlaschkeError::Kind;
        if (zeros.size() < 2) {
            throw BlaschkeError(K::DegreeTooSmall, "Blaschke product needs degree >= 2, got " +
                                                       std::to_string(zeros.size()));
        }
        if (zeros.front() != cplx(0.0, 0.0)) {
            throw BlaschkeError(K::FirstZeroNotOrigin, "first zero must be exactly 0");
        }
        for (std::size_t k = 0; k < zeros.size(); ++k) {
            if (!(std::abs(zeros[k]) < 1.0)) {
                std::ostringstream os;
                os << "zero " << k << " = " << zeros[k] << " is not inside the open unit disk";
                throw BlaschkeError(K::ZeroOutsideDisk, os.str());
            }
        }
        const double mod = std::abs(lambda);
        if (!(std::abs(mod - 1.0) <= lambda_tolerance)) {
            std::ostringstream os;
            os << "|lambda| = " << mod << " is not 1";
            throw BlaschkeError(K::LambdaNotUnimodular, os.str());
        }
        return BlaschkeProduct(lambda / mod, std::move(zeros));
    }

    /// lambda * z^n.
    static BlaschkeProduct monomial(int n, cplx lambda = 1.0) {
        if (n < 0) n = 0;
        return make(lambda, std::vector<cplx>(static_cast<std::size_t>(n), cplx(0.0)));
    }

    int degree() const noexcept { return static_cast<int>(zeros_.size()); }
    cplx lambda() const noexcept { return lambda_; }
    std::span<const cplx> zeros() const noexcept { return zeros_; }

    /// True when every zero is exactly the origin, i.e. R = lambda z^n.
    bool is_monomial() const noexcept {
        return std::all_of(zeros_.begin(), zeros_.end(), [](cplx z) { return z == cplx(0.0); });
    }

    double max_zero_modulus() const noexcept {
        double r = 0.0;
        for (cplx z : zeros_) r = std::max(r, std::abs(z));
        return r;
    }

    bool ill_conditioned() const noexcept { return max_zero_modulus() > conditioning_radius; }

    cplx operator()(cplx z) const {
        cplx value = lambda_;
        for (cplx zk : zeros_) {
            const cplx den = 1.0 - std::conj(zk) * z;
            if (std::abs(den) < pole_guard) throw PoleError("Blaschke product evaluated at a pole");
            value *= (z - zk) / den;
        }
        return value;
    }

    /// R'(z). Uses the logarithmic derivative where |R(z)| is not tiny and
    /// direct product differentiation otherwise.
    cplx derivative(cplx z) const {
        const cplx r = (*this)(z);
        if (std::abs(r) >= 1e-10) {
            cplx s = 0.0;
            for (cplx zk : zeros_) s += 1.0 / (z - zk) + std::conj(zk) / (1.0 - std::conj(zk) * z);
            return s * r;
        }
        return derivative_product_rule(z);
    }

    /// Product-rule derivative, valid everywhere off the poles.
    cplx derivative_product_rule(cplx z) const {
        cplx total = 0.0;
        for (std::size_t k = 0; k < zeros_.size(); ++k) {
            const cplx zk = zeros_[k];
            const cplx den = 1.0 - std::conj(zk) * z;
            cplx term = (1.0 - std::norm(zk)) / (den * den);
            for (std::size_t j = 0; j < zeros_.size(); ++j) {
                if (j == k) continue;
                term *= factor(j, z);
            }
            total += term;
        }
        return lambda_ * total;
    }

    /// Single Moebius factor (z - z_k) / (1 - conj(z_k) z).
    cplx factor(std::size_t k, cplx z) const {
        const cplx zk = zeros_[k];
        const cplx den = 1.0 - std::conj(zk) * z;
        if (std::abs(den) < pole_guard) throw PoleError("Moebius factor evaluated at its pole");
        return (z - zk) / den;
    }

private:
    static constexpr double pole_guard = 1e-14;

    BlaschkeProduct(cplx lambda, std::vector<cplx> zeros)
        : lambda_(lambda), zeros_(std::move(zeros)) {}

    cplx lambda_;
    std::vector<cplx> zeros_;
};

inline BlaschkeProduct make_blaschke(cplx lambda, std::vector<cplx> zeros) {
    return BlaschkeProduct::make(lambda, std::move(zeros));
}

inline cplx eval(const BlaschkeProduct& b, cplx z) { return b(z); }

/// z R'(z) / R(z) on the unit circle, as the real sum
/// 1 + sum_{k>=1} (1 - |z_k|^2) / |z - z_k|^2. Always > 0.
inline double log_derivative_on_circle(const BlaschkeProduct& b, double theta) {
    const cplx z = unit(theta);
    double s = 0.0;
    for (cplx zk : b.zeros()) s += (1.0 - std::norm(zk)) / std::norm(z - zk);
    return s;
}

/// z R'(z) / R(z) evaluated as a quotient of independent evaluations.
/// On the circle the imaginary part vanishes up to rounding.
inline cplx log_derivative_quotient(const BlaschkeProduct& b, double theta) {
    const cplx z = unit(theta);
    return z * b.derivative_product_rule(z) / b(z);
}

/// h(z) = n R(z) / (z R'(z)) on the circle.
inline double weight_h(const BlaschkeProduct& b, double theta) {
    return b.degree() / log_derivative_on_circle(b, theta);
}

inline cplx iterate_eval(const BlaschkeProduct& b, int m, cplx z) {
    if (m < 1) throw DomainError("iterate_eval needs m >= 1");
    for (int i = 0; i < m; ++i) z = b(z);
    return z;
}

struct PreimageSet {
    cplx target;
    std::vector<cplx> points;     // sorted by principal argument
    std::vector<double> residuals; // |R(points_i) - target|
    double min_separation = 0.0;
    int iterations = 0;
};

struct PreimageOptions {
    double step_tolerance = 1e-13;
    int max_iterations = 60;
    double residual_tolerance = 1e-9;
    double circle_tolerance = 1e-9;
    int polish_steps = 2;
};

namespace detail {

/// Ascending coefficients of lambda prod(z - z_k) - w prod(1 - conj(z_k) z).
inline std::vector<cplx> preimage_polynomial(const BlaschkeProduct& b, cplx w) {
    const auto zeros = b.zeros();
    std::vector<cplx> num{1.0};
    std::vector<cplx> den{1.0};
    for (cplx zk : zeros) {
        std::vector<cplx> nn(num.size() + 1, 0.0), dd(den.size() + 1, 0.0);
        for (std::size_t i = 0; i < num.size(); ++i) {
            nn[i] -= zk * num[i];
            nn[i + 1] += num[i];
            dd[i] += den[i];
            dd[i + 1] -= std::conj(zk) * den[i];
        }
        num.swap(nn);
        den.swap(dd);
    }
    std::vector<cplx> p(num.size());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = b.lambda() * num[i] - w * den[i];
    return p;
}

/// Horner evaluation of p and p'.
inline void horner(const std::vector<cplx>& p, cplx z, cplx& value, cplx& slope) {
    value = p.back();
    slope = 0.0;
    for (std::size_t i = p.size() - 1; i-- > 0;) {
        slope = slope * z + value;
        value = value * z + p[i];
    }
}

} // namespace detail

/// The n simple solutions of R(z) = w for |w| = 1, via Aberth-Ehrlich
/// iteration started at the n-th roots of w / lambda, then Newton polish.
inline PreimageSet preimages(const BlaschkeProduct& b, cplx w, const PreimageOptions& opt = {}) {
    if (std::abs(std::abs(w) - 1.0) > opt.circle_tolerance) {
        throw DomainError("preimages: target is not on the unit circle");
    }
    const int n = b.degree();
    const auto poly = detail::preimage_polynomial(b, w);

    std::vector<cplx> roots(static_cast<std::size_t>(n));
    const double base = std::arg(w / b.lambda());
    for (int k = 0; k < n; ++k) roots[static_cast<std::size_t>(k)] = unit((base + two_pi * k) / n);

    int iter = 0;
    for (; iter < opt.max_iterations; ++iter) {
        double max_step = 0.0;
        for (int i = 0; i < n; ++i) {
            cplx value, slope;
            detail::horner(poly, roots[static_cast<std::size_t>(i)], value, slope);
            if (value == cplx(0.0)) continue;
            const cplx ratio = value / slope;
            cplx repulsion = 0.0;
            for (int j = 0; j < n; ++j) {
                if (j != i) repulsion += 1.0 / (roots[static_cast<std::size_t>(i)] - roots[static_cast<std::size_t>(j)]);
            }
            const cplx step = ratio / (1.0 - ratio * repulsion);
            roots[static_cast<std::size_t>(i)] -= step;
            max_step = std::max(max_step, std::abs(step));
        }
        if (max_step < opt.step_tolerance) {
            ++iter;
            break;
        }
    }

    for (cplx& z : roots) {
        for (int s = 0; s < opt.polish_steps; ++s) {
            cplx value, slope;
            detail::horner(poly, z, value, slope);
            if (value == cplx(0.0) || slope == cplx(0.0)) break;
            const cplx candidate = z - value / slope;
            if (std::abs(b(candidate) - w) <= std::abs(b(z) - w)) z = candidate;
            else break;
        }
    }

    std::sort(roots.begin(), roots.end(), [](cplx a, cplx c) { return std::arg(a) < std::arg(c); });

    PreimageSet out;
    out.target = w;
    out.iterations = iter;
    out.points = roots;
    out.residuals.reserve(roots.size());
    for (cplx z : roots) {
        const double res = std::abs(b(z) - w);
        if (!(res <= opt.residual_tolerance)) {
            throw ConvergenceError("preimages: residual " + std::to_string(res) + " above tolerance");
        }
        if (std::abs(std::abs(z) - 1.0) > opt.circle_tolerance) {
            throw ConvergenceError("preimages: root left the unit circle");
        }
        out.residuals.push_back(res);
    }
    double sep = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < roots.size(); ++i)
        for (std::size_t j = i + 1; j < roots.size(); ++j) sep = std::min(sep, std::abs(roots[i] - roots[j]));
    out.min_separation = sep;
    if (!(sep > 1e-12)) throw ConvergenceError("preimages: roots collapsed");
    return out;
}

} // namespace tcalg
