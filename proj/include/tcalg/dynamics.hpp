#pragma once

// Circle dynamics of R restricted to T: the lift psi with R(e^{i theta}) =
// e^{i psi(theta)}, its branch inverses, and the conjugacy to z^n.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "tcalg/blaschke.hpp"
#include "tcalg/error.hpp"
#include "tcalg/types.hpp"

namespace tcalg {

/// psi on [theta0 - 2 pi, theta0], sampled at G uniform nodes including both
/// endpoints, with psi(theta0 - 2 pi) = 0 and psi(theta0) = 2 pi n.
class CircleLift {
public:
    static constexpr std::size_t min_samples = 256;

    CircleLift(const BlaschkeProduct& b, std::size_t samples) : product_(b) {
        if (samples < min_samples) throw DomainError("build_lift needs at least 256 samples");
        theta0_ = choose_theta0(b);
        step_ = two_pi / static_cast<double>(samples - 1);

        nodes_.resize(samples);
        values_.resize(samples);
        slopes_.resize(samples);
        for (std::size_t j = 0; j < samples; ++j) {
            nodes_[j] = j + 1 == samples ? theta0_ : theta0_ - two_pi + static_cast<double>(j) * step_;
            slopes_[j] = log_derivative_on_circle(b, nodes_[j]);
        }
        const double steepest = *std::max_element(slopes_.begin(), slopes_.end());
        if (!(steepest * step_ < pi)) {
            throw DomainError("lift grid too coarse: max psi' * step = " + std::to_string(steepest * step_));
        }

        values_[0] = std::arg(b(unit(nodes_[0])));
        for (std::size_t j = 1; j < samples; ++j) {
            const double predicted = values_[j - 1] + 0.5 * step_ * (slopes_[j - 1] + slopes_[j]);
            values_[j] = snap(std::arg(b(unit(nodes_[j]))), predicted);
        }
        // Both endpoints map to 1, so their arguments are exact multiples of 2 pi.
        values_.front() = 0.0;
        const double top = two_pi * b.degree();
        if (std::abs(values_.back() - top) > 1e-8) {
            throw ConvergenceError("lift total increase differs from 2 pi n by " +
                                   std::to_string(values_.back() - top));
        }
        total_increase_raw_ = values_.back();
        values_.back() = top;
    }

    const BlaschkeProduct& product() const noexcept { return product_; }
    int degree() const noexcept { return product_.degree(); }
    double theta0() const noexcept { return theta0_; }
    std::size_t size() const noexcept { return nodes_.size(); }
    const std::vector<double>& nodes() const noexcept { return nodes_; }
    const std::vector<double>& values() const noexcept { return values_; }
    const std::vector<double>& slopes() const noexcept { return slopes_; }

    /// Unwrapped increase measured before the endpoint was pinned to 2 pi n.
    double total_increase() const noexcept { return total_increase_raw_; }

    /// min psi' - 1 over the sample nodes (> 0 for an expanding map).
    double expansion_margin() const {
        return *std::min_element(slopes_.begin(), slopes_.end()) - 1.0;
    }

    /// psi(theta) for theta in [theta0 - 2 pi, theta0]: cubic Hermite guess
    /// from the samples, corrected onto the exact branch of arg R.
    double operator()(double theta) const {
        const double lo = theta0_ - two_pi;
        if (theta < lo - 1e-12 || theta > theta0_ + 1e-12) throw DomainError("lift evaluated outside its interval");
        theta = std::clamp(theta, lo, theta0_);
        std::size_t j = static_cast<std::size_t>((theta - lo) / step_);
        j = std::min(j, nodes_.size() - 2);
        const double h = nodes_[j + 1] - nodes_[j];
        const double s = (theta - nodes_[j]) / h;
        const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
        const double h10 = s * (1 - s) * (1 - s);
        const double h01 = s * s * (3 - 2 * s);
        const double h11 = s * s * (s - 1);
        const double guess =
            h00 * values_[j] + h10 * h * slopes_[j] + h01 * values_[j + 1] + h11 * h * slopes_[j + 1];
        return snap(std::arg(product_(unit(theta))), guess);
    }

    double derivative(double theta) const { return log_derivative_on_circle(product_, theta); }

    /// The lift extended to the real line: Psi(x + 2 pi) = Psi(x) + 2 pi n.
    double extended(double x) const {
        const double periods = std::floor((x - (theta0_ - two_pi)) / two_pi);
        double reduced = x - two_pi * periods;
        if (reduced > theta0_) reduced = theta0_;
        return (*this)(reduced) + two_pi * degree() * periods;
    }

    /// Psi(x) - n x, a 2 pi-periodic function.
    double deviation(double x) const {
        const double periods = std::floor((x - (theta0_ - two_pi)) / two_pi);
        double reduced = x - two_pi * periods;
        if (reduced > theta0_) reduced = theta0_;
        return (*this)(reduced) - degree() * reduced;
    }

private:
    static double snap(double principal, double guess) {
        return principal + two_pi * std::round((guess - principal) / two_pi);
    }

    /// Largest theta in [0, 2 pi] with R(e^{i theta}) = 1.
    static double choose_theta0(const BlaschkeProduct& b) {
        const auto pre = preimages(b, cplx(1.0));
        double best = 0.0;
        for (cplx z : pre.points) {
            double a = std::arg(z);
            if (a < 0) a += two_pi;
            if (a < 1e-12 || two_pi - a < 1e-12) return two_pi;
            best = std::max(best, a);
        }
        return best;
    }

    BlaschkeProduct product_;
    double theta0_ = 0.0;
    double step_ = 0.0;
    double total_increase_raw_ = 0.0;
    std::vector<double> nodes_;
    std::vector<double> values_;
    std::vector<double> slopes_;
};

inline CircleLift build_lift(const BlaschkeProduct& b, std::size_t samples) { return CircleLift(b, samples); }

/// sigma_k(t) = psi^{-1}(t + 2 (k - 1) pi), k = 1..n, t in [0, 2 pi].
inline double branch_inverse(const CircleLift& lift, int k, double t) {
    if (k < 1 || k > lift.degree()) throw DomainError("branch index must lie in [1, n]");
    if (!(t >= 0.0 && t <= two_pi)) throw DomainError("branch_inverse needs t in [0, 2 pi]");
    const double target = t + two_pi * (k - 1);
    const auto& v = lift.values();
    const auto& x = lift.nodes();
    auto it = std::upper_bound(v.begin(), v.end(), target);
    std::size_t hi = static_cast<std::size_t>(std::distance(v.begin(), it));
    hi = std::clamp<std::size_t>(hi, 1, v.size() - 1);
    double a = x[hi - 1], b = x[hi];
    double theta = a + (b - a) * (target - v[hi - 1]) / (v[hi] - v[hi - 1]);
    for (int it2 = 0; it2 < 60; ++it2) {
        const double f = lift(theta) - target;
        if (f > 0) b = theta;
        else a = theta;
        const double next = theta - f / lift.derivative(theta);
        const double stepped = (next > a && next < b) ? next : 0.5 * (a + b);
        if (std::abs(stepped - theta) < 1e-15 * std::max(1.0, std::abs(theta))) {
            theta = stepped;
            break;
        }
        theta = stepped;
    }
    return theta;
}

/// Lift Phi of a circle homeomorphism phi with phi(R(z)) = phi(z)^n, from
/// Phi = lim Psi_m / n^m where Psi_m lifts the m-th iterate of R. Written as
/// Phi(theta) = theta + sum_m g(x_m) / n^{m+1}, g = Psi - n id, x_m the orbit.
class PowerConjugacy {
public:
    PowerConjugacy(CircleLift lift, int terms, double last_delta)
        : lift_(std::move(lift)), terms_(terms), last_delta_(last_delta) {}

    const CircleLift& lift() const noexcept { return lift_; }
    int iterations() const noexcept { return terms_; }
    double last_delta() const noexcept { return last_delta_; }

    double lift_value(double theta) const {
        const double n = lift_.degree();
        double x = theta;
        double sum = theta;
        double scale = 1.0 / n;
        for (int m = 0; m < terms_; ++m) {
            sum += lift_.deviation(x) * scale;
            x = std::arg(lift_.product()(unit(x)));
            scale /= n;
        }
        return sum;
    }

    cplx operator()(cplx z) const { return unit(lift_value(std::arg(z))); }

    /// sup over samples of |phi(R(z)) - phi(z)^n|.
    double residual(std::size_t samples) const {
        double sup = 0.0;
        for (std::size_t j = 0; j < samples; ++j) {
            const cplx z = unit(two_pi * static_cast<double>(j) / static_cast<double>(samples));
            sup = std::max(sup, std::abs((*this)(lift_.product()(z)) - std::pow((*this)(z), lift_.degree())));
        }
        return sup;
    }

    /// Phi at the lift nodes.
    std::vector<double> samples() const {
        std::vector<double> out;
        out.reserve(lift_.size());
        for (double t : lift_.nodes()) out.push_back(lift_value(t));
        return out;
    }

private:
    CircleLift lift_;
    int terms_;
    double last_delta_;
};

inline PowerConjugacy conjugacy_to_power(const BlaschkeProduct& b, std::size_t samples, int max_iterations,
                                         double tolerance = 1e-8) {
    CircleLift lift(b, samples);
    if (!(lift.expansion_margin() > 0.0)) throw DomainError("conjugacy_to_power needs an expanding map");
    const double n = b.degree();
    std::vector<double> orbit = lift.nodes();
    double scale = 1.0 / n;
    double delta = 0.0;
    for (int m = 0; m < max_iterations; ++m) {
        delta = 0.0;
        for (double& x : orbit) {
            delta = std::max(delta, std::abs(lift.deviation(x)) * scale);
            x = std::arg(b(unit(x)));
        }
        scale /= n;
        if (delta < tolerance) return PowerConjugacy(std::move(lift), m + 1, delta);
    }
    throw ConvergenceError("conjugacy iteration did not converge; last delta " + std::to_string(delta));
}

struct KGroups {
    std::string k0;
    std::string k1;
};

/// K_0 = Z + Z/(n-1)Z and K_1 = Z; the torsion part vanishes for n = 2.
inline KGroups k_groups(int n) {
    if (n < 2) throw DomainError("k_groups needs n >= 2");
    KGroups out{"Z", "Z"};
    if (n > 2) out.k0 = "Z ⊕ Z/" + std::to_string(n - 1) + "Z";
    return out;
}

} // namespace tcalg
