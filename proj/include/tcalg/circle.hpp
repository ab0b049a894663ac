#pragma once

// Discrete Fourier analysis on the unit circle.

#include <bit>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <map>
#include <span>
#include <vector>

#include "tcalg/error.hpp"
#include "tcalg/types.hpp"

namespace tcalg {

/// Something that maps a point of the unit circle to a complex value.
template <class F>
concept CircleFunction = std::invocable<const F&, cplx> &&
                         std::convertible_to<std::invoke_result_t<const F&, cplx>, cplx>;

/// Uniform nodes theta_j = 2 pi j / M, M a power of two >= 4.
class CircleGrid {
public:
    static constexpr std::size_t default_size = 4096;

    explicit CircleGrid(std::size_t size = default_size) : size_(size) {
        if (size < 4 || !std::has_single_bit(size)) {
            throw DomainError("circle grid size must be a power of two >= 4, got " + std::to_string(size));
        }
    }

    std::size_t size() const noexcept { return size_; }
    double theta(std::size_t j) const noexcept { return two_pi * static_cast<double>(j) / static_cast<double>(size_); }
    cplx node(std::size_t j) const noexcept { return unit(theta(j)); }

    friend bool operator==(const CircleGrid&, const CircleGrid&) = default;

private:
    std::size_t size_;
};

/// Finitely supported two-sided Fourier series sum_{|k| <= K} c_k z^k.
class FourierSymbol {
public:
    FourierSymbol() : band_(0), coeffs_(1, 0.0) {}

    explicit FourierSymbol(int band) : band_(band), coeffs_(static_cast<std::size_t>(2 * band + 1), 0.0) {
        if (band < 0) throw DomainError("negative band limit");
    }

    static FourierSymbol monomial(int k, cplx c = 1.0) {
        FourierSymbol s(std::abs(k));
        s[k] = c;
        return s;
    }

    static FourierSymbol from_map(const std::map<int, cplx>& coeffs) {
        int band = 0;
        for (const auto& [k, c] : coeffs) band = std::max(band, std::abs(k));
        FourierSymbol s(band);
        for (const auto& [k, c] : coeffs) s[k] = c;
        return s;
    }

    int band() const noexcept { return band_; }

    cplx coefficient(int k) const noexcept {
        return std::abs(k) <= band_ ? coeffs_[static_cast<std::size_t>(k + band_)] : cplx(0.0);
    }
    cplx operator()(int k) const noexcept { return coefficient(k); }
    cplx& operator[](int k) {
        if (std::abs(k) > band_) throw DomainError("Fourier index outside band");
        return coeffs_[static_cast<std::size_t>(k + band_)];
    }

    /// Value at a point of the unit circle.
    cplx operator()(cplx z) const noexcept {
        cplx sum = 0.0;
        const double theta = std::arg(z);
        for (int k = -band_; k <= band_; ++k) {
            const cplx c = coefficient(k);
            if (c != cplx(0.0)) sum += c * unit(k * theta);
        }
        return sum;
    }

    /// True when no negative coefficient exceeds tol in modulus.
    bool is_analytic(double tol = 0.0) const noexcept {
        for (int k = -band_; k < 0; ++k)
            if (std::abs(coefficient(k)) > tol) return false;
        return true;
    }

    /// Symbol of conj(a): coefficients conj(c_{-k}).
    FourierSymbol conjugate() const {
        FourierSymbol out(band_);
        for (int k = -band_; k <= band_; ++k) out[k] = std::conj(coefficient(-k));
        return out;
    }

    FourierSymbol truncated(int band) const {
        FourierSymbol out(band);
        for (int k = -band; k <= band; ++k) out[k] = coefficient(k);
        return out;
    }

    double l2_norm_squared() const noexcept {
        double s = 0.0;
        for (cplx c : coeffs_) s += std::norm(c);
        return s;
    }

    friend bool operator==(const FourierSymbol& a, const FourierSymbol& b) {
        const int band = std::max(a.band_, b.band_);
        for (int k = -band; k <= band; ++k)
            if (a.coefficient(k) != b.coefficient(k)) return false;
        return true;
    }

private:
    int band_;
    std::vector<cplx> coeffs_;
};

namespace detail {

/// In-place iterative radix-2 FFT. sign = -1 computes sum_j x_j e^{-2 pi i jk/M}.
inline void fft_in_place(std::vector<cplx>& x, int sign) {
    const std::size_t m = x.size();
    if (m == 0 || !std::has_single_bit(m)) throw DomainError("FFT length must be a power of two");
    for (std::size_t i = 1, j = 0; i < m; ++i) {
        std::size_t bit = m >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(x[i], x[j]);
    }
    // Twiddles are taken from a full-length table so every factor is a
    // directly computed polar value (no accumulated recurrence error).
    std::vector<cplx> table(m / 2);
    for (std::size_t k = 0; k < m / 2; ++k)
        table[k] = unit(sign * two_pi * static_cast<double>(k) / static_cast<double>(m));
    for (std::size_t len = 2; len <= m; len <<= 1) {
        const std::size_t half = len / 2;
        const std::size_t stride = m / len;
        for (std::size_t start = 0; start < m; start += len) {
            for (std::size_t k = 0; k < half; ++k) {
                const cplx t = table[k * stride] * x[start + k + half];
                x[start + k + half] = x[start + k] - t;
                x[start + k] += t;
            }
        }
    }
}

} // namespace detail

/// Values f(e^{i theta_j}) at the grid nodes.
template <CircleFunction F>
std::vector<cplx> sample(const F& f, const CircleGrid& grid) {
    std::vector<cplx> out(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) out[j] = f(grid.node(j));
    return out;
}

/// Raw DFT coefficients c_k = (1/M) sum_j s_j e^{-ik theta_j}, stored at index
/// k mod M (k = 0..M-1). Cheaper than building a FourierSymbol when only the
/// nonnegative band is needed.
inline std::vector<cplx> dft_coefficients(std::vector<cplx> samples) {
    detail::fft_in_place(samples, -1);
    const double scale = 1.0 / static_cast<double>(samples.size());
    for (cplx& c : samples) c *= scale;
    return samples;
}

/// Coefficients for k in (-M/2, M/2]; exact for trigonometric polynomials of degree < M/2.
inline FourierSymbol fourier_coefficients(std::span<const cplx> samples) {
    const std::size_t m = samples.size();
    if (m < 4 || !std::has_single_bit(m)) throw DomainError("sample count must be a power of two >= 4");
    auto raw = dft_coefficients(std::vector<cplx>(samples.begin(), samples.end()));
    const int half = static_cast<int>(m / 2);
    FourierSymbol out(half);
    for (int k = -half + 1; k <= half; ++k) out[k] = raw[static_cast<std::size_t>((k + static_cast<int>(m)) % static_cast<int>(m))];
    return out;
}

/// Inverse of fourier_coefficients on the band |k| < M/2.
inline std::vector<cplx> synthesize(const FourierSymbol& f, const CircleGrid& grid) {
    const std::size_t m = grid.size();
    if (2 * static_cast<std::size_t>(f.band()) >= m) throw DomainError("band limit must be below M/2 for synthesis");
    std::vector<cplx> x(m, 0.0);
    for (int k = -f.band(); k <= f.band(); ++k)
        x[static_cast<std::size_t>((k + static_cast<int>(m)) % static_cast<int>(m))] = f(k);
    detail::fft_in_place(x, +1);
    return x;
}

/// (f|g) = (1/M) sum_j f_j conj(g_j); linear in the first argument.
inline cplx l2_inner(std::span<const cplx> f, std::span<const cplx> g) {
    if (f.size() != g.size()) throw DomainError("l2_inner: length mismatch");
    if (f.empty()) throw DomainError("l2_inner: empty sample vectors");
    cplx s = 0.0;
    for (std::size_t j = 0; j < f.size(); ++j) s += f[j] * std::conj(g[j]);
    return s / static_cast<double>(f.size());
}

/// Poisson extension sum_k c_k r^{|k|} e^{ik theta}, 0 <= r < 1.
inline cplx poisson_extension(const FourierSymbol& f, double r, double theta) {
    if (!(r >= 0.0 && r < 1.0)) throw DomainError("poisson_extension needs 0 <= r < 1");
    cplx sum = f(0);
    double rk = 1.0;
    for (int k = 1; k <= f.band(); ++k) {
        rk *= r;
        if (rk == 0.0) break;
        sum += rk * (f(k) * unit(k * theta) + f(-k) * unit(-k * theta));
    }
    return sum;
}

/// Bound on coefficient mass aliased into a grid of size M when sampling a
/// function whose coefficients decay like rho^k.
inline double aliasing_bound(double rho, std::size_t grid_size) {
    if (rho <= 0.0) return 0.0;
    return std::pow(rho, static_cast<double>(grid_size / 2)) / (1.0 - rho);
}

} // namespace tcalg
