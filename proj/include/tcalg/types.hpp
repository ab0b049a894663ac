#pragma once

#include <complex>
#include <numbers>

namespace tcalg {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

inline cplx unit(double theta) { return std::polar(1.0, theta); }

} // namespace tcalg
