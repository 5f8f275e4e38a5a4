// Special-function kernels for the connection formulas.
#ifndef PAINLEVE_SPECFUN_HPP
#define PAINLEVE_SPECFUN_HPP

namespace painleve::specfun {

// Continuous branch of arg Gamma(iy) for y > 0.
//
// The branch is fixed by the y -> 0+ limit, arg Gamma(iy) -> -pi/2 (since
// Gamma(iy) ~ -i/y), and continued without wrapping: the value coincides with
// the principal argument for small y but keeps growing past pi for y >~ 5.6.
// The connection formulas consume it only inside trigonometric functions of
// phase sums, so the consistent branch is what matters, not the principal one.
//
// Throws std::domain_error for y <= 0 or non-finite y.
double arg_gamma_imag(double y);

// arg Gamma(i y) limit convention used when an amplitude vanishes exactly.
inline constexpr double arg_gamma_imag_zero_limit = -1.5707963267948966192;

}  // namespace painleve::specfun

#endif
