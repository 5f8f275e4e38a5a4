#include "painleve/specfun.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace painleve::specfun {

namespace {

// Stirling series coefficients B_2n / (2n (2n-1)).
constexpr double stir1 = 1.0 / 12.0;
constexpr double stir2 = -1.0 / 360.0;
constexpr double stir3 = 1.0 / 1260.0;
constexpr double stir4 = -1.0 / 1680.0;
constexpr double stir5 = 1.0 / 1188.0;
constexpr double stir6 = -691.0 / 360360.0;
constexpr double stir7 = 1.0 / 156.0;

constexpr double half_log_two_pi = 0.91893853320467274178;

}  // namespace

double arg_gamma_imag(double y) {
    if (!(y > 0.0) || !std::isfinite(y))
        throw std::domain_error("arg_gamma_imag: require finite y > 0");

    // Upward recurrence Gamma(z) = Gamma(z+k) / (z (z+1) ... (z+k-1)) applied
    // to z = iy. Each factor contributes arg(j + iy) = atan2(y, j), which is
    // continuous in y, so no wrapping can occur. Shift until |z+k| is large
    // enough for the Stirling tail to reach ~1e-15.
    double acc = 0.0;
    int k = 0;
    while (static_cast<double>(k) * k + y * y < 160.0) {
        acc += std::atan2(y, static_cast<double>(k));
        ++k;
    }

    const std::complex<double> z(static_cast<double>(k), y);
    const std::complex<double> zi = 1.0 / z;
    const std::complex<double> zi2 = zi * zi;
    const std::complex<double> series =
        zi * (stir1 + zi2 * (stir2 + zi2 * (stir3 + zi2 * (stir4 + zi2 * (stir5 + zi2 * (stir6 + zi2 * stir7))))));
    const std::complex<double> lg =
        (z - 0.5) * std::log(z) - z + half_log_two_pi + series;

    return lg.imag() - acc;
}

}  // namespace painleve::specfun
