#pragma once

// Cylinder Bessel/Neumann/Hankel functions of order 0 and 1 for real positive
// arguments. Target: >= 13 correct significant digits (relative to the
// oscillation envelope) over 0 < x <= 1e4. Mid/large arguments delegate to
// Boost.Math; below x_series_switch the ascending series are used directly so
// the log/analytic decomposition near 0 is explicit and cancellation-free.

#include <boost/math/special_functions/bessel.hpp>

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace drumeig::specfun {

inline constexpr double euler_gamma = std::numbers::egamma_v<double>;
inline constexpr double x_series_switch = 0.5;

namespace detail {

inline constexpr int series_terms = 14;

// J0 and J1 ascending series; converges rapidly for x <= x_series_switch.
inline double series_j(int order, double x) {
    const double q = 0.25 * x * x;
    double term = (order == 0) ? 1.0 : 0.5 * x;
    double sum = term;
    for (int k = 1; k < series_terms; ++k) {
        term *= -q / (static_cast<double>(k) * (k + order));
        sum += term;
    }
    return sum;
}

// Y0 = (2/pi)[(ln(x/2)+gamma) J0(x) + S0(x)],  S0 = sum_{k>=1} (-1)^{k+1} H_k q^k/(k!)^2
// Y1 = (2/pi)[ln(x/2) J1(x) - 1/x - (x/4) S1(x)],
//   S1 = sum_{k>=0} (-1)^k (psi(k+1)+psi(k+2)) q^k/(k!(k+1)!)
inline double series_y(int order, double x) {
    const double q = 0.25 * x * x;
    const double two_over_pi = 2.0 / std::numbers::pi;
    if (order == 0) {
        double sum = 0.0, fact = 1.0, harmonic = 0.0, qk = 1.0;
        for (int k = 1; k < series_terms; ++k) {
            fact *= k;
            harmonic += 1.0 / k;
            qk *= -q;
            sum -= harmonic * qk / (fact * fact); // (-1)^{k+1} q^k = -(-q)^k
        }
        return two_over_pi * ((std::log(0.5 * x) + euler_gamma) * series_j(0, x) + sum);
    }
    double sum = 0.0, qk = 1.0, kfact = 1.0, k1fact = 1.0;
    double psi_a = -euler_gamma, psi_b = 1.0 - euler_gamma; // psi(1), psi(2)
    for (int k = 0; k < series_terms; ++k) {
        sum += qk * (psi_a + psi_b) / (kfact * k1fact);
        qk *= -q;
        kfact *= (k + 1);
        k1fact *= (k + 2);
        psi_a += 1.0 / (k + 1);
        psi_b += 1.0 / (k + 2);
    }
    return two_over_pi * (std::log(0.5 * x) * series_j(1, x) - 1.0 / x - 0.25 * x * sum);
}

} // namespace detail

inline double bessel_j0(double x) {
    if (!(x >= 0.0)) throw std::domain_error("bessel_j0: x must be >= 0");
    return (x < x_series_switch) ? detail::series_j(0, x) : boost::math::cyl_bessel_j(0, x);
}

inline double bessel_j1(double x) {
    if (!(x >= 0.0)) throw std::domain_error("bessel_j1: x must be >= 0");
    return (x < x_series_switch) ? detail::series_j(1, x) : boost::math::cyl_bessel_j(1, x);
}

inline double bessel_y0(double x) {
    if (!(x > 0.0)) throw std::domain_error("bessel_y0: x must be > 0");
    return (x < x_series_switch) ? detail::series_y(0, x) : boost::math::cyl_neumann(0, x);
}

inline double bessel_y1(double x) {
    if (!(x > 0.0)) throw std::domain_error("bessel_y1: x must be > 0");
    return (x < x_series_switch) ? detail::series_y(1, x) : boost::math::cyl_neumann(1, x);
}

inline std::complex<double> hankel1_0(double x) { return {bessel_j0(x), bessel_y0(x)}; }
inline std::complex<double> hankel1_1(double x) { return {bessel_j1(x), bessel_y1(x)}; }

} // namespace drumeig::specfun
