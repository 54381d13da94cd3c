#pragma once

// Product-quadrature weights for periodic integrands with a log(4 sin^2((t-s)/2))
// factor on the uniform grid s_k = 2 pi k / N (N even):
//
//   R^{(N)}(tau) = -(4 pi / N) sum_{m=1}^{N/2-1} cos(m tau)/m - (4 pi / N^2) cos(N tau / 2)
//
// The rule sum_k R^{(N)}(t - s_k) f(s_k) integrates ln(4 sin^2((t-s)/2)) f(s)
// exactly for trigonometric polynomials f of degree < N/2.

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace drumeig {

inline double kress_weight(int N, double tau) {
    if (N < 2 || N % 2 != 0) throw std::invalid_argument("kress_weight: N must be even and >= 2");
    double sum = 0.0;
    for (int m = 1; m < N / 2; ++m) sum += std::cos(m * tau) / m;
    const double pi = std::numbers::pi;
    return -(4.0 * pi / N) * sum - (4.0 * pi / (N * N)) * std::cos(0.5 * N * tau);
}

// Weights at node offsets: entry d holds R^{(N)}(2 pi d / N), d = 0..N-1.
// Assembly uses entry |i-j|; the vector is symmetric about N/2.
inline Eigen::VectorXd kress_weight_offsets(int N) {
    if (N < 2 || N % 2 != 0)
        throw std::invalid_argument("kress_weight_offsets: N must be even and >= 2");
    Eigen::VectorXd w(N);
    const double h = 2.0 * std::numbers::pi / N;
    for (int d = 0; d <= N / 2; ++d) w[d] = kress_weight(N, h * d);
    for (int d = N / 2 + 1; d < N; ++d) w[d] = w[N - d];
    return w;
}

} // namespace drumeig
