#pragma once

// Nystrom discretization of the boundary integral operators for the Helmholtz
// Dirichlet problem. M_N discretizes the reparametrized double layer 2D, Q_N
// the reparametrized single layer 2S; the solver works with
//   A(kappa, eta) = I - M_N(kappa) - i eta Q_N(kappa),
// the combined-field equation for eta != 0 and the plain double-layer
// equation for eta = 0.
//
// Same-curve blocks use the logarithmic product quadrature: the kernels are
// split as K(t,s) = K1(t,s) ln(4 sin^2((t-s)/2)) + K2(t,s) with K1, K2
// analytic, and the log factor is integrated exactly against trigonometric
// polynomials by the weights R^(N). Cross-curve blocks are smooth and use the
// plain trapezoid rule.

#include "geometry.hpp"
#include "linalg.hpp"
#include "parallel.hpp"
#include "quadrature.hpp"
#include "specfun.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

namespace drumeig {

struct OperatorMatrix {
    MatrixXcd A;
    double kappa = 0.0;
    double eta = 0.0;
};

enum class LayerKind { double_layer, single_layer };

namespace detail {

struct KernelVals {
    Complex L{0.0, 0.0};  // kernel of 2D
    Complex L1{0.0, 0.0}; // log coefficient of L
    Complex Q{0.0, 0.0};  // kernel of 2S
    Complex Q1{0.0, 0.0}; // log coefficient of Q
};

// Off-diagonal kernels: target point xt, source position xs with derivative ds.
inline KernelVals kernels_offdiag(const Vec2& xt, const Vec2& xs, const Vec2& ds, double kappa,
                                  bool need_Q) {
    KernelVals k;
    const Vec2 diff = xt - xs;
    const double r = diff.norm();
    const double z = kappa * r;
    const double bracket = ds.y() * diff.x() - ds.x() * diff.y();
    const double j1 = specfun::bessel_j1(z);
    const double y1 = specfun::bessel_y1(z);
    k.L = Complex(0.0, 0.5 * kappa) * (bracket / r) * Complex(j1, y1);
    k.L1 = Complex(-(kappa / two_pi) * (bracket / r) * j1, 0.0);
    if (need_Q) {
        const double speed = ds.norm();
        const double j0 = specfun::bessel_j0(z);
        const double y0 = specfun::bessel_y0(z);
        k.Q = Complex(0.0, 0.5) * Complex(j0, y0) * speed;
        k.Q1 = Complex(-(1.0 / two_pi) * j0 * speed, 0.0);
    }
    return k;
}

// Analytic t -> s limits on the diagonal. L1 vanishes there; L2 equals the
// curvature-type limit of L itself; Q2 keeps the log of the local stretch.
inline Complex L2_diagonal(const CurveNodes& cn, int k) {
    const double W = cn.d2(0, k) * cn.d1(1, k) - cn.d2(1, k) * cn.d1(0, k);
    return Complex(W / (two_pi * cn.speed[k] * cn.speed[k]), 0.0);
}

inline Complex Q1_diagonal(const CurveNodes& cn, int k) {
    return Complex(-cn.speed[k] / two_pi, 0.0);
}

inline Complex Q2_diagonal(const CurveNodes& cn, int k, double kappa) {
    const double sp = cn.speed[k];
    const double re = -(specfun::euler_gamma + std::log(0.5 * kappa * sp)) / std::numbers::pi;
    return Complex(re, 0.5) * sp;
}

// ln(4 sin^2(pi d / N)) for d = 1..N-1 (index 0 unused).
inline std::vector<double> log_table(int N) {
    std::vector<double> tab(static_cast<std::size_t>(N), 0.0);
    for (int d = 1; d < N; ++d) {
        const double s = std::sin(std::numbers::pi * d / N);
        tab[static_cast<std::size_t>(d)] = std::log(4.0 * s * s);
    }
    return tab;
}

inline void assemble_core(const DiscreteBoundary& d, double kappa, bool need_Q, MatrixXcd* M,
                          MatrixXcd* Q) {
    const int n = d.total;
    if (M) M->resize(n, n);
    if (Q) Q->resize(n, n);
    const int ncurves = static_cast<int>(d.curves.size());
    std::vector<Eigen::VectorXd> rweights(static_cast<std::size_t>(ncurves));
    std::vector<std::vector<double>> ltabs(static_cast<std::size_t>(ncurves));
    for (int c = 0; c < ncurves; ++c) {
        rweights[static_cast<std::size_t>(c)] = kress_weight_offsets(d.curves[static_cast<std::size_t>(c)].N);
        ltabs[static_cast<std::size_t>(c)] = log_table(d.curves[static_cast<std::size_t>(c)].N);
    }
    // Row -> curve lookup.
    std::vector<int> curve_of(static_cast<std::size_t>(n));
    for (int c = 0; c < ncurves; ++c) {
        const auto& cn = d.curves[static_cast<std::size_t>(c)];
        for (int k = 0; k < cn.N; ++k) curve_of[static_cast<std::size_t>(cn.offset + k)] = c;
    }

    parallel_for(n, [&](int i) {
        const int ci = curve_of[static_cast<std::size_t>(i)];
        const auto& rcn = d.curves[static_cast<std::size_t>(ci)];
        const int ki = i - rcn.offset;
        const Vec2 xt = rcn.x.col(ki);
        for (int cj = 0; cj < ncurves; ++cj) {
            const auto& scn = d.curves[static_cast<std::size_t>(cj)];
            const double w = two_pi / scn.N;
            if (cj == ci) {
                const auto& R = rweights[static_cast<std::size_t>(cj)];
                const auto& ltab = ltabs[static_cast<std::size_t>(cj)];
                for (int kj = 0; kj < scn.N; ++kj) {
                    const int j = scn.offset + kj;
                    if (kj == ki) {
                        if (M) (*M)(i, j) = w * L2_diagonal(scn, kj);
                        if (Q)
                            (*Q)(i, j) = R[0] * Q1_diagonal(scn, kj) + w * Q2_diagonal(scn, kj, kappa);
                        continue;
                    }
                    const int dd = std::abs(ki - kj);
                    const KernelVals kv =
                        kernels_offdiag(xt, scn.x.col(kj), scn.d1.col(kj), kappa, Q != nullptr);
                    const double lg = ltab[static_cast<std::size_t>(dd)];
                    if (M) {
                        const Complex L2 = kv.L - kv.L1 * lg;
                        (*M)(i, j) = R[dd] * kv.L1 + w * L2;
                    }
                    if (Q) {
                        const Complex Q2 = kv.Q - kv.Q1 * lg;
                        (*Q)(i, j) = R[dd] * kv.Q1 + w * Q2;
                    }
                }
            } else {
                for (int kj = 0; kj < scn.N; ++kj) {
                    const int j = scn.offset + kj;
                    const KernelVals kv =
                        kernels_offdiag(xt, scn.x.col(kj), scn.d1.col(kj), kappa, Q != nullptr);
                    if (M) (*M)(i, j) = w * kv.L;
                    if (Q) (*Q)(i, j) = w * kv.Q;
                }
            }
        }
    });
}

inline const Curve& curve_ref(const Boundary& b, int c) {
    return c == 0 ? b.outer : b.holes[static_cast<std::size_t>(c - 1)];
}

} // namespace detail

inline MatrixXcd assemble_M(const DiscreteBoundary& d, double kappa) {
    MatrixXcd M;
    detail::assemble_core(d, kappa, false, &M, nullptr);
    return M;
}

inline MatrixXcd assemble_Q(const DiscreteBoundary& d, double kappa) {
    MatrixXcd Q;
    detail::assemble_core(d, kappa, true, nullptr, &Q);
    return Q;
}

inline OperatorMatrix assemble(const DiscreteBoundary& d, double kappa, double eta) {
    if (!(kappa > 0.0)) throw std::invalid_argument("assemble: kappa must be positive");
    if (eta * kappa < 0.0)
        throw std::invalid_argument("assemble: eta*kappa must be nonnegative");
    OperatorMatrix om;
    om.kappa = kappa;
    om.eta = eta;
    MatrixXcd M, Q;
    const bool need_Q = eta != 0.0;
    detail::assemble_core(d, kappa, need_Q, &M, need_Q ? &Q : nullptr);
    om.A = -M;
    if (need_Q) om.A -= Complex(0.0, eta) * Q;
    om.A.diagonal().array() += 1.0;
    return om;
}

// Layer potentials at a point p off the boundary by the plain trapezoid rule
// (spectrally accurate away from the near-boundary band). The kernels of 2D
// and 2S are halved to give the single operators D and S.
inline Complex eval_double_layer(const DiscreteBoundary& d, const VectorXcd& psi, const Vec2& p,
                                 double kappa) {
    Complex acc(0.0, 0.0);
    for (const auto& cn : d.curves) {
        const double w = two_pi / cn.N;
        for (int k = 0; k < cn.N; ++k) {
            const detail::KernelVals kv =
                detail::kernels_offdiag(p, cn.x.col(k), cn.d1.col(k), kappa, false);
            acc += w * 0.5 * kv.L * psi[cn.offset + k];
        }
    }
    return acc;
}

inline Complex eval_single_layer(const DiscreteBoundary& d, const VectorXcd& dens, const Vec2& p,
                                 double kappa) {
    Complex acc(0.0, 0.0);
    for (const auto& cn : d.curves) {
        const double w = two_pi / cn.N;
        for (int k = 0; k < cn.N; ++k) {
            const Vec2 diff = p - Vec2(cn.x.col(k));
            const double z = kappa * diff.norm();
            const Complex phi(0.25 * -specfun::bessel_y0(z), 0.25 * specfun::bessel_j0(z));
            acc += w * phi * cn.speed[k] * dens[cn.offset + k];
        }
    }
    return acc;
}

// Nystrom interpolation of [M_N psi] (or [Q_N psi]) at parameter t on the
// given curve: the product rule evaluated at an off-grid target, which
// extends grid null vectors to smooth functions of t with spectral accuracy.
inline Complex nystrom_interpolate(const DiscreteBoundary& d, const VectorXcd& psi, int curve,
                                   double t, double kappa,
                                   LayerKind kind = LayerKind::double_layer) {
    const bool want_Q = kind == LayerKind::single_layer;
    const auto& tc = d.curves[static_cast<std::size_t>(curve)];
    // A target colliding with a node is the matrix row itself.
    {
        const double h = two_pi / tc.N;
        const int knear = static_cast<int>(std::lround(t / h)) % tc.N;
        const double dt = std::remainder(t - knear * h, two_pi);
        if (std::abs(dt) < 1e-12) {
            MatrixXcd M;
            detail::assemble_core(d, kappa, want_Q, want_Q ? nullptr : &M, want_Q ? &M : nullptr);
            return (M.row(tc.offset + knear) * psi).value();
        }
    }
    const Vec2 xt = detail::curve_ref(d.boundary, curve).position(t);
    Complex acc(0.0, 0.0);
    for (std::size_t c = 0; c < d.curves.size(); ++c) {
        const auto& cn = d.curves[c];
        const double w = two_pi / cn.N;
        for (int k = 0; k < cn.N; ++k) {
            const Complex pk = psi[cn.offset + k];
            const detail::KernelVals kv =
                detail::kernels_offdiag(xt, cn.x.col(k), cn.d1.col(k), kappa, want_Q);
            if (static_cast<int>(c) == curve) {
                const double lg = std::log(4.0 * std::pow(std::sin(0.5 * (t - cn.s[k])), 2));
                const double R = kress_weight(cn.N, t - cn.s[k]);
                if (!want_Q)
                    acc += (R * kv.L1 + w * (kv.L - kv.L1 * lg)) * pk;
                else
                    acc += (R * kv.Q1 + w * (kv.Q - kv.Q1 * lg)) * pk;
            } else {
                acc += w * (want_Q ? kv.Q : kv.L) * pk;
            }
        }
    }
    return acc;
}

} // namespace drumeig
