#pragma once

// Dense complex linear algebra kernels: overflow-safe determinants from
// partial-pivot LU, smallest singular values (with vectors) via inverse
// iteration on A*A reusing a single LU, and polynomial roots via a balanced
// companion matrix. Factorization counters support cost accounting.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <atomic>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <vector>

namespace drumeig {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;
using Eigen::VectorXd;
using Complex = std::complex<double>;

namespace counters {
inline std::atomic<long long> lu_factorizations{0};
inline std::atomic<long long> svd_factorizations{0};
inline void reset() {
    lu_factorizations.store(0);
    svd_factorizations.store(0);
}
} // namespace counters

// det = mantissa * 2^exponent with |mantissa| in [1,2) (or mantissa == 0).
struct ScaledDeterminant {
    Complex mantissa{0.0, 0.0};
    long exponent = 0;

    bool is_zero() const { return mantissa == Complex(0.0, 0.0); }

    Complex value() const {
        return {std::ldexp(mantissa.real(), static_cast<int>(exponent)),
                std::ldexp(mantissa.imag(), static_cast<int>(exponent))};
    }

    double log10_abs() const {
        if (is_zero()) return -std::numeric_limits<double>::infinity();
        return std::log10(std::abs(mantissa)) + exponent * std::log10(2.0);
    }

    // mantissa * 2^(exponent - common_exponent); underflows quietly to 0.
    Complex value_rebased(long common_exponent) const {
        const int sh = static_cast<int>(exponent - common_exponent);
        return {std::ldexp(mantissa.real(), sh), std::ldexp(mantissa.imag(), sh)};
    }
};

namespace detail {

inline void renormalize(Complex& m, long& e) {
    const double a = std::abs(m);
    if (a == 0.0) {
        m = Complex(0.0, 0.0);
        e = 0;
        return;
    }
    const int k = std::ilogb(a);
    if (k != 0) {
        m = Complex(std::ldexp(m.real(), -k), std::ldexp(m.imag(), -k));
        e += k;
    }
}

} // namespace detail

inline ScaledDeterminant scaled_determinant_from_lu(const Eigen::PartialPivLU<MatrixXcd>& lu) {
    ScaledDeterminant d;
    Complex m(static_cast<double>(lu.permutationP().determinant()), 0.0);
    long e = 0;
    const auto diag = lu.matrixLU().diagonal();
    for (Eigen::Index i = 0; i < diag.size(); ++i) {
        m *= diag[i];
        if (m == Complex(0.0, 0.0)) return ScaledDeterminant{};
        detail::renormalize(m, e);
    }
    detail::renormalize(m, e);
    d.mantissa = m;
    d.exponent = e;
    return d;
}

inline ScaledDeterminant scaled_determinant(const MatrixXcd& A) {
    counters::lu_factorizations.fetch_add(1, std::memory_order_relaxed);
    Eigen::PartialPivLU<MatrixXcd> lu(A);
    return scaled_determinant_from_lu(lu);
}

// Rebase a set of scaled determinants to a shared power of two so their
// mutual ratios survive as plain doubles (values near roots may underflow to
// zero relative to the offset, which is exactly the right behavior).
inline std::vector<Complex> rebase_common(const std::vector<ScaledDeterminant>& ds) {
    long emax = std::numeric_limits<long>::min();
    for (const auto& d : ds)
        if (!d.is_zero()) emax = std::max(emax, d.exponent);
    std::vector<Complex> out(ds.size(), Complex(0.0, 0.0));
    if (emax == std::numeric_limits<long>::min()) return out;
    for (std::size_t i = 0; i < ds.size(); ++i)
        if (!ds[i].is_zero()) out[i] = ds[i].value_rebased(emax);
    return out;
}

struct SingularTriple {
    double sigma = 0.0;
    VectorXcd right; // v: A v ~ sigma u
    VectorXcd left;  // u
};

namespace detail {

inline VectorXcd deterministic_start(Eigen::Index n, int seed = 0) {
    VectorXcd v(n);
    const double ph = 1.234567 * seed;
    for (Eigen::Index j = 0; j < n; ++j)
        v[j] = Complex(std::cos(0.7 * static_cast<double>(j) + 0.3 + ph),
                       std::sin(1.3 * static_cast<double>(j) + 0.7 + 2.0 * ph));
    v.normalize();
    return v;
}

// Completes (sigma, left) from a converged right vector. Caveat: when sigma
// sits at the matvec rounding floor (~eps*||A||*sqrt(n)), A*v is dominated by
// rounding and the normalized left vector is a useless direction; callers
// holding an LU refine it by inverse iteration on AA* (see below).
inline SingularTriple triple_from(const MatrixXcd& A, const VectorXcd& v) {
    SingularTriple t;
    t.right = v;
    VectorXcd u = A * v;
    t.sigma = u.norm();
    t.left = (t.sigma > 0.0) ? VectorXcd(u / t.sigma) : v;
    return t;
}

// Inverse iteration on AA* toward the left singular vector of sigma_min,
// in place; optionally kept orthogonal to a fixed direction (safe only when
// the two smallest singular values are comparable, as at a double root).
inline void left_vector_iterate(const Eigen::PartialPivLU<MatrixXcd>& lu, VectorXcd& u,
                                const VectorXcd* avoid = nullptr, int iters = 3) {
    for (int it = 0; it < iters; ++it) {
        VectorXcd z = lu.adjoint().solve(lu.solve(u));
        if (avoid)
            for (int pass = 0; pass < 2; ++pass) z -= (*avoid) * avoid->dot(z);
        const double nz = z.norm();
        if (!std::isfinite(nz) || nz == 0.0) return;
        u = z / nz;
    }
}

// Smallest singular triple by inverse iteration on A*A through one LU of A.
inline SingularTriple smallest_singular_iter(const MatrixXcd& A,
                                             const Eigen::PartialPivLU<MatrixXcd>& lu,
                                             int max_iter, bool& ok) {
    VectorXcd v = deterministic_start(A.rows());
    v.normalize();
    double prev_growth = -1.0;
    ok = true;
    for (int it = 0; it < max_iter; ++it) {
        VectorXcd w = lu.adjoint().solve(v);
        VectorXcd z = lu.solve(w);
        const double growth = z.norm();
        if (!std::isfinite(growth) || growth == 0.0) {
            ok = false;
            return SingularTriple{};
        }
        v = z / growth;
        if (prev_growth >= 0.0 && std::abs(growth - prev_growth) <= 1e-13 * growth) break;
        prev_growth = growth;
    }
    SingularTriple t = triple_from(A, v);
    left_vector_iterate(lu, t.left);
    return t;
}

inline Eigen::JacobiSVD<MatrixXcd> full_svd(const MatrixXcd& A) {
    counters::svd_factorizations.fetch_add(1, std::memory_order_relaxed);
    return Eigen::JacobiSVD<MatrixXcd>(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
}

} // namespace detail

// Smallest singular value with right/left vectors. Falls back to a dense SVD
// when the inverse iteration breaks down (exactly singular matrix).
inline SingularTriple min_singular(const MatrixXcd& A, int max_iter = 40) {
    counters::lu_factorizations.fetch_add(1, std::memory_order_relaxed);
    Eigen::PartialPivLU<MatrixXcd> lu(A);
    bool ok = false;
    SingularTriple t = detail::smallest_singular_iter(A, lu, max_iter, ok);
    if (ok) return t;
    const auto svd = detail::full_svd(A);
    const Eigen::Index n = A.rows();
    SingularTriple s;
    s.sigma = svd.singularValues()[n - 1];
    s.right = svd.matrixV().col(n - 1);
    s.left = svd.matrixU().col(n - 1);
    return s;
}

// Two smallest singular triples (sigma1 <= sigma2), sharing one LU.
//
// sigma1 comes from plain inverse iteration on A*A (stable: the smallest
// direction is the one being amplified). sigma2 comes from Rayleigh-Ritz on
// a small Krylov space of the v1-deflated (A*A)^{-1}, projecting v1 out of
// every applied vector. Neither single-vector deflated iteration nor a joint
// Rayleigh-Ritz space works here: with sigma2/sigma1 beyond ~1e8 (routine at
// an eigenfrequency) the amplification along v1 turns a 1e-16 projection
// residue into the dominant component of one solve, and if v1 is kept inside
// the projected eigenproblem, its Ritz value inflates the small matrix's
// norm so that a backward-stable eigensolver (absolute error ~eps*|lambda1|)
// garbles every other eigenvector. Deflating v1 from the space keeps the
// small matrix's norm at 1/sigma2^2, making the second pair relatively
// accurate.
//
// The left vector u1 is also projected out between the two triangular
// solves. In exact arithmetic that is a no-op (A^{-*} maps the v1-orthogonal
// complement into the u1-orthogonal complement), but in floating point it is
// what keeps the basis clean: the ~1e-16 v1 residue that survives deflation
// of the input is amplified by 1/sigma1^2 inside the solve, and the solve's
// own rounding — eps times that huge intermediate norm, scattered across all
// directions — would otherwise rival the useful signal, filling the Krylov
// basis with noise that an after-the-fact v1 projection cannot remove.
// Cutting the amplification channel in the middle keeps the per-application
// noise near eps relative, so the Ritz values stagnate properly and the
// second pair comes out to full relative accuracy.
inline std::pair<SingularTriple, SingularTriple> min_singular_two(const MatrixXcd& A,
                                                                  int max_space = 12) {
    const Eigen::Index n = A.rows();
    auto svd_path = [&]() -> std::pair<SingularTriple, SingularTriple> {
        const auto svd = detail::full_svd(A);
        SingularTriple s1{svd.singularValues()[n - 1], svd.matrixV().col(n - 1),
                          svd.matrixU().col(n - 1)};
        SingularTriple s2{svd.singularValues()[n - 2], svd.matrixV().col(n - 2),
                          svd.matrixU().col(n - 2)};
        return {s1, s2};
    };
    if (n < 4) return svd_path();
    counters::lu_factorizations.fetch_add(1, std::memory_order_relaxed);
    Eigen::PartialPivLU<MatrixXcd> lu(A);
    bool ok1 = false;
    SingularTriple t1 = detail::smallest_singular_iter(A, lu, 40, ok1);
    if (!ok1) return svd_path();
    const VectorXcd& v1 = t1.right;
    const VectorXcd& u1 = t1.left;
    auto drop_v1 = [&v1](VectorXcd& w) {
        for (int pass = 0; pass < 2; ++pass) w -= v1 * v1.dot(w);
    };
    const int m_max = static_cast<int>(std::min<Eigen::Index>(n - 1, max_space));
    std::vector<VectorXcd> Q;
    for (int seed = 0; seed < 4 && Q.empty(); ++seed) {
        VectorXcd q0 = detail::deterministic_start(n, seed);
        drop_v1(q0);
        const double nq = q0.norm();
        if (nq > 1e-3) Q.push_back(q0 / nq);
    }
    if (Q.empty()) return svd_path();
    MatrixXcd H = MatrixXcd::Zero(m_max, m_max);
    int m = 0;
    double l2_prev = -1.0;
    bool bad = false;
    for (int j = 0; j < m_max; ++j) {
        VectorXcd z = lu.adjoint().solve(Q[static_cast<std::size_t>(j)]);
        for (int pass = 0; pass < 2; ++pass) z -= u1 * u1.dot(z);
        VectorXcd w = lu.solve(z);
        if (!w.allFinite()) {
            bad = m < 2;
            break;
        }
        drop_v1(w);
        const double nrm0 = w.norm();
        for (int pass = 0; pass < 2; ++pass)
            for (int i = 0; i <= j; ++i) {
                const std::complex<double> c = Q[static_cast<std::size_t>(i)].dot(w);
                H(i, j) += c;
                w -= Q[static_cast<std::size_t>(i)] * c;
            }
        m = j + 1;
        Eigen::SelfAdjointEigenSolver<MatrixXcd> es(
            MatrixXcd(0.5 * (H.topLeftCorner(m, m) + H.topLeftCorner(m, m).adjoint())),
            Eigen::EigenvaluesOnly);
        const double l2 = es.eigenvalues()[m - 1];
        if (m >= 3 && l2 > 0.0 && std::abs(l2 - l2_prev) <= 1e-12 * l2) break;
        l2_prev = l2;
        if (j + 1 >= m_max) break;
        const double nw = w.norm();
        if (nw > 1e-13 * nrm0) {
            H(j + 1, j) = nw;
            Q.push_back(w / nw);
        } else {
            // Krylov remainder at rounding level: re-seed with a fresh
            // direction orthogonal to v1 and the basis (H off-diagonal 0).
            VectorXcd f = detail::deterministic_start(n, j + 1);
            drop_v1(f);
            for (int pass = 0; pass < 2; ++pass)
                for (int i = 0; i <= j; ++i)
                    f -= Q[static_cast<std::size_t>(i)] * Q[static_cast<std::size_t>(i)].dot(f);
            const double nf = f.norm();
            if (!(nf > 1e-8)) break; // basis numerically spans everything
            Q.push_back(f / nf);
        }
    }
    if (bad || m < 1) return svd_path();
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(
        MatrixXcd(0.5 * (H.topLeftCorner(m, m) + H.topLeftCorner(m, m).adjoint())));
    if (!(es.eigenvalues()[m - 1] > 0.0)) return svd_path();
    VectorXcd v2 = VectorXcd::Zero(n);
    for (int i = 0; i < m; ++i)
        v2 += Q[static_cast<std::size_t>(i)] * es.eigenvectors()(i, m - 1);
    drop_v1(v2);
    const double nv2 = v2.norm();
    if (!(nv2 > 0.5)) return svd_path();
    SingularTriple t2 = detail::triple_from(A, VectorXcd(v2 / nv2));
    if (t2.sigma <= 1e-12) {
        // Both singular values at the rounding floor (double root): A*v2 is
        // noise, so rebuild the left vector inside the degenerate left space,
        // kept orthogonal to t1's (equal amplification makes that stable).
        detail::left_vector_iterate(lu, t2.left, &t1.left);
    }
    if (t2.sigma < t1.sigma) std::swap(t1, t2);
    return {t1, t2};
}

namespace detail {

// EISPACK-style balancing by powers of two (exact similarity in floating point).
inline void balance_in_place(MatrixXcd& C) {
    const Eigen::Index n = C.rows();
    bool done = false;
    int sweeps = 0;
    while (!done && sweeps++ < 50) {
        done = true;
        for (Eigen::Index i = 0; i < n; ++i) {
            double c = 0.0, r = 0.0;
            for (Eigen::Index j = 0; j < n; ++j) {
                if (j == i) continue;
                c += std::abs(C(j, i));
                r += std::abs(C(i, j));
            }
            if (c == 0.0 || r == 0.0) continue;
            const double s = c + r;
            double f = 1.0;
            while (c < r / 2.0) {
                f *= 2.0;
                c *= 4.0;
            }
            while (c >= r * 2.0) {
                f /= 2.0;
                c /= 4.0;
            }
            if ((c + r) / f < 0.95 * s) {
                done = false;
                C.row(i) /= f;
                C.col(i) *= f;
            }
        }
    }
}

} // namespace detail

// Roots of sum_k coeffs[k] z^k via the balanced companion matrix.
// Zero leading coefficients are always dropped (they do not change the root
// set). When trim_rel > 0, coefficients with |c| <= trim_rel * max|c| are
// also trimmed at both ends; each trailing drop removes one root at or near
// z = 0. With trim_rel == 0 exact zero constant terms are kept, so roots at
// z = 0 are reported.
inline std::vector<Complex> polynomial_roots(const VectorXcd& coeffs, double trim_rel = 0.0) {
    double cmax = 0.0;
    for (Eigen::Index k = 0; k < coeffs.size(); ++k) cmax = std::max(cmax, std::abs(coeffs[k]));
    if (cmax == 0.0) return {};
    const double cut = trim_rel * cmax;
    Eigen::Index hi = coeffs.size() - 1;
    while (hi > 0 && std::abs(coeffs[hi]) <= cut) --hi;
    Eigen::Index lo = 0;
    while (lo < hi && trim_rel > 0.0 && std::abs(coeffs[lo]) <= cut) ++lo;
    const Eigen::Index n = hi - lo;
    if (n < 1) return {};
    if (n == 1) return {-coeffs[lo] / coeffs[lo + 1]};
    MatrixXcd C = MatrixXcd::Zero(n, n);
    for (Eigen::Index i = 1; i < n; ++i) C(i, i - 1) = 1.0;
    for (Eigen::Index i = 0; i < n; ++i) C(i, n - 1) = -coeffs[lo + i] / coeffs[hi];
    detail::balance_in_place(C);
    Eigen::ComplexEigenSolver<MatrixXcd> es(C, /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("polynomial_roots: companion eigensolve failed");
    std::vector<Complex> roots(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) roots[static_cast<std::size_t>(i)] = es.eigenvalues()[i];
    return roots;
}

} // namespace drumeig
