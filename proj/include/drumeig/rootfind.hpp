#pragma once

// Real-interval rootfinding for analytic complex-valued functions by Boyd's
// degree-doubling Chebyshev method, plus the grid-and-parabola minimizer used
// to refine close root pairs on sigma_min curves.
//
// Boyd: sample g(kappa(theta)) with kappa = mid + hw*cos(theta) at theta_j =
// pi j / M, extend evenly, take FFT coefficients c_m, and double M (reusing
// samples) until |c_M/c_0| <= decay tolerance. Roots of the palindromic
// polynomial z^M sum c_m z^m near the unit circle map through the Joukowski
// transform mu = (z + 1/z)/2 to kappa = mid + hw*Re(mu); the residual
// beta = hw*Im(mu) measures how accurately the root was resolved.

#include "errors.hpp"
#include "linalg.hpp"
#include "parallel.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <utility>
#include <vector>

namespace drumeig {

struct BoydOptions {
    double coeff_decay_tol = 1e-12;
    int M_initial = 4;
    int M_max = 512;
    double beta_max = 1e-14;  // callers override (solver: 1e-12 for resonant shapes)
    double circle_tol = 1e-2; // ||z|-1| filter on companion eigenvalues
    // Candidates failing the beta filter:
    //  - clusters with mutual gap <= cluster_gap are kept as suspects (a
    //    multiple root splits by evaluation noise; subdividing cannot help);
    //  - isolated failures trigger bisection down to width beta_subdiv_floor,
    //    below which they are kept as suspects for the caller to verify.
    double cluster_gap = 1e-4;
    double beta_subdiv_floor = 1e-2;
    double min_width_rel = 1e-13; // decay-failure bisection floor (times max(1,|b|))
};

struct BoydRoot {
    double kappa = 0.0;
    double beta = 0.0;
};

struct RootSet {
    std::vector<BoydRoot> roots;    // |beta| <= beta_max, sorted ascending
    std::vector<BoydRoot> suspects; // beta filter failed; verify independently
    int M_final = 0;
    int subdivisions = 0;
    long evaluations = 0;
};

namespace detail {

inline ScaledDeterminant to_scaled(Complex v) {
    ScaledDeterminant d;
    if (v == Complex(0.0, 0.0)) return d;
    Complex m = v;
    long e = 0;
    renormalize(m, e);
    d.mantissa = m;
    d.exponent = e;
    return d;
}

struct BoydStage {
    int M = 0;
    std::vector<ScaledDeterminant> samples; // g at theta_j = pi j / M, j = 0..M
};

// Fourier coefficients c_0..c_M of the even extension; empty if all samples vanish.
inline std::vector<Complex> stage_coefficients(const BoydStage& st) {
    const int M = st.M;
    const int n = 2 * M;
    std::vector<Complex> rebased = rebase_common(st.samples);
    bool any = false;
    for (const auto& v : rebased)
        if (v != Complex(0.0, 0.0)) any = true;
    if (!any) return {};
    std::vector<Complex> grid(static_cast<std::size_t>(n));
    for (int j = 0; j <= M; ++j) grid[static_cast<std::size_t>(j)] = rebased[static_cast<std::size_t>(j)];
    for (int j = 1; j < M; ++j) grid[static_cast<std::size_t>(n - j)] = rebased[static_cast<std::size_t>(j)];
    Eigen::FFT<double> fft;
    std::vector<Complex> freq(static_cast<std::size_t>(n));
    fft.fwd(freq, grid);
    std::vector<Complex> c(static_cast<std::size_t>(M + 1));
    for (int m = 0; m <= M; ++m) c[static_cast<std::size_t>(m)] = freq[static_cast<std::size_t>(m)] / static_cast<double>(n);
    return c;
}

inline double stage_decay(const std::vector<Complex>& c) {
    if (c.empty()) return 0.0;
    double denom = std::abs(c[0]);
    if (denom < 1e-300) {
        for (const auto& v : c) denom = std::max(denom, std::abs(v));
    }
    if (denom == 0.0) return 0.0;
    return std::abs(c.back()) / denom;
}

inline void sort_dedup_roots(std::vector<BoydRoot>& v) {
    std::sort(v.begin(), v.end(), [](const BoydRoot& a, const BoydRoot& b) { return a.kappa < b.kappa; });
    std::vector<BoydRoot> out;
    for (const auto& r : v) {
        if (!out.empty() && std::abs(r.kappa - out.back().kappa) <= 1e-12 * std::max(1.0, std::abs(r.kappa))) {
            if (std::abs(r.beta) < std::abs(out.back().beta)) out.back() = r;
        } else {
            out.push_back(r);
        }
    }
    v = std::move(out);
}

inline RootSet merge_rootsets(RootSet x, RootSet y) {
    RootSet m;
    m.roots = std::move(x.roots);
    m.roots.insert(m.roots.end(), y.roots.begin(), y.roots.end());
    m.suspects = std::move(x.suspects);
    m.suspects.insert(m.suspects.end(), y.suspects.begin(), y.suspects.end());
    sort_dedup_roots(m.roots);
    sort_dedup_roots(m.suspects);
    // An accepted root supersedes any suspect at the same location.
    std::vector<BoydRoot> kept;
    for (const auto& s : m.suspects) {
        bool dup = false;
        for (const auto& r : m.roots)
            if (std::abs(s.kappa - r.kappa) <= 1e-10 * std::max(1.0, std::abs(s.kappa))) dup = true;
        if (!dup) kept.push_back(s);
    }
    m.suspects = std::move(kept);
    m.M_final = std::max(x.M_final, y.M_final);
    m.subdivisions = x.subdivisions + y.subdivisions;
    m.evaluations = x.evaluations + y.evaluations;
    return m;
}

inline RootSet boyd_recurse(const std::function<ScaledDeterminant(double)>& g, double a, double b,
                            const BoydOptions& opts, int depth) {
    const double mid = 0.5 * (a + b);
    const double hw = 0.5 * (b - a);

    BoydStage st;
    st.M = std::max(2, opts.M_initial);
    st.samples.resize(static_cast<std::size_t>(st.M) + 1);
    long evals = 0;
    auto kappa_of = [&](double theta) { return mid + hw * std::cos(theta); };
    parallel_for(st.M + 1, [&](int j) {
        st.samples[static_cast<std::size_t>(j)] = g(kappa_of(std::numbers::pi * j / st.M));
    });
    evals += st.M + 1;

    std::vector<Complex> coeffs = stage_coefficients(st);
    bool converged = coeffs.empty() || stage_decay(coeffs) <= opts.coeff_decay_tol;
    while (!converged && st.M < opts.M_max) {
        const int M2 = 2 * st.M;
        std::vector<ScaledDeterminant> next(static_cast<std::size_t>(M2) + 1);
        for (int j = 0; j <= st.M; ++j) next[static_cast<std::size_t>(2 * j)] = st.samples[static_cast<std::size_t>(j)];
        parallel_for(st.M, [&](int i) {
            const int j = 2 * i + 1;
            next[static_cast<std::size_t>(j)] = g(kappa_of(std::numbers::pi * j / M2));
        });
        evals += st.M;
        st.M = M2;
        st.samples = std::move(next);
        coeffs = stage_coefficients(st);
        converged = coeffs.empty() || stage_decay(coeffs) <= opts.coeff_decay_tol;
    }

    if (!converged) {
        const double floor_w = opts.min_width_rel * std::max(1.0, std::abs(b));
        if (b - a < floor_w)
            throw NoConvergenceError("boyd_find_roots: coefficient decay not reached at the width floor",
                                     a, b, st.M, coeffs.empty() ? 0.0 : stage_decay(coeffs));
        RootSet lhs = boyd_recurse(g, a, mid, opts, depth + 1);
        RootSet rhs = boyd_recurse(g, mid, b, opts, depth + 1);
        RootSet m = merge_rootsets(std::move(lhs), std::move(rhs));
        m.subdivisions += 1;
        m.evaluations += evals;
        return m;
    }

    RootSet rs;
    rs.M_final = st.M;
    rs.evaluations = evals;
    if (coeffs.empty()) return rs; // g vanished identically on the sample grid

    // Palindromic polynomial z^M sum_{m=-M..M} c_m z^m with c_{-m} = c_m.
    const int M = st.M;
    VectorXcd poly(2 * M + 1);
    for (int m = -M; m <= M; ++m) poly[m + M] = coeffs[static_cast<std::size_t>(std::abs(m))];
    std::vector<Complex> zs = polynomial_roots(poly, 1e-14);

    std::vector<BoydRoot> candidates;
    for (const Complex& z : zs) {
        const double az = std::abs(z);
        if (az == 0.0 || std::abs(az - 1.0) > opts.circle_tol) continue;
        const Complex mu = 0.5 * (z + 1.0 / z);
        if (std::abs(mu.real()) > 1.0 + 1e-10) continue;
        BoydRoot r;
        r.kappa = std::clamp(mid + hw * mu.real(), a, b);
        r.beta = hw * mu.imag();
        candidates.push_back(r);
    }
    std::sort(candidates.begin(), candidates.end(),
              [](const BoydRoot& x, const BoydRoot& y) { return x.kappa < y.kappa; });

    std::vector<BoydRoot> failures;
    for (const auto& r : candidates) {
        if (std::abs(r.beta) <= opts.beta_max)
            rs.roots.push_back(r);
        else
            failures.push_back(r);
    }
    sort_dedup_roots(rs.roots);
    if (failures.empty()) return rs;

    // Split failures into tight clusters (noise-split multiple roots) and
    // isolated ones.
    bool any_isolated = false;
    for (std::size_t i = 0; i < failures.size(); ++i) {
        const bool near_prev = i > 0 && failures[i].kappa - failures[i - 1].kappa <= opts.cluster_gap;
        const bool near_next =
            i + 1 < failures.size() && failures[i + 1].kappa - failures[i].kappa <= opts.cluster_gap;
        if (!near_prev && !near_next) any_isolated = true;
    }

    if (any_isolated && (b - a) > opts.beta_subdiv_floor) {
        RootSet lhs = boyd_recurse(g, a, mid, opts, depth + 1);
        RootSet rhs = boyd_recurse(g, mid, b, opts, depth + 1);
        RootSet m = merge_rootsets(std::move(lhs), std::move(rhs));
        m.subdivisions += 1;
        m.evaluations += evals;
        m.M_final = std::max(m.M_final, rs.M_final);
        return m;
    }

    rs.suspects = std::move(failures);
    sort_dedup_roots(rs.suspects);
    return rs;
}

} // namespace detail

inline RootSet boyd_find_roots(const std::function<ScaledDeterminant(double)>& g, double a, double b,
                               const BoydOptions& opts = {}) {
    if (!(a < b)) throw std::invalid_argument("boyd_find_roots: need a < b");
    RootSet rs = detail::boyd_recurse(g, a, b, opts, 0);
    detail::sort_dedup_roots(rs.roots);
    detail::sort_dedup_roots(rs.suspects);
    return rs;
}

inline RootSet boyd_find_roots(const std::function<Complex(double)>& g, double a, double b,
                               const BoydOptions& opts = {}) {
    return boyd_find_roots([&g](double k) { return detail::to_scaled(g(k)); }, a, b, opts);
}

struct GridMin {
    double x = 0.0;
    double value = 0.0;
};

namespace detail {

struct GridMinSearch {
    const std::function<double(double)>* h = nullptr;
    double tol = 1e-10;
    double lo = 0.0, hi = 0.0; // top-level bounds; expansions clip here
    long evals = 0;
    long eval_cap = 200000;

    double eval(double x) {
        ++evals;
        return (*h)(x);
    }

    void refine(double x1, double h1, double x2, double h2, double x3, double h3, int depth,
                std::vector<GridMin>& out) {
        const double cell0 = 0.5 * (x3 - x1);
        // Wall height at entry: sets the scale against which a model-error
        // rise must be judged significant (guards the noise floor of h).
        const double scale0 = std::max({h1, h3, std::numeric_limits<double>::min()});
        double bx = x2, bh = h2;
        double prev_xv = std::numeric_limits<double>::quiet_NaN();
        for (int it = 0; it < 120 && evals < eval_cap; ++it) {
            if (x3 - x1 <= tol) break;
            const double d21 = x2 - x1, d23 = x2 - x3;
            const double num = d21 * d21 * (h2 - h3) - d23 * d23 * (h2 - h1);
            const double den = d21 * (h2 - h3) - d23 * (h2 - h1);
            double xv = 0.0;
            bool parabolic = false;
            if (den != 0.0) {
                xv = x2 - 0.5 * num / den;
                parabolic = std::isfinite(xv) && xv > x1 && xv < x3;
            }
            if (parabolic && std::abs(xv - x2) <= tol) {
                // Vertex sits on x2: converged. One last evaluation there
                // typically gains a few digits over the bracket center.
                const double hv = eval(xv);
                if (hv < bh) {
                    bh = hv;
                    bx = xv;
                }
                break;
            }
            if (!parabolic) xv = (x3 - x2 > x2 - x1) ? 0.5 * (x2 + x3) : 0.5 * (x1 + x2);
            // Keep the new point away from the existing ones so the next
            // triple stays numerically non-degenerate.
            xv = std::clamp(xv, x1 + 0.02 * (x2 - x1), x3 - 0.02 * (x3 - x2));
            const double hv = eval(xv);
            if (hv < bh) {
                bh = hv;
                bx = xv;
            }
            if (parabolic && hv > h2 && depth < 16 && (x3 - x1) > 4.0 * tol) {
                // Model error test: the fitted parabola through the bracket
                // predicts h at xv; an actual value far above the prediction
                // (relative to the entry wall height) means the bracket hides
                // more than one dip. Re-grid it, expanded by one cell.
                const double p1 = (xv - x2) * (xv - x3) / ((x1 - x2) * (x1 - x3));
                const double p2 = (xv - x1) * (xv - x3) / ((x2 - x1) * (x2 - x3));
                const double p3 = (xv - x1) * (xv - x2) / ((x3 - x1) * (x3 - x2));
                const double predicted = h1 * p1 + h2 * p2 + h3 * p3;
                if (hv - predicted > 1e-10 * scale0) {
                    const double ea = std::max(lo, x1 - cell0);
                    const double eb = std::min(hi, x3 + cell0);
                    scan(ea, eb, 8, depth + 1, out);
                    return;
                }
            }
            // Converged once successive parabola vertices agree to tol.
            if (parabolic && std::isfinite(prev_xv) && std::abs(xv - prev_xv) < tol) break;
            if (parabolic) prev_xv = xv;
            // Keep the three consecutive points around the smallest value.
            double xs[4] = {x1, x2, xv, x3};
            double hsv[4] = {h1, h2, hv, h3};
            if (xv < x2) {
                std::swap(xs[1], xs[2]);
                std::swap(hsv[1], hsv[2]);
            }
            int imin = 0;
            for (int k = 1; k < 4; ++k)
                if (hsv[k] < hsv[imin]) imin = k;
            if (imin == 0) imin = 1;
            if (imin == 3) imin = 2;
            x1 = xs[imin - 1];
            h1 = hsv[imin - 1];
            x2 = xs[imin];
            h2 = hsv[imin];
            x3 = xs[imin + 1];
            h3 = hsv[imin + 1];
            if (!(x2 > x1 && x3 > x2)) break;
        }
        out.push_back({bx, bh});
    }

    void scan(double a, double b, int n, int depth, std::vector<GridMin>& out) {
        if (depth > 16 || evals >= eval_cap) return;
        std::vector<double> xs(static_cast<std::size_t>(n) + 1), hs(static_cast<std::size_t>(n) + 1);
        for (int i = 0; i <= n; ++i) {
            xs[static_cast<std::size_t>(i)] = a + (b - a) * i / n;
            hs[static_cast<std::size_t>(i)] = eval(xs[static_cast<std::size_t>(i)]);
        }
        for (int i = 1; i < n; ++i) {
            const double hm = hs[static_cast<std::size_t>(i)];
            const bool is_min = hm <= hs[static_cast<std::size_t>(i - 1)] && hm <= hs[static_cast<std::size_t>(i + 1)] &&
                                (hm < hs[static_cast<std::size_t>(i - 1)] || hm < hs[static_cast<std::size_t>(i + 1)]);
            if (is_min)
                refine(xs[static_cast<std::size_t>(i - 1)], hs[static_cast<std::size_t>(i - 1)],
                       xs[static_cast<std::size_t>(i)], hs[static_cast<std::size_t>(i)],
                       xs[static_cast<std::size_t>(i + 1)], hs[static_cast<std::size_t>(i + 1)], depth, out);
        }
    }
};

} // namespace detail

// Locates interior local minima of h >= 0 on [a,b]: regular grid bracketing,
// then iterated 3-point parabola fits; brackets hiding a double dip are
// re-gridded recursively. Returns minima sorted by x, deduplicated at 3*tol.
inline std::vector<GridMin> grid_parabolic_min(const std::function<double(double)>& h, double a, double b,
                                               int n_grid, double tol) {
    if (!(a < b)) throw std::invalid_argument("grid_parabolic_min: need a < b");
    if (n_grid < 8) throw std::invalid_argument("grid_parabolic_min: n_grid must be >= 8");
    detail::GridMinSearch s;
    s.h = &h;
    s.tol = tol;
    s.lo = a;
    s.hi = b;
    std::vector<GridMin> out;
    s.scan(a, b, n_grid, 0, out);
    std::sort(out.begin(), out.end(), [](const GridMin& p, const GridMin& q) { return p.x < q.x; });
    std::vector<GridMin> dedup;
    for (const auto& m : out) {
        if (!dedup.empty() && std::abs(m.x - dedup.back().x) <= 3.0 * tol) {
            if (m.value < dedup.back().value) dedup.back() = m;
        } else {
            dedup.push_back(m);
        }
    }
    return dedup;
}

} // namespace drumeig
