#pragma once

// Eigenfrequency pipeline over a real interval [a,b]:
//   1. split into windows sized to hold ~10 eigenvalues by Weyl density;
//   2. in each window run Boyd's rootfinder on the analytic determinant
//      f_N(kappa) = det(I - M_N - i eta Q_N) at window-dependent N;
//   3. merge, deduplicate, and verify each determinant root by sigma_min;
//   4. root pairs closer than the threshold s (and rootfinder suspects,
//      typically noise-split multiple roots) go to the SVD fallback: locate
//      minima of sigma_min(kappa)^2 by grid+parabola, read multiplicity off
//      the second singular value;
//   5. attach relative error estimates and, for eta = 0 solves, spurious-root
//      flags from the combined-field cross-check;
//   6. audit the count against the two-term Weyl law when the interval
//      starts low enough to contain the whole spectrum up to b.

#include "geometry.hpp"
#include "linalg.hpp"
#include "nystrom.hpp"
#include "parallel.hpp"
#include "rootfind.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <list>
#include <string>
#include <vector>

namespace drumeig {

enum class Representation { cfie, dlp, custom };

struct SolveOptions {
    Representation representation = Representation::cfie;
    double custom_eta = 0.0;                // used when representation == custom
    std::function<int(double)> N_rule;      // empty -> default for the shape
    double close_root_threshold = 1e-3;     // s
    double beta_max = 0.0;                  // 0 -> auto: 1e-14 generic, 1e-12 crescent
    BoydOptions boyd;                       // beta_max field is overridden by the above
    double window_width_min = 0.25;
    double window_mean_gaps = 10.0;         // w(kappa) = max(min, gaps*2pi/(Area*kappa))
    double svd_tol = 1e-5;                  // sigma gate for SVD-path roots & spurious check
    double det_accept_sigma = 1e-8;         // sigma gate for determinant roots
    int svd_grid_points = 20;               // grid for the sigma_min^2 minimizer
    double svd_refine_tol = 1e-11;
    int interior_grid_n = 200;              // error-estimate quadrature resolution
    bool compute_error_estimates = true;
    bool weyl_audit = true;
};

struct EigResult {
    double kappa = 0.0;
    double beta = 0.0; // 0 for method "svd" (no Boyd residual exists there)
    std::string method; // "boyd-det" | "svd"
    int N_used = 0;
    double err_est = 0.0;
    bool err_est_up_to_constant = false;
    bool spurious = false;
    double sigma_min = 0.0; // of the solving representation at kappa
};

struct WeylAudit {
    double expected = 0.0;
    int found = 0;
    double area = 0.0;
    double perimeter = 0.0;
    bool audited = false;
    bool warning = false;
};

struct SolveOutcome {
    std::vector<EigResult> eigenfrequencies;
    WeylAudit weyl;
    double timing_seconds = 0.0;
    long determinant_evaluations = 0;
    long sigma_evaluations = 0;
    long long lu_factorizations = 0;
    long long svd_factorizations = 0;
};

inline double weyl_count(double area, double perimeter, double kappa) {
    return area * kappa * kappa / (2.0 * two_pi) - perimeter * kappa / (2.0 * two_pi);
}

inline double weyl_count(const Boundary& b, double kappa) {
    return weyl_count(area(b), perimeter(b), kappa);
}

inline int default_N_rule(const Boundary& b, double kappa) {
    const bool crescent = b.shape_name == "crescent";
    const double raw = crescent ? std::max(350.0, 100.0 + 7.0 * kappa)
                                : std::max(150.0, 100.0 + 5.0 * kappa);
    int n = static_cast<int>(std::ceil(raw));
    if (n % 2 != 0) ++n;
    return n;
}

struct ErrorEstimate {
    double value = 0.0;
    bool up_to_constant = false;
    double sigma_min_dlp = 0.0;
};

// Relative-error estimate C * sigma_min(I - M_N) / (2 kappa ||D phi||_L2(Omega))
// with C = 3.5 on star-shaped domains, else C = 1 reported as up-to-constant.
// `dlp_triple` may pass a precomputed smallest singular triple of I - M_N.
inline ErrorEstimate estimate_error(const DiscreteBoundary& disc, double kappa, int grid_n = 200,
                                    const SingularTriple* dlp_triple = nullptr) {
    SingularTriple trip;
    if (dlp_triple) {
        trip = *dlp_triple;
    } else {
        trip = min_singular(assemble(disc, kappa, 0.0).A);
    }
    const InteriorGrid grid = interior_grid(disc, grid_n, grid_n);
    if (grid.points.size() < 100)
        throw std::runtime_error("estimate_error: interior grid too coarse (fewer than 100 points)");
    const int npts = static_cast<int>(grid.points.size());
    std::vector<double> sq(static_cast<std::size_t>(npts), 0.0);
    parallel_for(npts, [&](int i) {
        const Complex v = eval_double_layer(disc, trip.right, grid.points[static_cast<std::size_t>(i)], kappa);
        sq[static_cast<std::size_t>(i)] = std::norm(v);
    });
    double total = 0.0;
    for (double s : sq) total += s;
    const double norm_omega = std::sqrt(total * grid.cell_area());
    ErrorEstimate est;
    est.sigma_min_dlp = trip.sigma;
    est.up_to_constant = !disc.boundary.star_shaped;
    const double C = disc.boundary.star_shaped ? 3.5 : 1.0;
    est.value = C * trip.sigma / (2.0 * kappa * norm_omega);
    return est;
}

namespace detail {

inline double eta_of(const SolveOptions& o, double kappa) {
    switch (o.representation) {
    case Representation::cfie: return kappa;
    case Representation::dlp: return 0.0;
    default: return o.custom_eta;
    }
}

struct DetRoot {
    double kappa;
    double beta;
    int N;
};

struct Interval {
    double lo, hi;
    int N;
};

inline void merge_intervals(std::vector<Interval>& v) {
    std::sort(v.begin(), v.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    std::vector<Interval> out;
    for (const auto& iv : v) {
        if (!out.empty() && iv.lo <= out.back().hi) {
            out.back().hi = std::max(out.back().hi, iv.hi);
            out.back().N = std::max(out.back().N, iv.N);
        } else {
            out.push_back(iv);
        }
    }
    v = std::move(out);
}

} // namespace detail

// sigma_min of the chosen representation at n_samples equispaced frequencies.
inline std::vector<std::pair<double, double>> sweep_sigma_min(const Boundary& b, double a, double bb,
                                                              int n_samples,
                                                              const SolveOptions& opts = {}) {
    if (n_samples < 2) throw std::invalid_argument("sweep_sigma_min: n_samples must be >= 2");
    const int N = opts.N_rule ? opts.N_rule(bb) : default_N_rule(b, bb);
    const DiscreteBoundary disc = discretize(b, N);
    std::vector<std::pair<double, double>> out(static_cast<std::size_t>(n_samples));
    std::vector<double> kappas(static_cast<std::size_t>(n_samples));
    for (int i = 0; i < n_samples; ++i)
        kappas[static_cast<std::size_t>(i)] = a + (bb - a) * i / (n_samples - 1);
    parallel_for(n_samples, [&](int i) {
        const double k = kappas[static_cast<std::size_t>(i)];
        const double sigma = min_singular(assemble(disc, k, detail::eta_of(opts, k)).A).sigma;
        out[static_cast<std::size_t>(i)] = {k, sigma};
    });
    return out;
}

inline SolveOutcome solve_interval(const Boundary& b, double a, double bb,
                                   const SolveOptions& opts = {}) {
    if (!(0.0 < a && a < bb)) throw std::invalid_argument("solve_interval: need 0 < a < b");
    const auto t0 = std::chrono::steady_clock::now();
    const long long lu0 = counters::lu_factorizations.load();
    const long long svd0 = counters::svd_factorizations.load();

    SolveOutcome out;
    const double dom_area = area(b);
    const double dom_perimeter = perimeter(b);
    auto n_rule = [&](double k) {
        int n = opts.N_rule ? opts.N_rule(k) : default_N_rule(b, k);
        if (n % 2 != 0) ++n;
        return std::max(n, 64);
    };
    BoydOptions bopts = opts.boyd;
    bopts.beta_max = opts.beta_max > 0.0
                         ? opts.beta_max
                         : (b.shape_name == "crescent" ? 1e-12 : 1e-14);
    const double s = opts.close_root_threshold;

    // Discretizations are cached per N so windows and verification share them.
    // (std::list: growing the cache must not invalidate held references.)
    std::list<std::pair<int, DiscreteBoundary>> disc_cache;
    auto disc_for = [&](int N) -> const DiscreteBoundary& {
        for (auto& [n, d] : disc_cache)
            if (n == N) return d;
        disc_cache.emplace_back(N, discretize(b, N));
        return disc_cache.back().second;
    };
    auto sigma_at = [&](double kappa, int N, double eta) {
        ++out.sigma_evaluations;
        return min_singular(assemble(disc_for(N), kappa, eta).A);
    };

    // --- determinant search over windows -------------------------------
    std::vector<detail::DetRoot> det_roots;
    std::vector<detail::DetRoot> suspects;
    double wa = a;
    while (wa < bb - 1e-14) {
        const double w = std::max(opts.window_width_min,
                                  opts.window_mean_gaps * two_pi / (dom_area * wa));
        const double wb = std::min(bb, wa + w);
        const int N = n_rule(wb);
        const DiscreteBoundary& disc = disc_for(N);
        auto g = [&](double kappa) {
            return scaled_determinant(assemble(disc, kappa, detail::eta_of(opts, kappa)).A);
        };
        RootSet rs = boyd_find_roots(std::function<ScaledDeterminant(double)>(g), wa, wb, bopts);
        out.determinant_evaluations += rs.evaluations;
        for (const auto& r : rs.roots) det_roots.push_back({r.kappa, r.beta, N});
        for (const auto& r : rs.suspects) suspects.push_back({r.kappa, r.beta, N});
        wa = wb;
    }

    auto dedup_tol = [](double k) { return 1e-11 * std::max(1.0, std::abs(k)); };
    auto sort_roots = [](std::vector<detail::DetRoot>& v) {
        std::sort(v.begin(), v.end(),
                  [](const detail::DetRoot& x, const detail::DetRoot& y) { return x.kappa < y.kappa; });
    };
    sort_roots(det_roots);
    {
        std::vector<detail::DetRoot> uniq;
        for (const auto& r : det_roots) {
            if (!uniq.empty() && r.kappa - uniq.back().kappa <= dedup_tol(r.kappa)) {
                if (std::abs(r.beta) < std::abs(uniq.back().beta)) uniq.back() = r;
            } else {
                uniq.push_back(r);
            }
        }
        det_roots = std::move(uniq);
    }

    // --- route close pairs and suspects to the SVD fallback ------------
    std::vector<detail::Interval> svd_intervals;
    {
        std::vector<bool> drop(det_roots.size(), false);
        for (std::size_t i = 0; i + 1 < det_roots.size(); ++i) {
            if (det_roots[i + 1].kappa - det_roots[i].kappa < s) {
                drop[i] = drop[i + 1] = true;
                const double mid = 0.5 * (det_roots[i].kappa + det_roots[i + 1].kappa);
                svd_intervals.push_back(
                    {mid - 5.0 * s, mid + 5.0 * s, std::max(det_roots[i].N, det_roots[i + 1].N)});
            }
        }
        std::vector<detail::DetRoot> kept;
        for (std::size_t i = 0; i < det_roots.size(); ++i)
            if (!drop[i]) kept.push_back(det_roots[i]);
        det_roots = std::move(kept);
    }
    // Suspects born from one unresolved dip agree to far better than s, so a
    // tight window around the cluster pins the minimum cheaply; a sibling
    // zero hiding outside the window is recovered by the sibling zoom below.
    std::sort(suspects.begin(), suspects.end(),
              [](const detail::DetRoot& x, const detail::DetRoot& y) { return x.kappa < y.kappa; });
    for (std::size_t i = 0; i < suspects.size();) {
        std::size_t j = i + 1;
        int N = suspects[i].N;
        while (j < suspects.size() && suspects[j].kappa - suspects[j - 1].kappa <= 0.1 * s) {
            N = std::max(N, suspects[j].N);
            ++j;
        }
        const double c = 0.5 * (suspects[i].kappa + suspects[j - 1].kappa);
        const double radius = 0.5 * (suspects[j - 1].kappa - suspects[i].kappa);
        const double hw = std::max({10.0 * radius, 1e-6 * std::max(1.0, std::abs(c)),
                                    1e3 * opts.svd_refine_tol});
        svd_intervals.push_back({c - hw, c + hw, N});
        i = j;
    }
    detail::merge_intervals(svd_intervals);

    struct SvdRoot {
        double kappa;
        double sigma1;
        double sigma2;
        int N;
    };
    std::vector<SvdRoot> svd_roots;
    for (const auto& iv : svd_intervals) {
        const double lo = std::max(iv.lo, 0.5 * a);
        const double hi = iv.hi;
        const DiscreteBoundary& disc = disc_for(iv.N);
        auto h = [&](double kappa) {
            ++out.sigma_evaluations;
            const double sg = min_singular(assemble(disc, kappa, detail::eta_of(opts, kappa)).A).sigma;
            return sg * sg;
        };
        std::vector<SvdRoot> found;
        auto consider = [&](double x) {
            if (x < a - dedup_tol(x) || x > bb + dedup_tol(x)) return;
            ++out.sigma_evaluations;
            const auto [t1, t2] = min_singular_two(assemble(disc, x, detail::eta_of(opts, x)).A);
            if (t1.sigma <= opts.svd_tol) found.push_back({x, t1.sigma, t2.sigma, iv.N});
        };
        const auto minima = grid_parabolic_min(std::function<double(double)>(h), lo, hi,
                                               opts.svd_grid_points, opts.svd_refine_tol);
        for (const auto& m : minima) consider(m.x);
        // Sibling zoom: a pair closer than the window resolution shows up as
        // a single minimum, but the second singular value there measures the
        // distance to the hidden neighbor's branch: sigma_2 / (local slope of
        // sigma) predicts the separation. When that prediction lands within
        // close-pair range, re-scan a window of that size at full resolution.
        const double cell = (hi - lo) / opts.svd_grid_points;
        const std::vector<SvdRoot> snapshot = found;
        for (const auto& r : snapshot) {
            if (r.sigma2 <= 10.0 * r.sigma1) continue; // true double, no sibling to find
            double xw = r.kappa + cell;
            if (xw > hi) xw = r.kappa - cell;
            const double sw = std::sqrt(h(xw));
            const double slope = (sw - r.sigma1) / cell;
            if (!(slope > 0.0)) continue;
            double dhat = r.sigma2 / slope;
            if (dhat > 1.2 * s) continue; // no sibling within close-pair range
            dhat = std::max(dhat, 50.0 * opts.svd_refine_tol);
            const double zlo = std::max(r.kappa - 3.0 * dhat, 0.25 * lo);
            const auto near_minima =
                grid_parabolic_min(std::function<double(double)>(h), zlo, r.kappa + 3.0 * dhat,
                                   opts.svd_grid_points, opts.svd_refine_tol);
            for (const auto& m : near_minima)
                if (std::abs(m.x - r.kappa) > 3.0 * opts.svd_refine_tol) consider(m.x);
        }
        svd_roots.insert(svd_roots.end(), found.begin(), found.end());
    }
    std::sort(svd_roots.begin(), svd_roots.end(),
              [](const SvdRoot& x, const SvdRoot& y) { return x.kappa < y.kappa; });
    {
        std::vector<SvdRoot> uniq;
        for (const auto& r : svd_roots) {
            if (!uniq.empty() && r.kappa - uniq.back().kappa <= dedup_tol(r.kappa)) {
                if (r.sigma1 < uniq.back().sigma1) uniq.back() = r;
            } else {
                uniq.push_back(r);
            }
        }
        svd_roots = std::move(uniq);
        // Determinant roots that survived take precedence at the same location.
        std::vector<SvdRoot> kept;
        for (const auto& r : svd_roots) {
            bool dup = false;
            for (const auto& d : det_roots)
                if (std::abs(r.kappa - d.kappa) <= 10.0 * dedup_tol(r.kappa)) dup = true;
            if (!dup) kept.push_back(r);
        }
        svd_roots = std::move(kept);
    }

    // --- verification, multiplicity, error estimates, spurious flags ----
    std::vector<EigResult> results;
    for (const auto& d : det_roots) {
        const auto trip = sigma_at(d.kappa, d.N, detail::eta_of(opts, d.kappa));
        if (trip.sigma > opts.det_accept_sigma) continue; // failed verification
        EigResult e;
        e.kappa = d.kappa;
        e.beta = d.beta;
        e.method = "boyd-det";
        e.N_used = d.N;
        e.sigma_min = trip.sigma;
        results.push_back(e);
    }
    for (const auto& r : svd_roots) {
        EigResult e;
        e.kappa = r.kappa;
        e.beta = 0.0;
        e.method = "svd";
        e.N_used = r.N;
        e.sigma_min = r.sigma1;
        results.push_back(e);
        if (r.sigma2 <= 10.0 * r.sigma1) results.push_back(e); // multiplicity 2
    }
    std::sort(results.begin(), results.end(),
              [](const EigResult& x, const EigResult& y) { return x.kappa < y.kappa; });

    if (opts.compute_error_estimates || detail::eta_of(opts, 1.0) == 0.0) {
        for (std::size_t i = 0; i < results.size(); ++i) {
            auto& e = results[i];
            if (i > 0 && results[i - 1].kappa == e.kappa && results[i - 1].method == e.method) {
                e.err_est = results[i - 1].err_est;
                e.err_est_up_to_constant = results[i - 1].err_est_up_to_constant;
                e.spurious = results[i - 1].spurious;
                continue;
            }
            const DiscreteBoundary& disc = disc_for(e.N_used);
            SingularTriple dlp_trip;
            bool have_dlp = false;
            if (detail::eta_of(opts, e.kappa) == 0.0) {
                // The solving representation already is the DLP.
                dlp_trip = sigma_at(e.kappa, e.N_used, 0.0);
                have_dlp = true;
                // Spurious cross-check: CFIE stays regular at spurious roots.
                const auto cfie = sigma_at(e.kappa, e.N_used, e.kappa);
                e.spurious = cfie.sigma > opts.svd_tol && dlp_trip.sigma <= opts.svd_tol;
            }
            if (opts.compute_error_estimates) {
                if (!have_dlp) dlp_trip = sigma_at(e.kappa, e.N_used, 0.0);
                const ErrorEstimate est =
                    estimate_error(disc, e.kappa, opts.interior_grid_n, &dlp_trip);
                e.err_est = est.value;
                e.err_est_up_to_constant = est.up_to_constant;
            }
        }
    }

    // --- Weyl audit ------------------------------------------------------
    out.weyl.area = dom_area;
    out.weyl.perimeter = dom_perimeter;
    out.weyl.expected = weyl_count(dom_area, dom_perimeter, bb);
    out.weyl.found = static_cast<int>(results.size());
    if (opts.weyl_audit && weyl_count(dom_area, dom_perimeter, a) < 0.5) {
        out.weyl.audited = true;
        out.weyl.warning = std::abs(out.weyl.found - out.weyl.expected) > 3.0;
    }

    out.eigenfrequencies = std::move(results);
    out.lu_factorizations = counters::lu_factorizations.load() - lu0;
    out.svd_factorizations = counters::svd_factorizations.load() - svd0;
    out.timing_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

// Flags spurious entries of a DLP-only root list: true eigenfrequencies keep
// the CFIE singular; hole resonances do not.
inline std::vector<bool> cross_check_representations(const Boundary& b,
                                                     const std::vector<EigResult>& dlp_roots,
                                                     const SolveOptions& opts = {}) {
    std::vector<bool> flags(dlp_roots.size(), false);
    for (std::size_t i = 0; i < dlp_roots.size(); ++i) {
        const auto& r = dlp_roots[i];
        const DiscreteBoundary disc = discretize(b, r.N_used);
        const double s_dlp = min_singular(assemble(disc, r.kappa, 0.0).A).sigma;
        const double s_cfie = min_singular(assemble(disc, r.kappa, r.kappa).A).sigma;
        flags[i] = s_cfie > opts.svd_tol && s_dlp <= opts.svd_tol;
    }
    return flags;
}

} // namespace drumeig
