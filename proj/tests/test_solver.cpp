// End-to-end solver tests on domains with exactly known spectra: the unit
// disk (Bessel zeros, including double eigenvalues) and a slightly perturbed
// disk whose first double eigenvalue splits by a gap proportional to the
// perturbation. Also covers window-split invariance, the determinant/SVD
// cross-check, the eigenvalue-count audit, and option validation.

#include <catch2/catch_amalgamated.hpp>

#include <drumeig/solver.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

using namespace drumeig;
using Catch::Approx;

namespace {
// Frozen 17-digit Bessel-zero references (first zeros of J0, J1, J2, and the
// second zero of J0): the Dirichlet spectrum of the unit disk in [2, 6].
constexpr double j01 = 2.4048255576957728;
constexpr double j11 = 3.8317059702075123;
constexpr double j21 = 5.1356223018406826;
constexpr double j02 = 5.5200781102863106;

std::vector<double> sorted_kappas(const SolveOutcome& out) {
    std::vector<double> v;
    for (const auto& e : out.eigenfrequencies) v.push_back(e.kappa);
    std::sort(v.begin(), v.end());
    return v;
}
} // namespace

TEST_CASE("unit disk spectrum in [2, 6] with multiplicities") {
    const Boundary b = make_boundary(make_circle(1.0));
    const SolveOutcome out = solve_interval(b, 2.0, 6.0);

    const std::vector<double> ref{j01, j11, j11, j21, j21, j02};
    const std::vector<double> got = sorted_kappas(out);
    REQUIRE(got.size() == ref.size());
    for (std::size_t i = 0; i < ref.size(); ++i)
        REQUIRE(got[i] == Approx(ref[i]).margin(1e-10));

    for (const auto& e : out.eigenfrequencies) {
        // Every reported eigenfrequency carries a singularity certificate.
        REQUIRE(e.sigma_min <= 1e-8);
        REQUIRE((e.method == "boyd-det" || e.method == "svd"));
        if (e.method == "boyd-det") REQUIRE(std::abs(e.beta) <= 1e-13);
        if (e.method == "svd") REQUIRE(e.beta == 0.0);
        REQUIRE(e.N_used == default_N_rule(b, e.kappa));
        REQUIRE_FALSE(e.spurious);
        // The disk is star-shaped: the residual estimate has a certified
        // constant and must be far below the discretization scale.
        REQUIRE_FALSE(e.err_est_up_to_constant);
        REQUIRE(e.err_est >= 0.0);
        REQUIRE(e.err_est <= 1e-6);
    }

    REQUIRE(out.determinant_evaluations > 0);
    REQUIRE(out.sigma_evaluations > 0);
    REQUIRE(out.timing_seconds > 0.0);
}

TEST_CASE("splitting the search interval does not change the spectrum") {
    const Boundary b = make_boundary(make_circle(1.0));
    SolveOptions opts;
    opts.compute_error_estimates = false;
    const std::vector<double> whole = sorted_kappas(solve_interval(b, 2.0, 6.0, opts));
    std::vector<double> split = sorted_kappas(solve_interval(b, 2.0, 4.0, opts));
    for (double k : sorted_kappas(solve_interval(b, 4.0, 6.0, opts))) split.push_back(k);
    std::sort(split.begin(), split.end());

    REQUIRE(split.size() == whole.size());
    for (std::size_t i = 0; i < whole.size(); ++i)
        REQUIRE(split[i] == Approx(whole[i]).margin(1e-10));
}

TEST_CASE("determinant root agrees with the pipeline value") {
    // The simple eigenfrequency near 2.405 through the raw determinant root
    // finder, against the full pipeline (which may resolve it through either
    // path); both must land on the same point to well below 1e-9.
    const Boundary b = make_boundary(make_circle(1.0));
    const int N = default_N_rule(b, 2.5);
    const DiscreteBoundary d = discretize(b, N);
    const RootSet rs = boyd_find_roots(
        [&](double k) -> ScaledDeterminant {
            return scaled_determinant(assemble(d, k, k).A);
        },
        2.3, 2.5);
    REQUIRE(rs.roots.size() == 1);

    SolveOptions opts;
    opts.compute_error_estimates = false;
    const SolveOutcome out = solve_interval(b, 2.3, 2.5, opts);
    REQUIRE(out.eigenfrequencies.size() == 1);
    REQUIRE(std::abs(out.eigenfrequencies[0].kappa - rs.roots[0].kappa) <= 1e-9);
    REQUIRE(out.eigenfrequencies[0].kappa == Approx(j01).margin(1e-10));
}

TEST_CASE("perturbed disk splits the double eigenfrequency by eps * j11") {
    // r = 1 + eps cos(2 theta) splits the first double eigenvalue of the disk
    // symmetrically; to first order the gap equals eps * j11. At eps = 1e-4
    // the pair sits a factor ~1e4 inside one another's Boyd windows, forcing
    // the close-root machinery.
    const double eps = 1e-4;
    const Boundary b = make_boundary(make_radial_curve(1.0, {0.0, eps}, {}));
    SolveOptions opts;
    opts.compute_error_estimates = false;
    const SolveOutcome out = solve_interval(b, 3.80, 3.87, opts);

    REQUIRE(out.eigenfrequencies.size() == 2);
    const std::vector<double> got = sorted_kappas(out);
    const double gap = got[1] - got[0];
    REQUIRE(gap == Approx(eps * j11).margin(1e-9));
    const double mid = 0.5 * (got[0] + got[1]);
    REQUIRE(mid == Approx(j11).margin(1e-6)); // second-order shift only
    for (const auto& e : out.eigenfrequencies) REQUIRE(e.sigma_min <= 1e-8);
}

TEST_CASE("double-layer-only representation finds true roots unflagged") {
    const Boundary b = make_boundary(make_circle(1.0));
    SolveOptions opts;
    opts.representation = Representation::dlp;
    opts.compute_error_estimates = false;
    const SolveOutcome out = solve_interval(b, 2.3, 2.5, opts);
    REQUIRE(out.eigenfrequencies.size() == 1);
    REQUIRE(out.eigenfrequencies[0].kappa == Approx(j01).margin(1e-10));
    REQUIRE_FALSE(out.eigenfrequencies[0].spurious);
}

TEST_CASE("eigenvalue count matches the two-term Weyl estimate on [0.5, 20]") {
    const Boundary b = make_boundary(make_circle(1.0));
    SolveOptions opts;
    opts.compute_error_estimates = false;
    const SolveOutcome out = solve_interval(b, 0.5, 20.0, opts);

    REQUIRE(out.weyl.audited);
    REQUIRE(out.weyl.area == Approx(std::numbers::pi).epsilon(1e-10));
    REQUIRE(out.weyl.perimeter == Approx(2.0 * std::numbers::pi).epsilon(1e-10));
    REQUIRE(out.weyl.found == static_cast<int>(out.eigenfrequencies.size()));
    // The audit compares against the two-term count up to the upper endpoint
    // (the lower endpoint sits below the first eigenfrequency).
    REQUIRE(out.weyl.expected == Approx(weyl_count(b, 20.0)).margin(1e-9));
    REQUIRE(std::abs(out.weyl.expected - out.weyl.found) <= 2.0);
    REQUIRE_FALSE(out.weyl.warning);

    // Spot-check the low end of the list against the disk spectrum.
    const std::vector<double> got = sorted_kappas(out);
    REQUIRE(got.size() >= 6);
    REQUIRE(got[0] == Approx(j01).margin(1e-9));
    REQUIRE(got[1] == Approx(j11).margin(1e-9));
    REQUIRE(got[2] == Approx(j11).margin(1e-9));
}

TEST_CASE("sigma sweep matches a direct evaluation and validates input") {
    const Boundary b = make_boundary(make_circle(1.0));
    const auto sweep = sweep_sigma_min(b, 2.3, 2.5, 3);
    REQUIRE(sweep.size() == 3);
    REQUIRE(sweep[0].first == Approx(2.3).margin(1e-14));
    REQUIRE(sweep[1].first == Approx(2.4).margin(1e-14));
    REQUIRE(sweep[2].first == Approx(2.5).margin(1e-14));
    for (const auto& [k, s] : sweep) REQUIRE(s > 0.0);

    // Direct evaluation with the same discretization rule must agree.
    const int N = default_N_rule(b, 2.5);
    const DiscreteBoundary d = discretize(b, N);
    const double direct = min_singular(assemble(d, 2.4, 2.4).A).sigma;
    REQUIRE(sweep[1].second == Approx(direct).epsilon(1e-10));

    REQUIRE_THROWS_AS(sweep_sigma_min(b, 2.0, 3.0, 1), std::invalid_argument);
}

TEST_CASE("discretization rule: shape-dependent floor, linear growth, even") {
    const Boundary disk = make_boundary(make_circle(1.0));
    REQUIRE(default_N_rule(disk, 2.0) == 150);
    REQUIRE(default_N_rule(disk, 20.0) == 200);
    REQUIRE(default_N_rule(disk, 10.1) == 152); // rounded up to even
    const Boundary cres = make_boundary(make_crescent_curve());
    REQUIRE(default_N_rule(cres, 10.0) == 350);
    REQUIRE(default_N_rule(cres, 50.0) == 450);
    REQUIRE(default_N_rule(cres, 50.0) % 2 == 0);
}

TEST_CASE("solve_interval validates its interval") {
    const Boundary b = make_boundary(make_circle(1.0));
    REQUIRE_THROWS_AS(solve_interval(b, -1.0, 2.0), std::invalid_argument);
    REQUIRE_THROWS_AS(solve_interval(b, 0.0, 2.0), std::invalid_argument);
    REQUIRE_THROWS_AS(solve_interval(b, 3.0, 2.0), std::invalid_argument);
}
