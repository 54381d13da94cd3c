// Tests for Chebyshev-proxy root finding on an interval and for the gridded
// parabolic minimum search. Oracles: trigonometric roots (pi, 2pi), Bessel J0
// zeros frozen from an arbitrary-precision evaluation, and planted
// polynomial/analytic roots at exactly known locations.

#include <catch2/catch_amalgamated.hpp>

#include <drumeig/rootfind.hpp>
#include <drumeig/specfun.hpp>

#include <cmath>
#include <complex>
#include <vector>

using namespace drumeig;
using Catch::Approx;

namespace {
constexpr double pi = std::numbers::pi;

std::vector<double> kappas(const RootSet& rs) {
    std::vector<double> out;
    for (const auto& r : rs.roots) out.push_back(r.kappa);
    return out;
}
} // namespace

TEST_CASE("finds the zeros of sin on [1, 7]") {
    const RootSet rs = boyd_find_roots(
        [](double k) { return Complex(std::sin(k), 0.0); }, 1.0, 7.0);
    REQUIRE(rs.roots.size() == 2);
    REQUIRE(rs.roots[0].kappa == Approx(pi).margin(1e-12));
    REQUIRE(rs.roots[1].kappa == Approx(2.0 * pi).margin(1e-12));
    REQUIRE(std::abs(rs.roots[0].beta) <= 1e-14);
    REQUIRE(rs.suspects.empty());
    REQUIRE(rs.evaluations > 0);
}

TEST_CASE("finds the first five zeros of J0 on [2, 15]") {
    // Frozen 16-digit references for the first five positive zeros of J0.
    const std::vector<double> ref{2.4048255576957728, 5.5200781102863106,
                                  8.6537279129110122, 11.791534439014282,
                                  14.930917708487786};
    const RootSet rs = boyd_find_roots(
        [](double k) { return Complex(specfun::bessel_j0(k), 0.0); }, 2.0, 15.0);
    REQUIRE(rs.roots.size() == ref.size());
    for (std::size_t i = 0; i < ref.size(); ++i)
        REQUIRE(rs.roots[i].kappa == Approx(ref[i]).margin(1e-11));
    REQUIRE(rs.evaluations < 1500); // degree doubling, not brute-force sampling
}

TEST_CASE("complex-valued analytic function with a planted real root") {
    const double root = 20.4300941760382;
    const RootSet rs = boyd_find_roots(
        [root](double k) {
            return Complex(k - root, 0.0) * std::exp(Complex(0.0, 0.4 * k));
        },
        20.0, 21.0);
    REQUIRE(rs.roots.size() == 1);
    REQUIRE(rs.roots[0].kappa == Approx(root).margin(1e-12));
}

TEST_CASE("splitting the interval does not change the root set") {
    auto g = [](double k) { return Complex(std::sin(k), 0.0); };
    const RootSet whole = boyd_find_roots(g, 1.0, 7.0);
    const RootSet lo = boyd_find_roots(g, 1.0, 4.5);
    const RootSet hi = boyd_find_roots(g, 4.5, 7.0);
    std::vector<double> split = kappas(lo);
    for (double k : kappas(hi)) split.push_back(k);
    const std::vector<double> ref = kappas(whole);
    REQUIRE(split.size() == ref.size());
    for (std::size_t i = 0; i < ref.size(); ++i)
        REQUIRE(split[i] == Approx(ref[i]).margin(1e-11));
}

TEST_CASE("roots are invariant under extreme function rescaling") {
    for (double scale : {1e280, 1e-280}) {
        const RootSet rs = boyd_find_roots(
            [scale](double k) { return Complex(scale * std::sin(k), 0.0); }, 1.0, 7.0);
        REQUIRE(rs.roots.size() == 2);
        REQUIRE(rs.roots[0].kappa == Approx(pi).margin(1e-12));
        REQUIRE(rs.roots[1].kappa == Approx(2.0 * pi).margin(1e-12));
    }
}

TEST_CASE("a double root lands in suspects, not in roots") {
    // (k-3)^2 factors through the companion matrix as a conjugate pair split
    // at noise level; the imaginary-part filter must reject it and report the
    // cluster for independent verification.
    const RootSet rs = boyd_find_roots(
        [](double k) { return Complex((k - 3.0) * (k - 3.0), 0.0); }, 2.5, 3.5);
    REQUIRE(rs.roots.empty());
    REQUIRE_FALSE(rs.suspects.empty());
    for (const auto& s : rs.suspects) REQUIRE(s.kappa == Approx(3.0).margin(1e-4));
}

TEST_CASE("a pair split below noise level also lands in suspects") {
    const double d = 1e-9;
    const RootSet rs = boyd_find_roots(
        [d](double k) { return Complex((k - 3.0) * (k - 3.0 - d), 0.0); }, 2.5, 3.5);
    REQUIRE(rs.roots.empty());
    REQUIRE_FALSE(rs.suspects.empty());
    for (const auto& s : rs.suspects) REQUIRE(s.kappa == Approx(3.0).margin(1e-4));
}

TEST_CASE("a well-separated close pair is resolved into two clean roots") {
    const double d = 1e-3;
    const RootSet rs = boyd_find_roots(
        [d](double k) { return Complex((k - 3.0) * (k - 3.0 - d), 0.0); }, 2.5, 3.5);
    REQUIRE(rs.roots.size() == 2);
    REQUIRE(rs.roots[0].kappa == Approx(3.0).margin(1e-10));
    REQUIRE(rs.roots[1].kappa == Approx(3.0 + d).margin(1e-10));
    REQUIRE(rs.suspects.empty());
}

TEST_CASE("non-analytic integrand raises the no-convergence error") {
    // |k - c| with c off the dyadic bisection lattice: the kink stays interior
    // to some cell at every depth, and its relative Chebyshev decay is
    // scale-invariant, so subdivision bottoms out at the width floor.
    const double c = 4.0 + 2.0 / 3.0;
    auto g = [c](double k) { return Complex(std::abs(k - c), 0.0); };
    REQUIRE_THROWS_AS(boyd_find_roots(g, 4.0, 6.0), NoConvergenceError);
    try {
        boyd_find_roots(g, 4.0, 6.0);
    } catch (const NoConvergenceError& e) {
        REQUIRE(e.interval_lo >= 4.0);
        REQUIRE(e.interval_hi <= 6.0);
        REQUIRE(e.interval_hi - e.interval_lo <= 1e-9);
        REQUIRE(e.last_decay > 1e-12);
    }
}

TEST_CASE("invalid interval is rejected") {
    auto g = [](double k) { return Complex(k, 0.0); };
    REQUIRE_THROWS_AS(boyd_find_roots(g, 2.0, 2.0), std::invalid_argument);
    REQUIRE_THROWS_AS(boyd_find_roots(g, 3.0, 2.0), std::invalid_argument);
}

TEST_CASE("grid_parabolic_min refines a single parabolic dip") {
    auto h = [](double x) { return (x - 2.5) * (x - 2.5) + 1e-20; };
    const auto mins = grid_parabolic_min(h, 2.0, 3.0, 8, 1e-11);
    REQUIRE(mins.size() == 1);
    REQUIRE(mins[0].x == Approx(2.5).margin(1e-9));
    REQUIRE(mins[0].value <= 1e-17);
}

TEST_CASE("grid_parabolic_min separates two dips hidden in one bracket") {
    // Both minima of the W lie inside a single coarse cell; the parabola
    // model-error test must trigger a local re-grid that finds both.
    auto h = [](double x) {
        const double u = (x - 2.0) * (x - 2.0);
        const double v = (x - 2.001) * (x - 2.001);
        return std::min(u, v) + 1e-18;
    };
    const auto mins = grid_parabolic_min(h, 1.95, 2.05, 8, 1e-11);
    REQUIRE(mins.size() == 2);
    REQUIRE(mins[0].x == Approx(2.0).margin(1e-7));
    REQUIRE(mins[1].x == Approx(2.001).margin(1e-7));
}

TEST_CASE("grid_parabolic_min finds both minima of cos on [0, 10]") {
    auto h = [](double x) { return std::cos(x) + 1.0; }; // keeps h >= 0
    const auto mins = grid_parabolic_min(h, 0.0, 10.0, 24, 1e-11);
    REQUIRE(mins.size() == 2);
    // x-accuracy at a flat quadratic minimum is limited to ~sqrt(eps).
    REQUIRE(mins[0].x == Approx(pi).margin(1e-7));
    REQUIRE(mins[1].x == Approx(3.0 * pi).margin(1e-7));
    REQUIRE(mins[0].value <= 1e-12);
    // Minima are never worse than the better endpoint.
    const double endpoint_best = std::min(h(0.0), h(10.0));
    for (const auto& m : mins) REQUIRE(m.value <= endpoint_best + 1e-15);
}

TEST_CASE("grid_parabolic_min on a monotone function reports nothing") {
    auto h = [](double x) { return std::exp(x); };
    REQUIRE(grid_parabolic_min(h, 0.0, 1.0, 10, 1e-10).empty());
}

TEST_CASE("grid_parabolic_min validates its arguments") {
    auto h = [](double x) { return x * x; };
    REQUIRE_THROWS_AS(grid_parabolic_min(h, 1.0, 0.0, 10, 1e-10), std::invalid_argument);
    REQUIRE_THROWS_AS(grid_parabolic_min(h, 0.0, 1.0, 4, 1e-10), std::invalid_argument);
}
