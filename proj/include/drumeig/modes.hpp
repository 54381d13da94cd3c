#pragma once

// Eigenmode reconstruction. At a converged eigenfrequency the double-layer
// matrix I - M_N is numerically singular; its unit left singular vector,
// with the quadrature weight and speed divided out (and conjugated, being a
// left vector), samples the normal derivative u_n on the boundary. Green's
// representation with zero Dirichlet trace then gives u = S u_n inside the
// domain, evaluated by the plain trapezoid rule away from the boundary and by
// the product quadrature for the on-surface trace used in the residual t[u].

#include "errors.hpp"
#include "geometry.hpp"
#include "linalg.hpp"
#include "nystrom.hpp"
#include "parallel.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace drumeig {

struct BoundaryDensity {
    VectorXcd density;   // u_n samples at the nodes (function values)
    VectorXcd left;      // unit left singular vector of I - M_N
    double sigma_min = 0.0;
};

inline BoundaryDensity boundary_density(const DiscreteBoundary& disc, double kappa,
                                        double sigma_gate = 1e-6) {
    const MatrixXcd A = assemble(disc, kappa, 0.0).A;
    const SingularTriple trip = min_singular(A);
    if (trip.sigma > sigma_gate)
        throw NotAnEigenfrequencyError(
            "boundary_density: operator is not numerically singular at this frequency", kappa,
            trip.sigma);
    BoundaryDensity bd;
    bd.left = trip.left;
    bd.sigma_min = trip.sigma;
    bd.density.resize(disc.total);
    for (const auto& cn : disc.curves) {
        const double w = two_pi / cn.N;
        for (int k = 0; k < cn.N; ++k)
            bd.density[cn.offset + k] = std::conj(trip.left[cn.offset + k]) / (w * cn.speed[k]);
    }
    return bd;
}

enum : std::uint8_t { mode_mask_outside = 0, mode_mask_near_boundary = 1, mode_mask_interior = 2 };

struct ModeGrid {
    BBox bbox;
    int nx = 0, ny = 0;
    std::vector<std::uint8_t> mask; // row-major [iy*nx + ix]
    std::vector<double> values;     // 0 wherever mask != interior
    double kappa = 0.0;
    double norm_constant = 0.0; // L2(Omega) norm divided out of the raw samples
    double dx = 0.0, dy = 0.0;

    double at(int ix, int iy) const { return values[static_cast<std::size_t>(iy) * nx + ix]; }
};

inline ModeGrid evaluate_mode(const DiscreteBoundary& disc, const VectorXcd& density, double kappa,
                              int nx, int ny, const BBox* bbox = nullptr, int norm_grid_n = 201) {
    ModeGrid g;
    g.bbox = bbox ? *bbox : bounding_box(disc.boundary);
    g.nx = nx;
    g.ny = ny;
    g.kappa = kappa;
    g.dx = (g.bbox.xhi - g.bbox.xlo) / (nx - 1);
    g.dy = (g.bbox.yhi - g.bbox.ylo) / (ny - 1);
    g.mask.assign(static_cast<std::size_t>(nx) * ny, mode_mask_outside);
    g.values.assign(static_cast<std::size_t>(nx) * ny, 0.0);

    double max_spacing = 0.0;
    int total_nodes = 0;
    for (const auto& cn : disc.curves) {
        max_spacing = std::max(max_spacing, (two_pi / cn.N) * cn.speed.maxCoeff());
        total_nodes += cn.N;
    }
    const double excl = 5.0 * max_spacing;
    Eigen::Matrix2Xd nodes(2, total_nodes);
    int col = 0;
    for (const auto& cn : disc.curves)
        for (int k = 0; k < cn.N; ++k) nodes.col(col++) = cn.x.col(k);
    const WindingTester inside(disc.boundary);

    std::vector<std::size_t> accepted;
    std::vector<Vec2> pts;
    for (int iy = 0; iy < ny; ++iy) {
        for (int ix = 0; ix < nx; ++ix) {
            const Vec2 p(g.bbox.xlo + ix * g.dx, g.bbox.ylo + iy * g.dy);
            const std::size_t idx = static_cast<std::size_t>(iy) * nx + ix;
            if (!inside.contains(p)) continue; // mask stays "outside"
            const double dmin = std::sqrt((nodes.colwise() - p).colwise().squaredNorm().minCoeff());
            if (dmin <= excl) {
                g.mask[idx] = mode_mask_near_boundary;
                continue;
            }
            g.mask[idx] = mode_mask_interior;
            accepted.push_back(idx);
            pts.push_back(p);
        }
    }
    if (accepted.empty()) throw std::runtime_error("evaluate_mode: no accepted grid points");

    std::vector<Complex> u(accepted.size());
    parallel_for(static_cast<int>(accepted.size()), [&](int i) {
        u[static_cast<std::size_t>(i)] =
            eval_single_layer(disc, density, pts[static_cast<std::size_t>(i)], kappa);
    });

    // Rotate the global phase so the largest-magnitude sample is real positive,
    // then the values are real up to discretization noise.
    std::size_t imax = 0;
    for (std::size_t i = 1; i < u.size(); ++i)
        if (std::abs(u[i]) > std::abs(u[imax])) imax = i;
    const double amax = std::abs(u[imax]);
    const Complex phase = amax > 0.0 ? Complex(std::conj(u[imax]) / amax) : Complex(1.0, 0.0);

    for (std::size_t i = 0; i < u.size(); ++i) g.values[accepted[i]] = (phase * u[i]).real();

    // Normalize on a fixed-resolution quadrature over the full domain whose
    // near-boundary exclusion depends only on the geometry (5% of the bbox
    // diagonal), so the constant is independent of the output grid and of N
    // once the band spans a few node spacings. Normalizing on the output
    // grid itself would tie every sample to that grid's Riemann-sum error.
    // The accepted point set must not depend on disc.N either, so distances
    // are measured against a fixed fine re-discretization of the boundary.
    const BBox full = bounding_box(disc.boundary);
    const double diag = std::hypot(full.xhi - full.xlo, full.yhi - full.ylo);
    const DiscreteBoundary fine = discretize(disc.boundary, 1024);
    const InteriorGrid ng = interior_grid(fine, norm_grid_n, norm_grid_n, &full, 0.05 * diag);
    if (ng.points.empty()) throw std::runtime_error("evaluate_mode: empty normalization grid");
    std::vector<double> sq(ng.points.size(), 0.0);
    parallel_for(static_cast<int>(ng.points.size()), [&](int i) {
        sq[static_cast<std::size_t>(i)] =
            std::norm(eval_single_layer(disc, density, ng.points[static_cast<std::size_t>(i)], kappa));
    });
    double sumsq = 0.0;
    for (const double v : sq) sumsq += v;
    g.norm_constant = std::sqrt(sumsq * ng.cell_area());
    if (g.norm_constant > 0.0)
        for (const std::size_t idx : accepted) g.values[idx] /= g.norm_constant;
    return g;
}

// t[u] = ||u||_L2(boundary) / ||u||_L2(domain): the boundary trace of the
// reconstruction (via the product quadrature, which stays accurate on the
// surface) against the interior norm on a crude grid.
inline double mode_residual(const DiscreteBoundary& disc, const VectorXcd& density, double kappa,
                            int grid_n = 200) {
    const MatrixXcd Q = assemble_Q(disc, kappa);
    const VectorXcd trace = 0.5 * (Q * density);
    double bsq = 0.0;
    for (const auto& cn : disc.curves) {
        const double w = two_pi / cn.N;
        for (int k = 0; k < cn.N; ++k) bsq += w * cn.speed[k] * std::norm(trace[cn.offset + k]);
    }
    const InteriorGrid grid = interior_grid(disc, grid_n, grid_n);
    if (grid.points.empty()) throw std::runtime_error("mode_residual: no interior grid points");
    const int npts = static_cast<int>(grid.points.size());
    std::vector<double> sq(static_cast<std::size_t>(npts), 0.0);
    parallel_for(npts, [&](int i) {
        sq[static_cast<std::size_t>(i)] =
            std::norm(eval_single_layer(disc, density, grid.points[static_cast<std::size_t>(i)], kappa));
    });
    double osq = 0.0;
    for (double v : sq) osq += v;
    osq *= grid.cell_area();
    return std::sqrt(bsq / osq);
}

// L2(Omega) inner product of two modes sampled on identical grids.
inline double mode_inner_product(const ModeGrid& f, const ModeGrid& g) {
    if (f.nx != g.nx || f.ny != g.ny) throw std::invalid_argument("mode_inner_product: grid mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < f.values.size(); ++i)
        if (f.mask[i] == mode_mask_interior && g.mask[i] == mode_mask_interior)
            acc += f.values[i] * g.values[i];
    return acc * f.dx * f.dy;
}

} // namespace drumeig
