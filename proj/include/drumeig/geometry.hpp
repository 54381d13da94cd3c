#pragma once

// Smooth closed 2D boundary curves, 2pi-periodic parametrizations, and their
// uniform-grid discretizations. Sign conventions used by the whole library:
// outer curves run counterclockwise and hole curves are stored with reversed
// parameter direction, so (x2', -x1')/|x'| is the exterior-pointing normal on
// every curve and no downstream code flips signs.

#include "errors.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

namespace drumeig {

using Vec2 = Eigen::Vector2d;

inline constexpr double two_pi = 2.0 * std::numbers::pi;

struct Curve {
    std::function<Vec2(double)> position;
    std::function<Vec2(double)> derivative;  // empty => spectral differentiation
    std::function<Vec2(double)> derivative2; // empty => spectral differentiation
    bool spectral = false;
    std::string name;
    bool star_shaped = false;
};

struct Boundary {
    Curve outer;
    std::vector<Curve> holes; // stored direction-reversed
    std::string shape_name;
    bool star_shaped = false;
};

namespace detail {

inline double polygon_signed_area(const Curve& c, int n = 4096) {
    double area = 0.0;
    Vec2 prev = c.position(0.0);
    const Vec2 first = prev;
    for (int k = 1; k <= n; ++k) {
        Vec2 cur = (k == n) ? first : c.position(two_pi * k / n);
        area += prev.x() * cur.y() - prev.y() * cur.x();
        prev = cur;
    }
    return 0.5 * area;
}

} // namespace detail

inline Curve reverse_curve(Curve c) {
    auto pos = c.position;
    c.position = [pos](double t) { return pos(two_pi - t); };
    if (c.derivative) {
        auto d1 = c.derivative;
        c.derivative = [d1](double t) { return Vec2(-d1(two_pi - t)); };
    }
    if (c.derivative2) {
        auto d2 = c.derivative2;
        c.derivative2 = [d2](double t) { return Vec2(d2(two_pi - t)); };
    }
    return c;
}

// r(theta) = a0 + sum_j cos_coeffs[j-1] cos(j theta) + sin_coeffs[j-1] sin(j theta),
// traversed counterclockwise; requires r > 0 (checked on a dense grid).
inline Curve make_radial_curve(double a0, std::vector<double> cos_coeffs,
                               std::vector<double> sin_coeffs) {
    auto radius = [a0, cos_coeffs, sin_coeffs](double t, double& r, double& dr, double& ddr) {
        r = a0;
        dr = 0.0;
        ddr = 0.0;
        for (std::size_t i = 0; i < cos_coeffs.size(); ++i) {
            const double j = static_cast<double>(i + 1);
            r += cos_coeffs[i] * std::cos(j * t);
            dr -= cos_coeffs[i] * j * std::sin(j * t);
            ddr -= cos_coeffs[i] * j * j * std::cos(j * t);
        }
        for (std::size_t i = 0; i < sin_coeffs.size(); ++i) {
            const double j = static_cast<double>(i + 1);
            r += sin_coeffs[i] * std::sin(j * t);
            dr += sin_coeffs[i] * j * std::cos(j * t);
            ddr -= sin_coeffs[i] * j * j * std::sin(j * t);
        }
    };
    for (int k = 0; k < 10000; ++k) {
        double r, dr, ddr;
        radius(two_pi * k / 10000.0, r, dr, ddr);
        if (!(r > 0.0)) throw ShapeError("radial curve: r(theta) must stay positive");
    }
    Curve c;
    c.position = [radius](double t) {
        double r, dr, ddr;
        radius(t, r, dr, ddr);
        return Vec2(r * std::cos(t), r * std::sin(t));
    };
    c.derivative = [radius](double t) {
        double r, dr, ddr;
        radius(t, r, dr, ddr);
        const double ct = std::cos(t), st = std::sin(t);
        return Vec2(dr * ct - r * st, dr * st + r * ct);
    };
    c.derivative2 = [radius](double t) {
        double r, dr, ddr;
        radius(t, r, dr, ddr);
        const double ct = std::cos(t), st = std::sin(t);
        return Vec2((ddr - r) * ct - 2.0 * dr * st, (ddr - r) * st + 2.0 * dr * ct);
    };
    c.name = "radial";
    c.star_shaped = true; // r > 0 makes the region star-shaped about the origin
    return c;
}

inline Curve make_ellipse(double a, double b) {
    if (!(a > 0.0) || !(b > 0.0)) throw ShapeError("ellipse: semi-axes must be positive");
    Curve c;
    c.position = [a, b](double t) { return Vec2(a * std::cos(t), b * std::sin(t)); };
    c.derivative = [a, b](double t) { return Vec2(-a * std::sin(t), b * std::cos(t)); };
    c.derivative2 = [a, b](double t) { return Vec2(-a * std::cos(t), -b * std::sin(t)); };
    c.name = "ellipse";
    c.star_shaped = true;
    return c;
}

inline Curve make_circle(double r) {
    Curve c = make_ellipse(r, r);
    c.name = "circle";
    return c;
}

// Thin curved horseshoe: radius switches smoothly between 0.4 and 0.6 through a
// logistic bump while the polar angle sweeps +-(49/50) pi. Position is closed
// form; derivatives come from spectral differentiation of node samples.
inline Curve make_crescent_curve() {
    Curve c;
    c.position = [](double s) {
        const double pi = std::numbers::pi;
        const double r = 0.2 / (1.0 + std::exp(4.0 * (s - 1.5 * pi) * (s - 0.5 * pi))) + 0.4;
        const double th = -(49.0 / 50.0) * pi * std::sin(s);
        return Vec2(r * std::cos(th), r * std::sin(th));
    };
    c.spectral = true;
    c.name = "crescent";
    c.star_shaped = false;
    return c;
}

inline Boundary make_boundary(Curve outer) {
    if (detail::polygon_signed_area(outer) <= 0.0)
        throw ShapeError("boundary: outer curve must be counterclockwise with positive area");
    Boundary b;
    b.shape_name = outer.name;
    b.star_shaped = outer.star_shaped;
    b.outer = std::move(outer);
    return b;
}

// Winding-number membership test against once-sampled polygons.
class WindingTester {
public:
    explicit WindingTester(const Boundary& b, int nodes_per_curve = 2048) {
        polys_.push_back(sample(b.outer, nodes_per_curve));
        for (const auto& h : b.holes) polys_.push_back(sample(h, nodes_per_curve));
    }

    // True when p lies in the domain interior (inside outer, outside every hole).
    bool contains(const Vec2& p) const {
        if (std::abs(winding(polys_[0], p)) != 1) return false;
        for (std::size_t i = 1; i < polys_.size(); ++i)
            if (winding(polys_[i], p) != 0) return false;
        return true;
    }

    int winding_outer(const Vec2& p) const { return winding(polys_[0], p); }

private:
    static Eigen::Matrix2Xd sample(const Curve& c, int n) {
        Eigen::Matrix2Xd pts(2, n);
        for (int k = 0; k < n; ++k) pts.col(k) = c.position(two_pi * k / n);
        return pts;
    }

    // Trapezoid sum of the angle increment around p, rounded to an integer.
    static int winding(const Eigen::Matrix2Xd& poly, const Vec2& p) {
        const int n = static_cast<int>(poly.cols());
        double total = 0.0;
        Vec2 prev = poly.col(n - 1) - p;
        for (int k = 0; k < n; ++k) {
            const Vec2 cur = poly.col(k) - p;
            total += std::atan2(prev.x() * cur.y() - prev.y() * cur.x(), prev.dot(cur));
            prev = cur;
        }
        return static_cast<int>(std::lround(total / two_pi));
    }

    std::vector<Eigen::Matrix2Xd> polys_;
};

inline bool contains(const Boundary& b, const Vec2& p) { return WindingTester(b).contains(p); }

// Inner curve must wind counterclockwise as supplied; it is stored reversed.
inline Boundary make_annulus(Curve outer, Curve inner) {
    Boundary b = make_boundary(std::move(outer));
    if (detail::polygon_signed_area(inner) <= 0.0)
        throw ShapeError("annulus: inner curve must be counterclockwise with positive area");
    WindingTester outer_test(b);
    for (int k = 0; k < 512; ++k) {
        if (!outer_test.contains(inner.position(two_pi * k / 512.0)))
            throw ShapeError("annulus: inner curve must lie strictly inside the outer curve");
    }
    b.holes.push_back(reverse_curve(std::move(inner)));
    b.shape_name = "annulus";
    b.star_shaped = false;
    return b;
}

struct CurveNodes {
    int N = 0;
    int offset = 0; // first global row of this curve
    Eigen::VectorXd s;
    Eigen::Matrix2Xd x, d1, d2, normal;
    Eigen::VectorXd speed;
};

struct DiscreteBoundary {
    Boundary boundary;
    std::vector<CurveNodes> curves;
    int total = 0;
};

namespace detail {

// Trigonometric differentiation on the uniform grid (N even): first derivative
// kernel 0.5 (-1)^d cot(d h / 2), second derivative -0.5 (-1)^d / sin^2(d h / 2)
// with diagonal -(N^2+2)/12. Exact for trigonometric polynomials of degree < N/2.
inline void spectral_derivatives(CurveNodes& cn) {
    const int N = cn.N;
    const double h = two_pi / N;
    Eigen::VectorXd c1(N), c2(N);
    c1[0] = 0.0;
    c2[0] = -(static_cast<double>(N) * N + 2.0) / 12.0;
    for (int d = 1; d < N; ++d) {
        const double sgn = (d % 2 == 0) ? 1.0 : -1.0;
        const double half = 0.5 * h * d;
        c1[d] = 0.5 * sgn / std::tan(half);
        const double sn = std::sin(half);
        c2[d] = -0.5 * sgn / (sn * sn);
    }
    cn.d1.resize(2, N);
    cn.d2.resize(2, N);
    for (int j = 0; j < N; ++j) {
        Vec2 a1 = Vec2::Zero(), a2 = Vec2::Zero();
        for (int k = 0; k < N; ++k) {
            const int d = ((j - k) % N + N) % N;
            const Vec2 xk = cn.x.col(k);
            a1 += c1[d] * xk;
            a2 += c2[d] * xk;
        }
        cn.d1.col(j) = a1;
        cn.d2.col(j) = a2;
    }
}

inline CurveNodes discretize_curve(const Curve& c, int N, int offset) {
    CurveNodes cn;
    cn.N = N;
    cn.offset = offset;
    cn.s.resize(N);
    cn.x.resize(2, N);
    for (int k = 0; k < N; ++k) {
        cn.s[k] = two_pi * k / N;
        cn.x.col(k) = c.position(cn.s[k]);
    }
    if (c.derivative && c.derivative2) {
        cn.d1.resize(2, N);
        cn.d2.resize(2, N);
        for (int k = 0; k < N; ++k) {
            cn.d1.col(k) = c.derivative(cn.s[k]);
            cn.d2.col(k) = c.derivative2(cn.s[k]);
        }
    } else {
        spectral_derivatives(cn);
    }
    cn.speed.resize(N);
    cn.normal.resize(2, N);
    for (int k = 0; k < N; ++k) {
        const double sp = cn.d1.col(k).norm();
        if (!(sp > 1e-12))
            throw ShapeError("discretize: vanishing tangent (parametrization not regular)");
        cn.speed[k] = sp;
        cn.normal.col(k) = Vec2(cn.d1(1, k), -cn.d1(0, k)) / sp;
    }
    return cn;
}

} // namespace detail

// N is the total node budget; it is split evenly across curves and each share
// rounded up to even.
inline DiscreteBoundary discretize(const Boundary& b, int N) {
    if (N < 8) throw std::invalid_argument("discretize: N must be >= 8");
    const int ncurves = 1 + static_cast<int>(b.holes.size());
    int per = (N + ncurves - 1) / ncurves;
    if (per % 2 != 0) ++per;
    if (per < 8) per = 8;
    DiscreteBoundary d;
    d.boundary = b;
    d.curves.push_back(detail::discretize_curve(b.outer, per, 0));
    int offset = per;
    for (const auto& h : b.holes) {
        d.curves.push_back(detail::discretize_curve(h, per, offset));
        offset += per;
    }
    d.total = offset;
    return d;
}

// Spectrally accurate area: holes enter with negative sign automatically
// because their parametrization is reversed.
inline double area(const Boundary& b, int N = 2048) {
    const DiscreteBoundary d = discretize(b, N * (1 + static_cast<int>(b.holes.size())));
    double a = 0.0;
    for (const auto& cn : d.curves) {
        const double w = two_pi / cn.N;
        for (int k = 0; k < cn.N; ++k)
            a += w * (cn.x(0, k) * cn.d1(1, k) - cn.x(1, k) * cn.d1(0, k));
    }
    return 0.5 * a;
}

inline double perimeter(const Boundary& b, int N = 2048) {
    const DiscreteBoundary d = discretize(b, N * (1 + static_cast<int>(b.holes.size())));
    double p = 0.0;
    for (const auto& cn : d.curves) p += (two_pi / cn.N) * cn.speed.sum();
    return p;
}

struct BBox {
    double xlo = 0, xhi = 0, ylo = 0, yhi = 0;
};

inline BBox bounding_box(const Boundary& b, int n = 2048) {
    BBox box;
    bool first = true;
    auto absorb = [&](const Curve& c) {
        for (int k = 0; k < n; ++k) {
            const Vec2 p = c.position(two_pi * k / n);
            if (first) {
                box = {p.x(), p.x(), p.y(), p.y()};
                first = false;
            } else {
                box.xlo = std::min(box.xlo, p.x());
                box.xhi = std::max(box.xhi, p.x());
                box.ylo = std::min(box.ylo, p.y());
                box.yhi = std::max(box.yhi, p.y());
            }
        }
    };
    absorb(b.outer);
    for (const auto& h : b.holes) absorb(h);
    return box;
}

// Uniform grid over the bounding box restricted to interior points at least
// 5 node spacings (arc length) from the boundary.
struct InteriorGrid {
    BBox box;
    int nx = 0, ny = 0;
    double dx = 0, dy = 0;
    double exclusion = 0;
    std::vector<Vec2> points;
    std::vector<std::pair<int, int>> index; // (ix, iy) per accepted point
    double cell_area() const { return dx * dy; }
};

// exclusion_override >= 0 replaces the default near-boundary band of
// 5x the widest node spacing (useful when the band must not depend on N).
inline InteriorGrid interior_grid(const DiscreteBoundary& d, int nx, int ny, const BBox* bbox = nullptr,
                                  double exclusion_override = -1.0) {
    InteriorGrid g;
    g.box = bbox ? *bbox : bounding_box(d.boundary);
    g.nx = nx;
    g.ny = ny;
    g.dx = (g.box.xhi - g.box.xlo) / (nx - 1);
    g.dy = (g.box.yhi - g.box.ylo) / (ny - 1);
    double max_spacing = 0.0;
    int total_nodes = 0;
    for (const auto& cn : d.curves) {
        max_spacing = std::max(max_spacing, (two_pi / cn.N) * cn.speed.maxCoeff());
        total_nodes += cn.N;
    }
    g.exclusion = exclusion_override >= 0.0 ? exclusion_override : 5.0 * max_spacing;
    Eigen::Matrix2Xd nodes(2, total_nodes);
    int col = 0;
    for (const auto& cn : d.curves)
        for (int k = 0; k < cn.N; ++k) nodes.col(col++) = cn.x.col(k);
    const WindingTester inside(d.boundary);
    const double excl2 = g.exclusion * g.exclusion;
    for (int iy = 0; iy < ny; ++iy) {
        for (int ix = 0; ix < nx; ++ix) {
            const Vec2 p(g.box.xlo + ix * g.dx, g.box.ylo + iy * g.dy);
            double d2min = (nodes.colwise() - p).colwise().squaredNorm().minCoeff();
            if (d2min <= excl2 || !inside.contains(p)) continue;
            g.points.push_back(p);
            g.index.emplace_back(ix, iy);
        }
    }
    return g;
}

} // namespace drumeig
