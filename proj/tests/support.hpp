#pragma once

// Independent oracles and input generators shared by the test binaries.
// Nothing here calls the library's distance or quadrature code.

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "kakeya/evaluator.hpp"
#include "kakeya/generators.hpp"
#include "kakeya/geometry.hpp"

namespace testing {

using kakeya::Point;
using kakeya::Rng;

inline std::vector<double> random_unit(Rng& rng, std::size_t n) {
    for (;;) {
        std::vector<double> v(n);
        double s = 0.0;
        for (double& x : v) {
            x = rng.normal();
            s += x * x;
        }
        if (s < 1e-12) continue;
        for (double& x : v) x /= std::sqrt(s);
        return v;
    }
}

inline Point random_point(Rng& rng, std::size_t n, double lo, double hi) {
    Point p(n);
    for (double& x : p) x = rng.uniform(lo, hi);
    return p;
}

inline kakeya::AxisBox random_box(Rng& rng, std::size_t n, double lo, double hi) {
    kakeya::AxisBox b{Point(n), Point(n)};
    for (std::size_t d = 0; d < n; ++d) {
        const double a = rng.uniform(lo, hi), c = rng.uniform(lo, hi);
        b.lo[d] = std::min(a, c);
        b.hi[d] = std::max(a, c) + 1e-3;
    }
    return b;
}

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

/// Euclidean distance from p to an axis box by clamping.
inline double clamp_box_distance(const Point& p, const kakeya::AxisBox& b) {
    double s = 0.0;
    for (std::size_t d = 0; d < p.size(); ++d) {
        const double e = std::max({b.lo[d] - p[d], 0.0, p[d] - b.hi[d]});
        s += e * e;
    }
    return std::sqrt(s);
}

/// Golden-section minimum of a convex function on [a, b].
inline double golden_min(const std::function<double(double)>& f, double a, double b, int iters = 200) {
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - g * (b - a), d = a + g * (b - a);
    double fc = f(c), fd = f(d);
    for (int i = 0; i < iters; ++i) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    return std::min({fc, fd, f(a), f(b)});
}

inline Point affine(const Point& a, const std::vector<double>& d, double t) {
    Point p(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) p[i] = a[i] + t * d[i];
    return p;
}

/// Distance from p to the line through a with unit direction d, by projection.
inline double projection_line_distance(const Point& a, const std::vector<double>& d, const Point& p) {
    std::vector<double> v(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) v[i] = p[i] - a[i];
    const double t = dot(v, d);
    for (std::size_t i = 0; i < p.size(); ++i) v[i] -= t * d[i];
    return norm(v);
}

/// Integrand computed from first principles: projection distances for
/// lines, densely sampled polylines are not supported here.
inline double naive_integrand(const std::vector<kakeya::TubeFamily>& fams, const Point& p) {
    const double n = static_cast<double>(p.size());
    double prod = 1.0;
    for (const auto& f : fams) {
        double s = 0.0;
        for (const auto& m : f.members()) {
            const auto& line = std::get<kakeya::Line>(m.shape);
            const auto dc = line.dir().components();
            if (projection_line_distance(line.anchor(), std::vector<double>(dc.begin(), dc.end()), p) <= f.radius())
                s += m.weight;
        }
        prod *= std::pow(s, 1.0 / (n - 1.0));
    }
    return prod;
}

/// Plain midpoint rule over the cube with the naive integrand.
inline double naive_midpoint(const std::vector<kakeya::TubeFamily>& fams, const kakeya::Cube& cube, std::size_t m) {
    const std::size_t n = cube.dim();
    const double h = cube.side() / static_cast<double>(m);
    std::size_t total = 1;
    for (std::size_t d = 0; d < n; ++d) total *= m;
    double sum = 0.0;
    Point p(n);
    for (std::size_t c = 0; c < total; ++c) {
        std::size_t r = c;
        for (std::size_t d = 0; d < n; ++d) {
            p[d] = cube.min_corner()[d] + (static_cast<double>(r % m) + 0.5) * h;
            r /= m;
        }
        sum += naive_integrand(fams, p);
    }
    return sum * std::pow(h, static_cast<double>(n));
}

}  // namespace testing
