#include "kakeya/generators.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace kakeya {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw ValidationError(what);
}

Point uniform_in_cube(Rng& rng, const Cube& cube) {
    Point p(cube.dim());
    for (std::size_t d = 0; d < p.size(); ++d)
        p[d] = cube.min_corner()[d] + cube.side() * rng.uniform();
    return p;
}

// Unit vector uniform on S^{k-1}; for k = 1 a random sign.
std::vector<double> sphere_point(Rng& rng, std::size_t k) {
    std::vector<double> u(k);
    if (k == 1) {
        u[0] = rng.uniform() < 0.5 ? -1.0 : 1.0;
        return u;
    }
    for (;;) {
        double norm2 = 0.0;
        for (double& x : u) {
            x = rng.normal();
            norm2 += x * x;
        }
        if (norm2 > 1e-24) {
            const double inv = 1.0 / std::sqrt(norm2);
            for (double& x : u) x *= inv;
            return u;
        }
    }
}

double draw_weight(Rng& rng, const GenSpec& spec) {
    if (spec.regime != Regime::weighted) return 1.0;
    if (spec.integer_weights) {
        const auto lo = static_cast<std::uint64_t>(spec.weight_min);
        const auto hi = static_cast<std::uint64_t>(spec.weight_max);
        return static_cast<double>(lo + rng.bits() % (hi - lo + 1));
    }
    return rng.uniform(spec.weight_min, spec.weight_max);
}

LipschitzCurve random_curve(Rng& rng, const GenSpec& spec, std::size_t j) {
    const std::size_t n = spec.n;
    const double lo = spec.cube.min_corner()[j] - 2.0 * spec.radius;
    const double hi = spec.cube.min_corner()[j] + spec.cube.side() + 2.0 * spec.radius;
    const std::size_t k = spec.breakpoints;
    const double dt = (hi - lo) / static_cast<double>(k - 1);
    const double lip = spec.angle;

    std::vector<double> ts(k);
    for (std::size_t i = 0; i < k; ++i) ts[i] = lo + dt * static_cast<double>(i);
    ts.back() = hi;

    // Random walk in R^{n-1} with per-segment slope strictly below lip.
    std::vector<Point> walk(k, Point(n - 1, 0.0));
    for (std::size_t i = 1; i < k; ++i) {
        const std::vector<double> u = sphere_point(rng, n - 1);
        const double step = lip * rng.uniform() * (ts[i] - ts[i - 1]) * (1.0 - 1e-9);
        for (std::size_t d = 0; d + 1 < n; ++d) walk[i][d] = walk[i - 1][d] + step * u[d];
    }
    // Shift so the curve passes through a uniform anchor of the cube.
    const Point anchor = uniform_in_cube(rng, spec.cube);
    const double ta = anchor[j];
    std::size_t seg = 0;
    while (seg + 2 < k && ts[seg + 1] < ta) ++seg;
    const double s = (ta - ts[seg]) / (ts[seg + 1] - ts[seg]);
    Point shift(n - 1);
    for (std::size_t d = 0, e = 0; d < n; ++d) {
        if (d == j) continue;
        shift[e] = anchor[d] - ((1.0 - s) * walk[seg][e] + s * walk[seg + 1][e]);
        ++e;
    }
    for (Point& v : walk)
        for (std::size_t e = 0; e + 1 < n; ++e) v[e] += shift[e];
    return LipschitzCurve(j, std::move(ts), std::move(walk), lip);
}

}  // namespace

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::normal() {
    // Box-Muller, cosine branch only, so each call consumes exactly two draws.
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

void validate(const GenSpec& spec) {
    require(spec.n >= 2, "n must be at least 2");
    require(spec.counts.size() == spec.n, "need one count per axis");
    require(spec.cube.dim() == spec.n, "cube dimension does not match n");
    require(std::isfinite(spec.radius) && spec.radius > 0.0, "radius must be positive");
    const bool angled = spec.regime == Regime::small_angle || spec.regime == Regime::lipschitz ||
                        spec.regime == Regime::weighted;
    if (angled) require(spec.angle >= 0.0 && spec.angle <= std::numbers::pi / 2, "angle must lie in [0, pi/2]");
    if (spec.regime == Regime::lipschitz) {
        require(spec.breakpoints >= 2, "a curve needs at least 2 breakpoints");
        require(spec.angle < 1.0, "Lipschitz constant must be below 1");
    }
    if (spec.regime == Regime::weighted) {
        require(spec.weight_min >= 0.0 && spec.weight_max >= spec.weight_min && std::isfinite(spec.weight_max),
                "weight range must satisfy 0 <= min <= max");
        if (spec.integer_weights)
            require(spec.weight_min == std::floor(spec.weight_min) && spec.weight_max == std::floor(spec.weight_max) &&
                        spec.weight_max <= 1e6,
                    "integer weights need integral bounds up to 1e6");
    }
}

double regime_angle(const GenSpec& spec) {
    switch (spec.regime) {
        case Regime::axis_parallel: return 0.0;
        case Regime::general: return 1.0 / (10.0 * static_cast<double>(spec.n));
        default: return spec.angle;
    }
}

Direction random_direction_in_cap(Rng& rng, std::size_t n, std::size_t j, double angle) {
    double phi = 0.0;
    if (angle > 0.0) {
        // Polar angle has density proportional to sin^{n-2} on [0, angle].
        const double top = std::sin(angle);
        for (;;) {
            phi = angle * rng.uniform();
            const double accept = std::pow(std::sin(phi) / top, static_cast<double>(n - 2));
            if (n == 2 || rng.uniform() < accept) break;
        }
    }
    const std::vector<double> u = sphere_point(rng, n - 1);
    std::vector<double> v(n);
    for (std::size_t d = 0, e = 0; d < n; ++d) v[d] = d == j ? std::cos(phi) : std::sin(phi) * u[e++];
    return Direction::normalized(std::move(v));
}

std::vector<TubeFamily> generate(const GenSpec& spec) {
    validate(spec);
    Rng rng(spec.seed);
    const double angle = regime_angle(spec);
    std::vector<TubeFamily> out;
    for (std::size_t j = 0; j < spec.n; ++j) {
        TubeFamily f(j, spec.radius);
        for (std::size_t a = 0; a < spec.counts[j]; ++a) {
            if (spec.regime == Regime::lipschitz) {
                f.add(Member{random_curve(rng, spec, j), 1.0});
                continue;
            }
            Point anchor = uniform_in_cube(rng, spec.cube);
            Direction dir = spec.regime == Regime::axis_parallel ? Direction::axis(spec.n, j)
                                                                 : random_direction_in_cap(rng, spec.n, j, angle);
            const double w = draw_weight(rng, spec);
            f.add(Member{Line(std::move(anchor), std::move(dir)), w});
        }
        require(f.max_angle() <= angle * (1.0 + 1e-12) + 1e-15, "generated member violates the regime angle");
        out.push_back(std::move(f));
    }
    return out;
}

std::vector<TubeFamily> enumerate_grid_axis_parallel(std::size_t n, std::size_t k, double spacing, double radius) {
    require(n >= 2, "n must be at least 2");
    require(k >= 1, "k must be at least 1");
    require(std::isfinite(spacing) && spacing > 0.0, "spacing must be positive");
    std::size_t per_axis = 1;
    for (std::size_t d = 0; d + 1 < n; ++d) per_axis *= k;
    const double mid = (static_cast<double>(k) - 1.0) / 2.0;
    std::vector<TubeFamily> out;
    for (std::size_t j = 0; j < n; ++j) {
        TubeFamily f(j, radius);
        std::vector<std::size_t> idx(n - 1, 0);
        for (std::size_t t = 0; t < per_axis; ++t) {
            Point anchor(n, 0.0);
            for (std::size_t d = 0, e = 0; d < n; ++d)
                if (d != j) anchor[d] = (static_cast<double>(idx[e++]) - mid) * spacing;
            f.add_line(Line(std::move(anchor), Direction::axis(n, j)));
            for (std::size_t e = 0; e + 1 < n; ++e) {
                if (++idx[e] < k) break;
                idx[e] = 0;
            }
        }
        out.push_back(std::move(f));
    }
    return out;
}

}  // namespace kakeya
