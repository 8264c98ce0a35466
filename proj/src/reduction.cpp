#include "kakeya/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "kakeya/certifier.hpp"
#include "kakeya/parallel.hpp"

namespace kakeya {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw ValidationError(what);
}

constexpr double kMaxCaps = 2e6;

const Line& line_of(const Member& m) {
    const auto* line = std::get_if<Line>(&m.shape);
    require(line != nullptr, "reduction handles straight tubes only");
    return *line;
}

std::vector<Cap> checked_cover(const Cap& cap, double rho) {
    const double n = static_cast<double>(cap.center().dim());
    const double estimate = cap_cover_constant(cap.center().dim()) * std::pow(cap.ang_radius() / rho, n - 1.0);
    require(estimate <= kMaxCaps, "cap cover too large; increase epsilon");
    return cap_cover(cap, rho);
}

ReducedProblem build_problem(std::span<const TubeFamily> parts, const Cube& cube, std::vector<std::size_t> indices,
                             std::vector<Direction> centres) {
    const std::size_t n = cube.dim();
    LinearMap map = frame_map(centres);
    const double stretch = map.max_stretch();
    const double rescale = 1.0 / stretch;
    auto to_new = [&](std::span<const double> x) {
        Point p = map.apply(x);
        for (double& v : p) v *= rescale;
        return p;
    };

    std::vector<TubeFamily> fams;
    double worst = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        TubeFamily f(j, parts[j].radius());
        for (const Member& m : parts[j].members()) {
            const Line& line = line_of(m);
            const Point d = map.apply(line.dir().components());
            Line image(to_new(line.anchor()), Direction::normalized(d));
            worst = std::max(worst, angle_from_axis(image.dir(), j));
            f.add(Member{std::move(image), m.weight});
        }
        fams.push_back(std::move(f));
    }

    AxisBox box{Point(n, std::numeric_limits<double>::infinity()), Point(n, -std::numeric_limits<double>::infinity())};
    Point corner(n);
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
        for (std::size_t d = 0; d < n; ++d)
            corner[d] = cube.min_corner()[d] + (((mask >> d) & 1U) ? cube.side() : 0.0);
        const Point img = to_new(corner);
        for (std::size_t d = 0; d < n; ++d) {
            box.lo[d] = std::min(box.lo[d], img[d]);
            box.hi[d] = std::max(box.hi[d], img[d]);
        }
    }
    double side = 1.0;
    for (std::size_t d = 0; d < n; ++d) side = std::max(side, box.hi[d] - box.lo[d]);

    const double factor = std::pow(stretch, static_cast<double>(n)) / map.volume_distortion();
    return ReducedProblem{std::move(indices), std::move(centres), std::move(map), rescale, std::move(fams),
                          Cube(box.lo, side),  std::max(factor, 1.0), worst};
}

// One problem per tuple of nonempty cap subfamilies, ordered
// lexicographically in (beta_1, ..., beta_n).
std::vector<ReducedProblem> reduce_with_caps(std::span<const TubeFamily> families, const Cube& cube,
                                             const std::vector<std::vector<Cap>>& caps, unsigned threads) {
    const std::size_t n = cube.dim();
    std::vector<std::vector<TubeFamily>> split(n);
    std::vector<std::vector<std::size_t>> nonempty(n);
    for (std::size_t j = 0; j < n; ++j) {
        split[j] = split_by_caps(families[j], caps[j]);
        for (std::size_t b = 0; b < split[j].size(); ++b)
            if (!split[j][b].empty()) nonempty[j].push_back(b);
        if (nonempty[j].empty()) return {};
    }
    std::size_t tuples = 1;
    for (const auto& ne : nonempty) tuples *= ne.size();

    std::vector<std::optional<ReducedProblem>> slots(tuples);
    parallel_for(tuples, threads, [&](std::size_t t) {
        std::vector<std::size_t> beta(n);
        std::size_t rest = t;
        for (std::size_t j = n; j-- > 0;) {
            beta[j] = nonempty[j][rest % nonempty[j].size()];
            rest /= nonempty[j].size();
        }
        std::vector<TubeFamily> parts;
        std::vector<Direction> centres;
        for (std::size_t j = 0; j < n; ++j) {
            parts.push_back(split[j][beta[j]]);
            centres.push_back(caps[j][beta[j]].center());
        }
        slots[t] = build_problem(parts, cube, beta, centres);
    });
    std::vector<ReducedProblem> out;
    out.reserve(tuples);
    for (auto& s : slots) out.push_back(std::move(*s));
    return out;
}

void require_lines(std::span<const TubeFamily> families, const Cube& cube) {
    check_families(families, cube.dim());
    for (const TubeFamily& f : families)
        for (const Member& m : f.members()) line_of(m);
}

}  // namespace

std::vector<TubeFamily> split_by_caps(const TubeFamily& family, std::span<const Cap> caps) {
    std::vector<TubeFamily> out;
    out.reserve(caps.size());
    for (std::size_t b = 0; b < caps.size(); ++b) out.emplace_back(family.axis(), family.radius());
    for (const Member& m : family.members()) {
        const Direction& d = line_of(m).dir();
        const auto it = std::find_if(caps.begin(), caps.end(), [&](const Cap& c) { return c.contains(d); });
        require(it != caps.end(), "a member direction lies in no cap");
        out[static_cast<std::size_t>(it - caps.begin())].add(m);
    }
    return out;
}

Reduction reduce_general_to_small_angle(std::span<const TubeFamily> families, const Cube& cube, double eps,
                                        unsigned threads) {
    require_lines(families, cube);
    const std::size_t n = cube.dim();
    const double wide = 1.0 / (10.0 * static_cast<double>(n));
    for (const TubeFamily& f : families)
        require(f.max_angle() <= wide * (1.0 + 1e-12), "member angle exceeds 1/(10n)");

    Reduction out;
    out.delta = delta_for_epsilon(eps, make_constants(n));
    out.cap_radius = std::min(out.delta / 10.0, wide);
    std::vector<std::vector<Cap>> caps(n);
    for (std::size_t j = 0; j < n; ++j) {
        caps[j] = checked_cover(Cap(Direction::axis(n, j), wide), out.cap_radius);
        out.caps_per_axis.push_back(caps[j].size());
    }
    out.problems = reduce_with_caps(families, cube, caps, threads);
    for (const ReducedProblem& p : out.problems)
        require(p.max_angle <= out.delta * (1.0 + 1e-12), "reduced problem exceeds the small-angle bound");
    return out;
}

Reduction transversal_reduce(std::span<const TubeFamily> families, const Cube& cube, std::span<const Cap> direction_sets,
                             double nu, double eps, unsigned threads) {
    require_lines(families, cube);
    const std::size_t n = cube.dim();
    require(direction_sets.size() == n, "need one direction set per axis");
    require(nu > 0.0 && nu <= 1.0, "nu must lie in (0, 1]");
    for (std::size_t j = 0; j < n; ++j) {
        require(direction_sets[j].center().dim() == n, "direction set dimension does not match n");
        for (const Member& m : families[j].members())
            require(direction_sets[j].contains(line_of(m).dir()), "member direction lies outside its direction set");
    }

    Reduction out;
    out.delta = delta_for_epsilon(eps, make_constants(n));
    double rho = std::min(nu / (100.0 * static_cast<double>(n)), out.delta / 10.0);
    const double ceiling = transversal_distortion_ceiling(n, nu);
    for (int attempt = 0; attempt < 40; ++attempt, rho *= 0.5) {
        std::vector<std::vector<Cap>> caps(n);
        out.caps_per_axis.clear();
        for (std::size_t j = 0; j < n; ++j) {
            caps[j] = checked_cover(direction_sets[j], std::min(rho, direction_sets[j].ang_radius()));
            out.caps_per_axis.push_back(caps[j].size());
        }
        out.cap_radius = rho;
        out.problems = reduce_with_caps(families, cube, caps, threads);
        bool small = true;
        for (const ReducedProblem& p : out.problems) {
            std::vector<std::vector<Direction>> probes;
            for (std::size_t j = 0; j < n; ++j) probes.push_back(cap_probe_directions(caps[j][p.cap_indices[j]]));
            std::vector<std::size_t> pick(n, 0);
            std::vector<Direction> tuple;
            for (;;) {
                tuple.clear();
                for (std::size_t j = 0; j < n; ++j) tuple.push_back(probes[j][pick[j]]);
                require(wedge_volume(tuple) >= nu / 2.0, "cap tuple wedge falls below nu/2");
                std::size_t j = 0;
                for (; j < n; ++j) {
                    if (++pick[j] < probes[j].size()) break;
                    pick[j] = 0;
                }
                if (j == n) break;
            }
            require(p.distortion_factor <= ceiling * (1.0 + 1e-9), "distortion exceeds the transversality ceiling");
            if (p.max_angle > out.delta * (1.0 + 1e-12)) small = false;
        }
        if (small) return out;
    }
    throw ValidationError("could not reach the small-angle regime; directions may be too spread");
}

double transversal_distortion_ceiling(std::size_t n, double nu) {
    const double nn = static_cast<double>(n);
    return std::pow(2.0 * std::pow(nn, (nn - 1.0) / 2.0) / nu, nn);
}

std::vector<TubeFamily> expand_integer_weights(std::span<const TubeFamily> families) {
    std::vector<TubeFamily> out;
    for (const TubeFamily& f : families) {
        TubeFamily g(f.axis(), f.radius());
        for (const Member& m : f.members()) {
            require(m.weight == std::floor(m.weight) && m.weight <= 1e6, "weights must be small nonnegative integers");
            for (double k = 0; k < m.weight; k += 1.0) g.add(Member{m.shape, 1.0});
        }
        out.push_back(std::move(g));
    }
    return out;
}

bool weighted_multiplicity_check(std::span<const TubeFamily> families, const Cube& cube, GridSpec grid,
                                 const EvalOptions& options) {
    const auto expanded = expand_integer_weights(families);
    const OverlapValue a = evaluate_overlap(families, cube, grid, options);
    const OverlapValue b = evaluate_overlap(expanded, cube, grid, options);
    return a.value == b.value && a.error_estimate == b.error_estimate;
}

double rational_multiplicity_gap(std::span<const TubeFamily> families, std::size_t denominator, const Cube& cube,
                                 GridSpec grid, const EvalOptions& options) {
    require(denominator >= 1, "denominator must be positive");
    const double q = static_cast<double>(denominator);
    std::vector<TubeFamily> scaled;
    for (const TubeFamily& f : families) {
        TubeFamily g(f.axis(), f.radius());
        for (const Member& m : f.members()) {
            const double w = std::round(m.weight * q);
            require(std::abs(w - m.weight * q) <= 1e-9 * std::max(1.0, w), "weight is not a multiple of 1/q");
            g.add(Member{m.shape, w});
        }
        scaled.push_back(std::move(g));
    }
    const double n = static_cast<double>(cube.dim());
    const double weighted = evaluate_overlap(families, cube, grid, options).value * std::pow(q, n / (n - 1.0));
    const double expanded = evaluate_overlap(expand_integer_weights(scaled), cube, grid, options).value;
    if (weighted == 0.0 && expanded == 0.0) return 0.0;
    return std::abs(weighted - expanded) / std::max(std::abs(weighted), std::abs(expanded));
}

}  // namespace kakeya
