#include "kakeya/certifier.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kakeya/detail/distance.hpp"
#include "kakeya/loomis_whitney.hpp"
#include "kakeya/parallel.hpp"

namespace kakeya {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw ValidationError(what);
}

constexpr double kRel = 1e-12;
constexpr std::size_t kHistogramBudget = 200'000;

void require_delta(double delta) {
    require(delta > 0.0 && delta <= kMaxDelta, "delta must lie in (0, 0.5]");
}

double common_radius(std::span<const TubeFamily> families) {
    const double w = families.front().radius();
    for (const TubeFamily& f : families) require(f.radius() == w, "all families must share one radius");
    return w;
}

void require_step_preconditions(std::span<const TubeFamily> families, const Cube& cube, double delta) {
    check_families(families, cube.dim());
    require_delta(delta);
    const double w = common_radius(families);
    require(cube.side() >= w / delta * (1.0 - kRel), "step needs cube side >= W / delta");
    require_small_angles(families, delta);
}

double count_product(std::span<const double> counts, std::size_t n) {
    double prod = 1.0;
    for (const double c : counts) {
        if (c == 0.0) return 0.0;
        prod *= detail::family_power(c, n);
    }
    return prod;
}

std::vector<double> subcube_counts(std::span<const TubeFamily> families, const AxisBox& box, double w) {
    std::vector<double> counts;
    counts.reserve(families.size());
    for (const TubeFamily& f : families) counts.push_back(weighted_count(f, box, w));
    return counts;
}

}  // namespace

Constants make_constants(std::size_t n) {
    require(n >= 2, "dimension must be at least 2");
    const double nn = static_cast<double>(n);
    Constants c;
    c.n = n;
    c.c_lw = std::pow(unit_ball_volume(n - 1), nn / (nn - 1.0)) * std::pow(2.0, nn);
    c.c_step = c.c_lw * std::pow(20.0 * nn, nn);
    return c;
}

std::size_t count_intersections(const TubeFamily& family, const Cube& cube, double w) {
    require(w > 0.0, "radius must be positive");
    const AxisBox box = cube.box();
    std::size_t k = 0;
    for (std::size_t i = 0; i < family.size(); ++i)
        if (family.member_box_distance(i, box) <= w) ++k;
    return k;
}

double weighted_count(const TubeFamily& family, const AxisBox& box, double w) {
    double s = 0.0;
    for (std::size_t i = 0; i < family.size(); ++i)
        if (family.member_box_distance(i, box) <= w) s += family.members()[i].weight;
    return s;
}

IdenticallyOne identically_one_check(const Tube& tube, const Cube& cube, double delta, double w) {
    require(delta > 0.0 && delta < 1.0, "delta must lie in (0, 1)");
    require(w > 0.0, "radius must be positive");
    require(tube.dim() == cube.dim(), "tube and cube dimensions differ");
    const std::size_t n = cube.dim();
    IdenticallyOne out;
    out.preconditions_met = cube.side() <= w / (delta * 10.0 * static_cast<double>(n)) * (1.0 + kRel) &&
                            tube_intersects_cube(Tube(tube.line(), w), cube);
    // Distance to a line is convex, so its maximum over the cube sits at a corner.
    double worst = 0.0;
    Point corner(n);
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
        for (std::size_t d = 0; d < n; ++d)
            corner[d] = cube.min_corner()[d] + (((mask >> d) & 1U) ? cube.side() : 0.0);
        worst = std::max(worst, point_line_distance(tube.line().anchor(), tube.line().dir().components(), corner));
    }
    out.holds = worst <= w / delta;
    return out;
}

StepBound step_bound(std::span<const TubeFamily> families, const Cube& cube, double delta, unsigned threads) {
    require_step_preconditions(families, cube, delta);
    const std::size_t n = cube.dim();
    const double w = common_radius(families);
    const Constants consts = make_constants(n);
    StepBound out;
    out.w = w;
    out.delta = delta;
    std::vector<Cube> cubes = subdivide_cube(cube, delta, w);
    std::vector<std::vector<double>> counts(cubes.size());
    std::vector<double> terms(cubes.size(), 0.0);
    const double scale = consts.c_lw * std::pow(w, static_cast<double>(n));
    parallel_for(cubes.size(), threads, [&](std::size_t i) {
        counts[i] = subcube_counts(families, cubes[i].box(), w);
        terms[i] = scale * count_product(counts[i], n);
    });
    out.numeric_bound = ordered_sum(terms);
    out.subcubes.reserve(cubes.size());
    for (std::size_t i = 0; i < cubes.size(); ++i) out.subcubes.push_back({std::move(cubes[i]), std::move(counts[i])});
    return out;
}

StepCheck verify_step_inequality(std::span<const TubeFamily> families, const Cube& cube, double delta,
                                 const RefineOptions& options) {
    require_step_preconditions(families, cube, delta);
    const std::size_t n = cube.dim();
    const double w = common_radius(families);
    std::vector<TubeFamily> wide;
    wide.reserve(families.size());
    for (const TubeFamily& f : families) wide.push_back(f.with_radius(w / delta));

    StepCheck out;
    out.lhs = evaluate_refined(families, cube, options);
    out.rhs = evaluate_refined(wide, cube, options);
    out.converged = out.lhs.converged && out.rhs.converged;
    auto rel = [](const OverlapValue& v) {
        return v.value > 0.0 && v.error_estimate ? *v.error_estimate / v.value : 0.0;
    };
    out.tolerance = rel(out.lhs) + rel(out.rhs);
    if (out.rhs.value == 0.0) {
        out.vacuous = true;
        return out;
    }
    const double c_step = make_constants(n).c_step;
    out.ratio = out.lhs.value / (c_step * std::pow(delta, static_cast<double>(n)) * out.rhs.value);
    return out;
}

std::size_t ladder_length(double side, double delta) {
    require(delta > 0.0 && delta < 1.0, "delta must lie in (0, 1)");
    require(std::isfinite(side) && side > 0.0, "cube side must be positive");
    const double target = side * (1.0 - kRel);
    if (target <= 1.0) return 0;
    auto m = static_cast<std::size_t>(std::max(0.0, std::ceil(std::log(side) / std::log(1.0 / delta) - 1e-9)));
    while (std::pow(delta, -static_cast<double>(m)) < target) ++m;
    while (m > 0 && std::pow(delta, -static_cast<double>(m - 1)) >= target) --m;
    return m;
}

CubeCover cover_for_arbitrary_s(const Cube& cube, double delta, std::size_t m) {
    require(delta > 0.0 && delta < 1.0, "delta must lie in (0, 1)");
    const std::size_t n = cube.dim();
    const double len = std::pow(delta, -static_cast<double>(m));
    auto k = static_cast<std::size_t>(std::ceil(cube.side() / len * (1.0 - kRel)));
    k = std::max<std::size_t>(k, 1);
    CubeCover out;
    out.multiplicity = 1;
    for (std::size_t d = 0; d < n; ++d) out.multiplicity *= k;
    out.cubes.reserve(out.multiplicity);
    std::vector<std::size_t> idx(n, 0);
    for (std::size_t c = 0; c < out.multiplicity; ++c) {
        Point corner = cube.min_corner();
        for (std::size_t d = 0; d < n; ++d) corner[d] += static_cast<double>(idx[d]) * len;
        out.cubes.emplace_back(std::move(corner), len);
        for (std::size_t d = 0; d < n; ++d) {
            if (++idx[d] < k) break;
            idx[d] = 0;
        }
    }
    return out;
}

Certificate certify_multiscale(std::span<const TubeFamily> families, const Cube& cube, double delta, unsigned threads) {
    const std::size_t n = check_families(families, cube.dim());
    require_delta(delta);
    require(cube.side() >= 1.0 - kRel, "certification needs S >= 1");
    const double w = common_radius(families);
    require(std::abs(w - 1.0) <= kRel, "certification needs unit base radius");
    require_small_angles(families, delta);

    const Constants consts = make_constants(n);
    Certificate cert;
    cert.n = n;
    cert.delta = delta;
    cert.c_lw = consts.c_lw;
    cert.c_step = consts.c_step;
    cert.epsilon_exponent = std::log(consts.c_step) / std::log(1.0 / delta);
    cert.m = ladder_length(cube.side(), delta);
    for (std::size_t k = 0; k <= cert.m; ++k) cert.ladder.push_back({k, std::pow(delta, -static_cast<double>(k))});

    const CubeCover cover = cover_for_arbitrary_s(cube, delta, cert.m);
    cert.cover_side = cover.cubes.front().side();
    cert.covering_multiplicity = cover.multiplicity;

    // Members missing Q_S contribute nothing to the integral over Q_S.
    const AxisBox box = cube.box();
    std::vector<TubeFamily> live;
    for (const TubeFamily& f : families) {
        cert.counts_total.push_back(f.total_weight());
        cert.counts_in_cube.push_back(weighted_count(f, box, w));
        TubeFamily kept(f.axis(), f.radius());
        for (std::size_t i = 0; i < f.size(); ++i)
            if (f.member_box_distance(i, box) <= w) kept.add(f.members()[i]);
        live.push_back(std::move(kept));
    }

    const double prod = count_product(cert.counts_in_cube, n);
    cert.final_bound = static_cast<double>(cert.covering_multiplicity) *
                       std::exp(static_cast<double>(cert.m) * std::log(consts.c_step)) * prod;

    if (cert.m >= 1) {
        const Cube& top = cover.cubes.front();
        const std::size_t k = subdivision_count(top, delta, w);
        double total = 1.0;
        for (std::size_t d = 0; d < n; ++d) total *= static_cast<double>(k);
        cert.first_step_subcubes = static_cast<std::size_t>(total);
        if (total <= static_cast<double>(kHistogramBudget)) {
            const std::vector<Cube> cubes = subdivide_cube(top, delta, w);
            std::vector<std::vector<double>> counts(cubes.size());
            parallel_for(cubes.size(), threads,
                         [&](std::size_t i) { counts[i] = subcube_counts(live, cubes[i].box(), w); });
            std::vector<std::map<double, std::size_t>> hist(n);
            for (const auto& c : counts)
                for (std::size_t j = 0; j < n; ++j) ++hist[j][c[j]];
            cert.first_step_histograms = std::move(hist);
        }
    }
    return cert;
}

double delta_for_epsilon(double eps, const Constants& consts) {
    require(std::isfinite(eps) && eps > 0.0, "epsilon must be positive");
    require(consts.c_step > 1.0, "step constant must exceed 1");
    const double delta = std::exp(-std::log(consts.c_step) / eps);
    require(delta >= 1e-300, "delta underflows for this epsilon");
    return delta;
}

void require_small_angles(std::span<const TubeFamily> families, double delta) {
    for (const TubeFamily& f : families)
        require(f.max_angle() <= delta * (1.0 + kRel), "a member makes an angle larger than delta with its axis");
}

}  // namespace kakeya
