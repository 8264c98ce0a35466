#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "kakeya/generators.hpp"
#include "kakeya/geometry.hpp"
#include "support.hpp"

using namespace kakeya;
using Catch::Approx;

TEST_CASE("directions must be unit vectors") {
    CHECK_THROWS_AS(Direction({1.0, 1.0}), ValidationError);
    CHECK_THROWS_AS(Direction::normalized({0.0, 0.0}), ValidationError);
    const Direction d = Direction::normalized({3.0, 4.0});
    CHECK(d[0] == Approx(0.6));
    CHECK(d[1] == Approx(0.8));
    CHECK(Direction::axis(3, 2)[2] == 1.0);
    CHECK_THROWS_AS(Direction::axis(3, 3), ValidationError);
}

TEST_CASE("point to line distance") {
    const Point a{0.0, 0.0, 0.0};
    const Direction d = Direction::axis(3, 0);
    CHECK(point_line_distance(a, d.components(), Point{5.0, 3.0, 4.0}) == Approx(5.0));
    CHECK(point_line_distance(a, d.components(), Point{-7.0, 0.0, 0.0}) == 0.0);
}

TEST_CASE("segment distance agrees with a golden-section oracle") {
    Rng rng(11);
    for (int it = 0; it < 500; ++it) {
        const std::size_t n = 2 + static_cast<std::size_t>(it % 3);
        const Point a = testing::random_point(rng, n, -3, 3), b = testing::random_point(rng, n, -3, 3);
        const Point p = testing::random_point(rng, n, -5, 5);
        std::vector<double> d(n);
        for (std::size_t i = 0; i < n; ++i) d[i] = b[i] - a[i];
        const double oracle = testing::golden_min(
            [&](double t) {
                const Point q = testing::affine(a, d, t);
                double s = 0.0;
                for (std::size_t i = 0; i < n; ++i) s += (q[i] - p[i]) * (q[i] - p[i]);
                return std::sqrt(s);
            },
            0.0, 1.0);
        CHECK(point_segment_distance(a, b, p) == Approx(oracle).margin(1e-9));
    }
}

TEST_CASE("line and segment to box distances agree with an oracle") {
    Rng rng(12);
    for (int it = 0; it < 400; ++it) {
        const std::size_t n = 2 + static_cast<std::size_t>(it % 3);
        const AxisBox box = testing::random_box(rng, n, -2, 2);
        const Point a = testing::random_point(rng, n, -6, 6);
        const std::vector<double> u = testing::random_unit(rng, n);
        auto f = [&](double t) { return testing::clamp_box_distance(testing::affine(a, u, t), box); };
        const double line_oracle = testing::golden_min(f, -40.0, 40.0, 300);
        CHECK(line_box_distance(a, u, box) == Approx(line_oracle).margin(1e-8));

        const Point b = testing::affine(a, u, rng.uniform(0.1, 8.0));
        std::vector<double> d(n);
        for (std::size_t i = 0; i < n; ++i) d[i] = b[i] - a[i];
        auto g = [&](double t) { return testing::clamp_box_distance(testing::affine(a, d, t), box); };
        CHECK(segment_box_distance(a, b, box) == Approx(testing::golden_min(g, 0.0, 1.0)).margin(1e-8));
    }
}

TEST_CASE("line through a box has zero distance") {
    const AxisBox box{{0.0, 0.0}, {1.0, 1.0}};
    const Direction d = Direction::normalized({1.0, 1.0});
    CHECK(line_box_distance(Point{-5.0, -5.0}, d.components(), box) == 0.0);
    CHECK(line_box_distance(Point{0.0, 3.0}, Direction::axis(2, 0).components(), box) == Approx(2.0));
}

TEST_CASE("tube and box intersection is consistent with sampling") {
    Rng rng(13);
    for (int it = 0; it < 300; ++it) {
        const std::size_t n = 2 + static_cast<std::size_t>(it % 2);
        const AxisBox box = testing::random_box(rng, n, 0, 3);
        const Tube tube(Line(testing::random_point(rng, n, -2, 5), Direction(testing::random_unit(rng, n))),
                        rng.uniform(0.05, 1.0));
        bool hit = false;
        for (int s = 0; s < 400 && !hit; ++s) {
            Point p(n);
            for (std::size_t d = 0; d < n; ++d) p[d] = rng.uniform(box.lo[d], box.hi[d]);
            hit = tube_indicator(tube, p);
        }
        // Sampling can only witness an intersection, never refute one.
        if (hit) CHECK(tube_intersects_box(tube, box));
        const double dist = line_box_distance(tube.line().anchor(), tube.line().dir().components(), box);
        CHECK(tube_intersects_box(tube, box) == (dist <= tube.radius()));
    }
}

TEST_CASE("tube indicator is the closed neighbourhood") {
    const Tube t(Line({0.0, 0.0}, Direction::axis(2, 0)), 1.0);
    CHECK(tube_indicator(t, Point{100.0, 1.0}));
    CHECK_FALSE(tube_indicator(t, Point{0.0, std::nextafter(1.0, 2.0)}));
}

TEST_CASE("angles of unoriented directions") {
    const Direction e0 = Direction::axis(2, 0);
    const Direction d = Direction::normalized({std::cos(0.3), std::sin(0.3)});
    CHECK(angle_from_axis(d, 0) == Approx(0.3));
    CHECK(angle_from_axis(d.flipped(), 0) == Approx(0.3));
    CHECK(angle_from_axis(d, 1) == Approx(std::numbers::pi / 2 - 0.3));
    CHECK(line_angle(e0, e0.flipped()) == 0.0);
    CHECK(line_angle(d, e0) == Approx(line_angle(e0, d)));
}

TEST_CASE("Lipschitz curves validate their slope") {
    CHECK_THROWS_AS(LipschitzCurve(0, {0.0, 1.0}, {{0.0}, {0.2}}, 0.1), ValidationError);
    CHECK_THROWS_AS(LipschitzCurve(0, {0.0, 0.0}, {{0.0}, {0.0}}, 0.1), ValidationError);
    const LipschitzCurve c(0, {0.0, 1.0, 3.0}, {{0.0}, {0.1}, {0.0}}, 0.1);
    CHECK(c.max_slope() == Approx(0.1));
    CHECK(c.value_at(0.5)[0] == Approx(0.05));
    CHECK(curve_angle(c) == Approx(std::atan(0.1)));
    CHECK(curve_distance(c, Point{1.0, 1.1}) == Approx(1.0).margin(1e-3));
}

TEST_CASE("affine curve reproduces its line") {
    const Line line({1.0, 2.0, 3.0}, Direction::normalized({1.0, 0.05, -0.02}));
    const LipschitzCurve c = LipschitzCurve::from_line(line, 0, -10.0, 10.0);
    Rng rng(5);
    for (int i = 0; i < 200; ++i) {
        const Point p = testing::random_point(rng, 3, -4, 4);
        CHECK(curve_distance(c, p) ==
              Approx(point_line_distance(line.anchor(), line.dir().components(), p)).margin(1e-12));
    }
}

TEST_CASE("curve indicator refuses points beyond the span") {
    const LipschitzCurve c(0, {0.0, 1.0}, {{0.0}, {0.0}}, 0.1);
    CHECK(curve_indicator(c, 0.5, Point{1.4, 0.0}));
    CHECK_THROWS_AS(curve_indicator(c, 0.5, Point{1.6, 0.0}), ValidationError);
}

TEST_CASE("subdivision sides stay in the admissible window") {
    Rng rng(21);
    for (int it = 0; it < 300; ++it) {
        const std::size_t n = 2 + static_cast<std::size_t>(it % 3);
        const double delta = rng.uniform(0.01, 0.5);
        const double w = rng.uniform(0.5, 3.0);
        const double lower = w / (20.0 * static_cast<double>(n) * delta);
        const Cube cube(Point(n, 0.0), lower * rng.uniform(1.0, 30.0));
        const std::size_t k = subdivision_count(cube, delta, w);
        const double s = cube.side() / static_cast<double>(k);
        CHECK(s >= lower * (1 - 1e-12));
        CHECK(s <= 2.0 * lower * (1 + 1e-12));
    }
    // n = 2, delta = 0.1, W = 1: sides must lie in [0.25, 0.5].
    const Cube cube(Point{0.0, 0.0}, 1.0);
    const auto cubes = subdivide_cube(cube, 0.1, 1.0);
    REQUIRE(cubes.size() == 4);
    double volume = 0.0;
    for (const Cube& c : cubes) volume += c.volume();
    CHECK(volume == Approx(1.0));
    CHECK(cubes[1].min_corner()[0] == Approx(0.5));  // dimension 0 varies fastest
    CHECK(cubes[1].min_corner()[1] == 0.0);
}

TEST_CASE("fattened axis-parallel tube dominates the original on the subcube") {
    Rng rng(31);
    for (int it = 0; it < 200; ++it) {
        const std::size_t n = 2 + static_cast<std::size_t>(it % 3);
        const std::size_t j = static_cast<std::size_t>(it) % n;
        const double delta = rng.uniform(0.01, 0.5);
        const double w = rng.uniform(0.5, 2.0);
        const Cube cube(testing::random_point(rng, n, -1, 1), w / (10.0 * static_cast<double>(n) * delta));
        // A line within delta of e_j passing within W of the cube.
        const Direction dir = random_direction_in_cap(rng, n, j, delta);
        Point through = cube.center();
        for (std::size_t d = 0; d < n; ++d)
            if (d != j) through[d] += rng.uniform(-1.0, 1.0) * (cube.side() / 2 + w / std::sqrt(double(n)));
        const Tube tube(Line(through, dir), w);
        if (!tube_intersects_cube(tube, cube)) continue;
        const Tube fat = fatten_axis_parallel(tube, j, cube, delta);
        CHECK(fat.radius() == 2.0 * w);
        for (int s = 0; s < 200; ++s) {
            Point p = cube.min_corner();
            for (double& x : p) x += rng.uniform() * cube.side();
            if (tube_indicator(tube, p)) CHECK(tube_indicator(fat, p));
        }
    }
}

TEST_CASE("cap covers contain every sampled direction of the cap") {
    Rng rng(41);
    for (std::size_t n = 2; n <= 4; ++n) {
        for (const double big : {0.05, 0.3, 1.0}) {
            for (const double ratio : {1.0, 0.5, 0.2}) {
                const Direction c(testing::random_unit(rng, n));
                const Cap cap(c, big);
                const double rho = big * ratio;
                const auto cover = cap_cover(cap, rho);
                const double bound = cap_cover_constant(n) * std::pow(big / rho, double(n) - 1.0);
                CHECK(static_cast<double>(cover.size()) <= bound);
                for (const Cap& k : cover) CHECK(k.ang_radius() == rho);
                int tested = 0;
                while (tested < 300) {
                    const Direction d(testing::random_unit(rng, n));
                    if (!cap.contains(d, 0.0)) {
                        // Rejection sampling is slow for tiny caps; perturb the centre instead.
                        std::vector<double> v(c.components().begin(), c.components().end());
                        const auto u = testing::random_unit(rng, n);
                        const double t = std::tan(big) * rng.uniform();
                        for (std::size_t i = 0; i < n; ++i) v[i] += t * u[i];
                        const Direction e = Direction::normalized(v);
                        if (!cap.contains(e, 0.0)) continue;
                        const bool covered = std::any_of(cover.begin(), cover.end(),
                                                         [&](const Cap& k) { return k.contains(e); });
                        CHECK(covered);
                        ++tested;
                        continue;
                    }
                    const bool covered =
                        std::any_of(cover.begin(), cover.end(), [&](const Cap& k) { return k.contains(d); });
                    CHECK(covered);
                    ++tested;
                }
            }
        }
    }
}

TEST_CASE("cap probes sit at the centre and on the boundary") {
    const Cap cap(Direction::normalized({1.0, 2.0, 2.0}), 0.2);
    const auto probes = cap_probe_directions(cap);
    REQUIRE(probes.size() == 5);
    CHECK(probes[0] == cap.center());
    for (std::size_t i = 1; i < probes.size(); ++i) CHECK(line_angle(probes[i], cap.center()) == Approx(0.2));
}

TEST_CASE("frame maps send cap centres to the basis") {
    Rng rng(51);
    for (std::size_t n = 2; n <= 4; ++n) {
        const double wide = 1.0 / (10.0 * double(n));
        for (int it = 0; it < 1000; ++it) {
            std::vector<Direction> centres;
            for (std::size_t j = 0; j < n; ++j) centres.push_back(random_direction_in_cap(rng, n, j, wide));
            const LinearMap L = frame_map(centres);
            for (std::size_t j = 0; j < n; ++j) {
                const Point img = L.apply(centres[j].components());
                for (std::size_t d = 0; d < n; ++d) CHECK(img[d] == Approx(d == j ? 1.0 : 0.0).margin(1e-12));
            }
            CHECK(L.min_stretch() >= 0.5);
            CHECK(L.max_stretch() <= 2.0);
            CHECK(L.volume_distortion() <= std::pow(2.0, double(n)));
            CHECK(L.volume_distortion() * wedge_volume(centres) == Approx(1.0));
        }
    }
}

TEST_CASE("degenerate frames are rejected") {
    const std::vector<Direction> same{Direction::axis(2, 0), Direction::axis(2, 0)};
    CHECK_THROWS_AS(frame_map(same), ValidationError);
    const std::vector<Direction> basis{Direction::axis(3, 0), Direction::axis(3, 1), Direction::axis(3, 2)};
    CHECK(wedge_volume(basis) == Approx(1.0));
}
