#include <catch_amalgamated.hpp>

#include <cmath>
#include <set>

#include "kakeya/evaluator.hpp"
#include "kakeya/generators.hpp"

using namespace kakeya;
using Catch::Approx;

namespace {

GenSpec base(Regime r, std::size_t n = 3) {
    GenSpec s;
    s.n = n;
    s.counts.assign(n, 7);
    s.regime = r;
    s.angle = 0.05;
    s.cube = Cube(Point(n, -2.0), 9.0);
    s.seed = 1234;
    return s;
}

}  // namespace

TEST_CASE("the PRNG is the standard 64-bit Mersenne Twister") {
    Rng rng(5489);
    CHECK(rng.bits() == 14514284786278117030ULL);
    Rng a(1), b(1);
    for (int i = 0; i < 1000; ++i) {
        const double x = a.uniform();
        CHECK(x == b.uniform());
        CHECK(x >= 0.0);
        CHECK(x < 1.0);
    }
}

TEST_CASE("generation is deterministic") {
    for (Regime r : {Regime::axis_parallel, Regime::small_angle, Regime::general, Regime::lipschitz, Regime::weighted}) {
        const GenSpec s = base(r);
        CHECK(generate(s) == generate(s));
        GenSpec t = s;
        t.seed = s.seed + 1;
        CHECK_FALSE(generate(s) == generate(t));
    }
}

TEST_CASE("members respect their regime") {
    for (std::size_t n = 2; n <= 4; ++n) {
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            GenSpec s = base(Regime::small_angle, n);
            s.seed = seed;
            for (const TubeFamily& f : generate(s)) {
                CHECK(f.max_angle() <= s.angle);
                CHECK(f.size() == 7);
                for (const Member& m : f.members())
                    CHECK(s.cube.box().contains(std::get<Line>(m.shape).anchor()));
            }
            s.regime = Regime::general;
            for (const TubeFamily& f : generate(s)) CHECK(f.max_angle() <= 1.0 / (10.0 * double(n)));
            s.regime = Regime::axis_parallel;
            for (const TubeFamily& f : generate(s)) CHECK(f.max_angle() == 0.0);
        }
    }
}

TEST_CASE("Lipschitz regime emits valid curves spanning the cube") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        GenSpec s = base(Regime::lipschitz, 2 + seed % 2);
        s.seed = seed;
        s.breakpoints = 3 + seed;
        const auto fams = generate(s);
        for (const TubeFamily& f : fams) {
            for (const Member& m : f.members()) {
                const auto& c = std::get<LipschitzCurve>(m.shape);
                CHECK(c.max_slope() <= s.angle);
                CHECK(c.breakpoints().size() == s.breakpoints);
                CHECK(c.span_begin() <= s.cube.min_corner()[f.axis()] - s.radius);
                CHECK(c.span_end() >= s.cube.min_corner()[f.axis()] + s.cube.side() + s.radius);
            }
        }
        CHECK_NOTHROW(evaluate_overlap(fams, s.cube, GridSpec{8}));
    }
}

TEST_CASE("weights are drawn from the configured range") {
    GenSpec s = base(Regime::weighted);
    s.weight_min = 0.5;
    s.weight_max = 2.0;
    for (const TubeFamily& f : generate(s))
        for (const Member& m : f.members()) {
            CHECK(m.weight >= 0.5);
            CHECK(m.weight < 2.0);
        }
    s.integer_weights = true;
    s.weight_min = 1.0;
    s.weight_max = 3.0;
    std::set<double> seen;
    for (const TubeFamily& f : generate(s))
        for (const Member& m : f.members()) seen.insert(m.weight);
    CHECK(seen == std::set<double>{1.0, 2.0, 3.0});
}

TEST_CASE("cap directions are uniform in solid angle") {
    // For n = 3 the share with polar angle below theta/2 is
    // (1 - cos(theta/2)) / (1 - cos(theta)).
    Rng rng(77);
    const double theta = 0.4;
    const int total = 40000;
    int inner = 0;
    for (int i = 0; i < total; ++i) {
        const Direction d = random_direction_in_cap(rng, 3, 1, theta);
        const double a = angle_from_axis(d, 1);
        CHECK(a <= theta);
        if (a <= theta / 2) ++inner;
    }
    const double expected = (1 - std::cos(theta / 2)) / (1 - std::cos(theta));
    CHECK(double(inner) / total == Approx(expected).margin(0.01));
}

TEST_CASE("axis-parallel grid enumeration") {
    const auto one = enumerate_grid_axis_parallel(3, 1, 2.0);
    for (const TubeFamily& f : one) {
        REQUIRE(f.size() == 1);
        CHECK(std::get<Line>(f.members()[0].shape).anchor() == Point{0.0, 0.0, 0.0});
    }
    const auto grid = enumerate_grid_axis_parallel(3, 4, 2.5);
    for (const TubeFamily& f : grid) {
        CHECK(f.size() == 16);
        std::set<Point> projections;
        for (const Member& m : f.members()) {
            const Line& l = std::get<Line>(m.shape);
            CHECK(angle_from_axis(l.dir(), f.axis()) == 0.0);
            Point p = l.anchor();
            p.erase(p.begin() + static_cast<std::ptrdiff_t>(f.axis()));
            projections.insert(p);
        }
        CHECK(projections.size() == 16);
    }
    const auto plane = enumerate_grid_axis_parallel(2, 3, 4.0);
    CHECK(exact_overlap_2d(plane, Cube({-10.0, -10.0}, 20.0)) == Approx(36.0));
}

TEST_CASE("specs are validated") {
    GenSpec s = base(Regime::small_angle);
    s.counts = {1, 2};
    CHECK_THROWS_AS(generate(s), ValidationError);
    s = base(Regime::lipschitz);
    s.breakpoints = 1;
    CHECK_THROWS_AS(generate(s), ValidationError);
    s = base(Regime::weighted);
    s.weight_min = 3.0;
    s.weight_max = 1.0;
    CHECK_THROWS_AS(generate(s), ValidationError);
    CHECK_THROWS_AS(enumerate_grid_axis_parallel(2, 0, 1.0), ValidationError);
}
