#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "kakeya/generators.hpp"
#include "kakeya/loomis_whitney.hpp"

using namespace kakeya;
using Catch::Approx;

namespace {

AxisBox unit_box(std::size_t d) { return AxisBox{Point(d, 0.0), Point(d, 1.0)}; }

std::vector<ProjectionFunction> random_functions(Rng& rng, std::size_t n, std::size_t k) {
    std::vector<ProjectionFunction> fs;
    std::size_t cells = 1;
    for (std::size_t d = 0; d + 1 < n; ++d) cells *= k;
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<double> v(cells);
        for (double& x : v) x = rng.uniform() < 0.3 ? 0.0 : rng.uniform(0.0, 5.0);
        fs.emplace_back(unit_box(n - 1), std::vector<std::size_t>(n - 1, k), std::move(v));
    }
    return fs;
}

// Exact left side for functions constant on a k^{n-1} grid over [0,1]^{n-1}:
// a sum over the k^n cells of [0,1]^n.
double discrete_left(const std::vector<ProjectionFunction>& fs, std::size_t k) {
    const std::size_t n = fs.size();
    std::size_t total = 1;
    for (std::size_t d = 0; d < n; ++d) total *= k;
    double sum = 0.0;
    std::vector<std::size_t> idx(n);
    for (std::size_t c = 0; c < total; ++c) {
        std::size_t r = c;
        for (std::size_t d = 0; d < n; ++d) {
            idx[d] = r % k;
            r /= k;
        }
        double prod = 1.0;
        for (std::size_t j = 0; j < n; ++j) {
            std::size_t off = 0, stride = 1;
            for (std::size_t d = 0; d < n; ++d) {
                if (d == j) continue;
                off += idx[d] * stride;
                stride *= k;
            }
            prod *= std::pow(fs[j].values()[off], 1.0 / (double(n) - 1.0));
        }
        sum += prod;
    }
    return sum / std::pow(double(k), double(n));
}

}  // namespace

TEST_CASE("unit ball volumes") {
    CHECK(unit_ball_volume(1) == Approx(2.0));
    CHECK(unit_ball_volume(2) == Approx(std::numbers::pi));
    CHECK(unit_ball_volume(3) == Approx(4.0 * std::numbers::pi / 3.0));
    BallSum b{{Point{0.0, 0.0}, Point{1.0, 1.0}}, {1.0, 2.0}, 0.5};
    CHECK(ball_sum_l1(b, 2) == Approx(3.0 * std::numbers::pi * 0.25));
}

TEST_CASE("projection drops one coordinate") {
    CHECK(project(Point{1.0, 2.0, 3.0}, 1) == Point{1.0, 3.0});
    CHECK_THROWS_AS(project(Point{1.0}, 0), ValidationError);
}

TEST_CASE("grid functions") {
    const ProjectionFunction f(AxisBox{{0.0, 0.0}, {2.0, 1.0}}, {2, 1}, {1.0, 3.0});
    CHECK(f.value_at(Point{0.5, 0.5}) == 1.0);
    CHECK(f.value_at(Point{2.0, 1.0}) == 3.0);  // the last cell is closed
    CHECK(f.l1_norm() == Approx(4.0));
    CHECK(f.scaled(2.0).l1_norm() == Approx(8.0));
    CHECK_THROWS_AS(f.value_at(Point{2.1, 0.5}), ValidationError);
    CHECK_THROWS_AS(ProjectionFunction(unit_box(2), {2, 2}, {1.0, 2.0}), ValidationError);
    CHECK_THROWS_AS(ProjectionFunction(unit_box(1), {2}, {1.0, -2.0}), ValidationError);
    const auto ind = ProjectionFunction::indicator(unit_box(2), {4, 4}, AxisBox{{0.25, 0.0}, {0.75, 0.5}});
    CHECK(ind.l1_norm() == Approx(0.25));
}

TEST_CASE("left side matches the exact cell sum on aligned grids") {
    Rng rng(8);
    for (std::size_t n = 2; n <= 4; ++n) {
        for (int it = 0; it < 5; ++it) {
            const std::size_t k = 2 + static_cast<std::size_t>(it);
            const auto fs = random_functions(rng, n, k);
            CHECK(lw_left(fs, unit_box(n), GridSpec{2 * k}) == Approx(discrete_left(fs, k)).epsilon(1e-12));
        }
    }
}

TEST_CASE("Loomis-Whitney holds on random grid functions") {
    Rng rng(9);
    for (std::size_t n = 2; n <= 4; ++n) {
        for (int it = 0; it < 30; ++it) {
            const std::size_t k = 2 + static_cast<std::size_t>(it % 4);
            const auto fs = random_functions(rng, n, k);
            const LwCheck c = verify_lw(fs, unit_box(n), GridSpec{2 * k});
            CHECK(c.holds());
            CHECK(c.ratio <= 1.0 + 1e-12);
        }
    }
}

TEST_CASE("product indicators are the equality case") {
    for (std::size_t n = 2; n <= 4; ++n) {
        const AxisBox inner{Point(n, 0.25), Point(n, 0.75)};
        std::vector<ProjectionFunction> fs;
        for (std::size_t j = 0; j < n; ++j)
            fs.push_back(ProjectionFunction::indicator(unit_box(n - 1), std::vector<std::size_t>(n - 1, 4),
                                                       AxisBox{project(inner.lo, j), project(inner.hi, j)}));
        const LwCheck c = verify_lw(fs, unit_box(n), GridSpec{8});
        CHECK(c.ratio == Approx(1.0).epsilon(1e-12));
        CHECK(c.holds());
    }
}

TEST_CASE("the ratio is invariant under scaling") {
    Rng rng(10);
    auto fs = random_functions(rng, 3, 3);
    const double r0 = verify_lw(fs, unit_box(3), GridSpec{6}).ratio;
    for (auto& f : fs) f = f.scaled(7.5);
    CHECK(verify_lw(fs, unit_box(3), GridSpec{6}).ratio == Approx(r0).epsilon(1e-12));
}

TEST_CASE("vacuous instances") {
    std::vector<ProjectionFunction> fs{ProjectionFunction(unit_box(1), {1}, {0.0}),
                                       ProjectionFunction(unit_box(1), {1}, {1.0})};
    const LwCheck c = verify_lw(fs, unit_box(2), GridSpec{4});
    CHECK(c.vacuous);
    CHECK(c.holds());
}

TEST_CASE("integration box must project into each function's box") {
    Rng rng(1);
    const auto fs = random_functions(rng, 2, 2);
    CHECK_THROWS_AS(lw_left(fs, AxisBox{{0.0, 0.0}, {2.0, 1.0}}, GridSpec{4}), ValidationError);
}
