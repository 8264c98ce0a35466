#include <catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "kakeya/experiments.hpp"
#include "kakeya/loomis_whitney.hpp"

using namespace kakeya;
using Catch::Approx;

namespace {

GenSpec sweep_spec(Regime r) {
    GenSpec s;
    s.n = 2;
    s.counts = {5, 5};
    s.regime = r;
    s.angle = 0.1;
    s.cube = Cube({0.0, 0.0}, 1.0);
    s.seed = 3;
    return s;
}

std::size_t lines(const std::string& s) {
    std::size_t k = 0;
    for (char c : s) k += c == '\n';
    return k;
}

}  // namespace

TEST_CASE("axis-parallel sweep stays under the Loomis-Whitney chain bound") {
    SweepOptions opt;
    opt.refine = RefineOptions{1e-2, 5, 0, {}};
    const SweepResult r = sweep_scale(sweep_spec(Regime::axis_parallel), {2.0, 4.0, 8.0, 16.0}, 0.1, opt);
    REQUIRE(r.rows.size() == 4);
    const double omega = unit_ball_volume(1);
    for (const SweepRow& row : r.rows) {
        CHECK(row.sound);
        CHECK(row.integral.value <= row.bound);
        CHECK(row.ratio <= omega * omega * (1.0 + 1e-2));
        CHECK(row.ratio >= 0.0);
    }
    CHECK(r.slope.has_value());
}

TEST_CASE("sweeps are reproducible and monotone for fixed tubes") {
    SweepOptions opt;
    opt.fixed_tubes = true;
    opt.refine = RefineOptions{1e-3, 3, 0, {}};
    const std::vector<double> s_values{2.0, 5.0, 10.0, 20.0};
    const SweepResult a = sweep_scale(sweep_spec(Regime::small_angle), s_values, 0.1, opt);
    const SweepResult b = sweep_scale(sweep_spec(Regime::small_angle), s_values, 0.1, opt);
    CHECK(sweep_csv(a) == sweep_csv(b));
    for (std::size_t i = 1; i < a.rows.size(); ++i)
        CHECK(a.rows[i].integral.value >= a.rows[i - 1].integral.value * (1.0 - 2e-3));
    for (const SweepRow& row : a.rows) CHECK(row.sound);
    const std::string csv = sweep_csv(a);
    CHECK(csv.rfind("S,value,error_estimate,cells_per_side,converged,bound,count_product,ratio,sound\n", 0) == 0);
    CHECK(lines(csv) == 5);
}

TEST_CASE("sweep inputs are validated") {
    CHECK_THROWS_AS(sweep_scale(sweep_spec(Regime::small_angle), {}, 0.1), ValidationError);
    CHECK_THROWS_AS(sweep_scale(sweep_spec(Regime::small_angle), {0.5, 2.0}, 0.1), ValidationError);
    CHECK_THROWS_AS(sweep_scale(sweep_spec(Regime::small_angle), {4.0, 2.0}, 0.1), ValidationError);
}

TEST_CASE("budget one returns the initial configuration") {
    GenSpec s = sweep_spec(Regime::small_angle);
    s.cube = Cube({0.0, 0.0}, 6.0);
    SearchOptions opt;
    opt.budget = 1;
    const SearchResult r = extremal_search(s, opt);
    REQUIRE(r.trace.size() == 1);
    CHECK(r.trace[0].iteration == 0);
    CHECK(r.best_ratio == r.trace[0].current);
    CHECK(r.best_ratio == Approx(overlap_ratio(r.best, s.cube, opt.grid)));
}

TEST_CASE("greedy search traces are monotone and thread independent") {
    GenSpec s = sweep_spec(Regime::small_angle);
    s.cube = Cube({0.0, 0.0}, 6.0);
    SearchOptions opt;
    opt.budget = 60;
    opt.restarts = 3;
    opt.threads = 1;
    const SearchResult a = extremal_search(s, opt);
    opt.threads = 4;
    const SearchResult b = extremal_search(s, opt);
    CHECK(trace_csv(a) == trace_csv(b));
    CHECK(a.best_ratio == b.best_ratio);
    CHECK(a.trace.size() == 60);

    for (std::size_t i = 1; i < a.trace.size(); ++i) {
        CHECK(a.trace[i].best >= a.trace[i - 1].best);
        if (a.trace[i].restart == a.trace[i - 1].restart) {
            CHECK(a.trace[i].current >= a.trace[i - 1].current);
            if (a.trace[i].accepted) CHECK(a.trace[i].current == a.trace[i].proposed);
        }
    }
    CHECK(a.best_ratio == a.trace.back().best);
    for (const TubeFamily& f : a.best) CHECK(f.max_angle() <= s.angle);
}

TEST_CASE("concentrated bushes beat random placements") {
    // All tubes through the cube centre, directions spread over the cap.
    const Cube cube({0.0, 0.0}, 6.0);
    std::vector<TubeFamily> bush{TubeFamily(0, 1.0), TubeFamily(1, 1.0)};
    for (std::size_t j = 0; j < 2; ++j)
        for (int a = 0; a < 5; ++a) {
            const double t = -0.1 + 0.05 * a;
            std::vector<double> d(2);
            d[j] = std::cos(t);
            d[1 - j] = std::sin(t);
            bush[j].add_line(Line(cube.center(), Direction::normalized(d)));
        }
    GenSpec s = sweep_spec(Regime::small_angle);
    s.cube = cube;
    SearchOptions opt;
    opt.budget = 40;
    opt.restarts = 2;
    const SearchResult r = extremal_search(s, opt);
    const double random_ratio = r.trace.front().current;
    CHECK(overlap_ratio(bush, cube, opt.grid) >= random_ratio);
    CHECK(r.best_ratio >= random_ratio);
}

TEST_CASE("annealing may accept worse states") {
    GenSpec s = sweep_spec(Regime::small_angle);
    s.cube = Cube({0.0, 0.0}, 6.0);
    SearchOptions opt;
    opt.budget = 50;
    opt.restarts = 1;
    opt.anneal = true;
    opt.temperature = 10.0;
    opt.cooling = 1.0;
    const SearchResult r = extremal_search(s, opt);
    bool dropped = false;
    for (std::size_t i = 1; i < r.trace.size(); ++i) dropped = dropped || r.trace[i].current < r.trace[i - 1].current;
    CHECK(dropped);
    for (std::size_t i = 1; i < r.trace.size(); ++i) CHECK(r.trace[i].best >= r.trace[i - 1].best);
}
