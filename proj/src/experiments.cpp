#include "kakeya/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <locale>
#include <sstream>

#include "kakeya/detail/distance.hpp"
#include "kakeya/io.hpp"
#include "kakeya/parallel.hpp"

namespace kakeya {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw ValidationError(what);
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

double count_product(std::span<const double> counts, std::size_t n) {
    double prod = 1.0;
    for (const double c : counts) prod *= c == 0.0 ? 0.0 : detail::family_power(c, n);
    return prod;
}

Cube cube_of_side(const Cube& base, double s) { return Cube(base.min_corner(), s); }

std::optional<double> fit_slope(const std::vector<SweepRow>& rows) {
    std::vector<double> xs, ys;
    for (const SweepRow& r : rows) {
        if (!r.integral.converged || !(r.ratio > 0.0)) continue;
        xs.push_back(std::log(r.s));
        ys.push_back(std::log(r.ratio));
    }
    if (xs.size() < 2) return std::nullopt;
    const double k = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= k;
    my /= k;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (sxx == 0.0) return std::nullopt;
    return sxy / sxx;
}

Point clamp_to_cube(Point p, const Cube& cube) {
    for (std::size_t d = 0; d < p.size(); ++d)
        p[d] = std::clamp(p[d], cube.min_corner()[d], cube.min_corner()[d] + cube.side());
    return p;
}

struct Restart {
    SearchState state;
    std::vector<TraceEntry> trace;
};

Restart run_restart(const GenSpec& spec, const SearchOptions& opt, std::size_t r, std::size_t budget) {
    GenSpec start = spec;
    start.seed = splitmix64(spec.seed ^ splitmix64(r));
    Rng rng(splitmix64(start.seed));
    const double angle = regime_angle(spec);
    const std::size_t n = spec.n;

    Restart out;
    SearchState& st = out.state;
    st.families = generate(start);
    st.ratio = overlap_ratio(st.families, spec.cube, opt.grid);
    st.best_families = st.families;
    st.best_ratio = st.ratio;
    st.temperature = opt.temperature;
    out.trace.push_back({r, 0, st.ratio, true, st.ratio, st.ratio});

    std::size_t total = 0;
    for (const auto& f : st.families) total += f.size();

    for (std::size_t it = 1; it < budget; ++it) {
        std::vector<TubeFamily> next = st.families;
        if (total > 0) {
            std::size_t pick = static_cast<std::size_t>(rng.bits() % total);
            std::size_t j = 0;
            while (pick >= next[j].size()) pick -= next[j++].size();
            const Member& old = next[j].members()[pick];
            const Line& line = std::get<Line>(old.shape);

            Point anchor = line.anchor();
            for (double& x : anchor) x += opt.step * spec.cube.side() * rng.normal();
            anchor = clamp_to_cube(std::move(anchor), spec.cube);

            Direction dir = line.dir();
            if (spec.regime != Regime::axis_parallel) {
                std::vector<double> v(dir.components().begin(), dir.components().end());
                for (double& x : v) x += opt.step * angle * rng.normal();
                Direction moved = Direction::normalized(std::move(v));
                dir = angle_from_axis(moved, j) <= angle ? moved : random_direction_in_cap(rng, n, j, angle);
            }
            std::vector<Member> members = next[j].members();
            members[pick] = Member{Line(std::move(anchor), std::move(dir)), old.weight};
            next[j] = TubeFamily(j, next[j].radius(), std::move(members));
        }
        const double proposed = overlap_ratio(next, spec.cube, opt.grid);
        bool accept = proposed > st.ratio;
        if (!accept && opt.anneal && st.temperature > 0.0)
            accept = rng.uniform() < std::exp((proposed - st.ratio) / st.temperature);
        if (opt.anneal) st.temperature *= opt.cooling;
        if (accept) {
            st.families = std::move(next);
            st.ratio = proposed;
            if (st.ratio > st.best_ratio) {
                st.best_ratio = st.ratio;
                st.best_families = st.families;
            }
        }
        st.iterations = it;
        out.trace.push_back({r, it, proposed, accept, st.ratio, st.best_ratio});
    }
    return out;
}

}  // namespace

SweepResult sweep_scale(const GenSpec& tmpl, const std::vector<double>& s_values, double delta,
                        const SweepOptions& options) {
    validate(tmpl);
    require(!s_values.empty(), "need at least one S value");
    for (std::size_t i = 0; i < s_values.size(); ++i) {
        require(std::isfinite(s_values[i]) && s_values[i] >= 1.0, "S values must be >= 1");
        if (i > 0) require(s_values[i] > s_values[i - 1], "S values must increase");
    }
    const std::size_t n = tmpl.n;
    std::vector<TubeFamily> fixed;
    if (options.fixed_tubes) {
        GenSpec big = tmpl;
        big.cube = cube_of_side(tmpl.cube, s_values.back());
        fixed = generate(big);
    }
    RefineOptions refine = options.refine;
    refine.eval.threads = options.threads;

    SweepResult out;
    for (const double s : s_values) {
        GenSpec spec = tmpl;
        spec.cube = cube_of_side(tmpl.cube, s);
        const std::vector<TubeFamily> fams = options.fixed_tubes ? fixed : generate(spec);
        SweepRow row;
        row.s = s;
        row.integral = evaluate_refined(fams, spec.cube, refine);
        const Certificate cert = certify_multiscale(fams, spec.cube, delta, options.threads);
        row.bound = cert.final_bound;
        row.count_product = count_product(cert.counts_in_cube, n);
        row.ratio = row.count_product > 0.0 ? row.integral.value / row.count_product : 0.0;
        row.sound = row.integral.value <= row.bound;
        out.rows.push_back(row);
    }
    out.slope = fit_slope(out.rows);
    return out;
}

double overlap_ratio(std::span<const TubeFamily> families, const Cube& cube, std::size_t grid, unsigned threads) {
    const std::size_t n = cube.dim();
    std::vector<double> counts;
    for (const TubeFamily& f : families) counts.push_back(weighted_count(f, cube.box(), f.radius()));
    const double prod = count_product(counts, n);
    if (prod == 0.0) return 0.0;
    EvalOptions eval;
    eval.threads = threads;
    return evaluate_overlap(families, cube, GridSpec{grid}, eval).value / prod;
}

SearchResult extremal_search(const GenSpec& spec, const SearchOptions& options) {
    validate(spec);
    require(spec.regime != Regime::lipschitz, "search moves straight tubes only");
    require(options.budget >= 1, "budget must be at least 1");
    require(options.restarts >= 1, "need at least one restart");
    require(options.grid >= 1, "grid must be at least 1");
    require(options.step > 0.0 && std::isfinite(options.step), "step must be positive");
    require(!options.anneal || (options.cooling > 0.0 && options.cooling <= 1.0), "cooling must lie in (0, 1]");

    const std::size_t restarts = std::min(options.restarts, options.budget);
    std::vector<Restart> runs(restarts);
    parallel_for(restarts, options.threads, [&](std::size_t r) {
        const std::size_t budget = options.budget / restarts + (r < options.budget % restarts ? 1 : 0);
        runs[r] = run_restart(spec, options, r, budget);
    });

    SearchResult out;
    out.best_ratio = -std::numeric_limits<double>::infinity();
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < restarts; ++r) {
        for (TraceEntry e : runs[r].trace) {
            best = std::max(best, e.current);
            e.best = best;
            out.trace.push_back(e);
        }
        if (runs[r].state.best_ratio > out.best_ratio) {
            out.best_ratio = runs[r].state.best_ratio;
            out.best = runs[r].state.best_families;
            out.best_restart = r;
        }
    }
    return out;
}

std::string sweep_csv(const SweepResult& r) {
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os << "S,value,error_estimate,cells_per_side,converged,bound,count_product,ratio,sound\n";
    for (const SweepRow& row : r.rows) {
        os << format_number(row.s) << ',' << format_number(row.integral.value) << ','
           << (row.integral.error_estimate ? format_number(*row.integral.error_estimate) : std::string()) << ','
           << row.integral.cells_per_side << ',' << (row.integral.converged ? 1 : 0) << ','
           << format_number(row.bound) << ',' << format_number(row.count_product) << ',' << format_number(row.ratio)
           << ',' << (row.sound ? 1 : 0) << '\n';
    }
    return os.str();
}

std::string trace_csv(const SearchResult& r) {
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os << "restart,iteration,proposed,accepted,current,best\n";
    for (const TraceEntry& e : r.trace)
        os << e.restart << ',' << e.iteration << ',' << format_number(e.proposed) << ',' << (e.accepted ? 1 : 0) << ','
           << format_number(e.current) << ',' << format_number(e.best) << '\n';
    return os.str();
}

}  // namespace kakeya
