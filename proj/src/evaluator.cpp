#include "kakeya/evaluator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "kakeya/detail/distance.hpp"
#include "kakeya/parallel.hpp"

namespace kakeya {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw ValidationError(what);
}

struct Piece {
    const double* a;
    const double* b;  // direction for lines, far endpoint for segments
    bool segment;
};

struct CompiledMember {
    double weight;
    std::vector<Piece> pieces;
};

struct CompiledFamily {
    double radius;
    std::vector<CompiledMember> members;
};

std::vector<CompiledFamily> compile(std::span<const TubeFamily> families) {
    std::vector<CompiledFamily> out;
    out.reserve(families.size());
    for (const TubeFamily& f : families) {
        CompiledFamily cf{f.radius(), {}};
        for (const Member& m : f.members()) {
            CompiledMember cm{m.weight, {}};
            if (const auto* line = std::get_if<Line>(&m.shape)) {
                cm.pieces.push_back({line->anchor().data(), line->dir().components().data(), false});
            } else {
                const auto& v = std::get<LipschitzCurve>(m.shape).vertices();
                for (std::size_t i = 0; i + 1 < v.size(); ++i) cm.pieces.push_back({v[i].data(), v[i + 1].data(), true});
            }
            cf.members.push_back(std::move(cm));
        }
        out.push_back(std::move(cf));
    }
    return out;
}

double piece_distance(const Piece& pc, const double* p, std::size_t n) {
    return pc.segment ? detail::segment_distance(pc.a, pc.b, p, n) : detail::line_distance(pc.a, pc.b, p, n);
}

double piece_box_distance(const Piece& pc, const AxisBox& box, std::size_t n) {
    const std::span<const double> a(pc.a, n);
    const std::span<const double> b(pc.b, n);
    return pc.segment ? segment_box_distance(a, b, box) : line_box_distance(a, b, box);
}

// Members of the curve kind must cover the cube's extent along their axis,
// widened by the radius, so that truncating the graph cannot change any
// indicator value inside the cube.
void check_curve_spans(std::span<const TubeFamily> families, const Cube& cube) {
    for (const TubeFamily& f : families) {
        const double lo = cube.min_corner()[f.axis()] - f.radius();
        const double hi = cube.min_corner()[f.axis()] + cube.side() + f.radius();
        for (const Member& m : f.members()) {
            if (const auto* c = std::get_if<LipschitzCurve>(&m.shape))
                require(c->span_begin() <= lo && c->span_end() >= hi,
                        "curve breakpoint span does not cover the cube's extent along its axis");
        }
    }
}

std::size_t block_side(std::size_t n) {
    switch (n) {
        case 2: return 32;
        case 3: return 12;
        case 4: return 6;
        default: return 4;
    }
}

// h^n * sum over the m^n cell midpoints.
double midpoint_rule(const std::vector<CompiledFamily>& fams, const Cube& cube, std::size_t m,
                     const EvalOptions& options) {
    const std::size_t n = cube.dim();
    require(m >= 1, "cells per side must be positive");
    const double cells = std::pow(static_cast<double>(m), static_cast<double>(n));
    if (cells > options.cell_budget)
        throw BudgetExceeded("grid of " + std::to_string(m) + "^" + std::to_string(n) + " cells exceeds the cell budget");
    for (const auto& f : fams)
        if (f.members.empty()) return 0.0;

    const double h = cube.side() / static_cast<double>(m);
    const std::size_t bs = block_side(n);
    const std::size_t nb = (m + bs - 1) / bs;
    std::size_t blocks = 1;
    for (std::size_t d = 0; d < n; ++d) blocks *= nb;
    const auto& lo = cube.min_corner();

    std::vector<double> block_sums(blocks, 0.0);
    parallel_for(blocks, options.threads, [&](std::size_t b) {
        std::vector<std::size_t> first(n), last(n);
        std::size_t rest = b;
        AxisBox box{Point(n), Point(n)};
        for (std::size_t d = 0; d < n; ++d) {
            const std::size_t bi = rest % nb;
            rest /= nb;
            first[d] = bi * bs;
            last[d] = std::min(m, first[d] + bs);
            box.lo[d] = lo[d] + static_cast<double>(first[d]) * h;
            box.hi[d] = lo[d] + static_cast<double>(last[d]) * h;
        }
        std::vector<std::vector<CompiledMember>> active(fams.size());
        for (std::size_t j = 0; j < fams.size(); ++j) {
            for (const CompiledMember& cm : fams[j].members) {
                CompiledMember live{cm.weight, {}};
                for (const Piece& pc : cm.pieces)
                    if (piece_box_distance(pc, box, n) <= fams[j].radius) live.pieces.push_back(pc);
                if (!live.pieces.empty()) active[j].push_back(std::move(live));
            }
            if (active[j].empty()) return;
        }
        std::vector<std::size_t> idx = first;
        Point p(n);
        double sum = 0.0;
        for (;;) {
            for (std::size_t d = 0; d < n; ++d) p[d] = lo[d] + (static_cast<double>(idx[d]) + 0.5) * h;
            double prod = 1.0;
            for (std::size_t j = 0; j < active.size(); ++j) {
                double s = 0.0;
                for (const CompiledMember& cm : active[j]) {
                    for (const Piece& pc : cm.pieces) {
                        if (piece_distance(pc, p.data(), n) <= fams[j].radius) {
                            s += cm.weight;
                            break;
                        }
                    }
                }
                if (s == 0.0) {
                    prod = 0.0;
                    break;
                }
                prod *= detail::family_power(s, n);
            }
            sum += prod;
            std::size_t d = 0;
            for (; d < n; ++d) {
                if (++idx[d] < last[d]) break;
                idx[d] = first[d];
            }
            if (d == n) break;
        }
        block_sums[b] = sum;
    });
    return ordered_sum(block_sums) * std::pow(h, static_cast<double>(n));
}

using Polygon = std::vector<std::array<double, 2>>;

// Keeps the part of a convex polygon with nx*x + ny*y <= c.
Polygon clip(const Polygon& poly, double nx, double ny, double c) {
    Polygon out;
    const std::size_t k = poly.size();
    for (std::size_t i = 0; i < k; ++i) {
        const auto& p = poly[i];
        const auto& q = poly[(i + 1) % k];
        const double fp = nx * p[0] + ny * p[1] - c;
        const double fq = nx * q[0] + ny * q[1] - c;
        if (fp <= 0.0) out.push_back(p);
        if ((fp < 0.0 && fq > 0.0) || (fp > 0.0 && fq < 0.0)) {
            const double t = fp / (fp - fq);
            out.push_back({p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])});
        }
    }
    return out;
}

Polygon clip_strip(const Polygon& poly, const Line& line, double radius) {
    const double nx = -line.dir()[1];
    const double ny = line.dir()[0];
    const double c = nx * line.anchor()[0] + ny * line.anchor()[1];
    return clip(clip(poly, nx, ny, c + radius), -nx, -ny, -c + radius);
}

}  // namespace

// ---------------------------------------------------------------- families

std::size_t Member::dim() const {
    return std::visit([](const auto& s) { return s.dim(); }, shape);
}

TubeFamily::TubeFamily(std::size_t axis, double radius, std::vector<Member> members) : axis_(axis), radius_(radius) {
    require(std::isfinite(radius_) && radius_ > 0.0, "family radius must be positive");
    for (Member& m : members) add(std::move(m));
}

void TubeFamily::check_member(const Member& m) const {
    require(std::isfinite(m.weight) && m.weight >= 0.0, "member weights must be finite and nonnegative");
    require(axis_ < m.dim(), "family axis out of range for member dimension");
    if (!members_.empty()) require(m.dim() == members_.front().dim(), "family members live in different dimensions");
    if (const auto* c = std::get_if<LipschitzCurve>(&m.shape))
        require(c->axis() == axis_, "curve axis differs from its family axis");
}

void TubeFamily::add(Member m) {
    check_member(m);
    members_.push_back(std::move(m));
}

double TubeFamily::total_weight() const {
    double s = 0.0;
    for (const Member& m : members_) s += m.weight;
    return s;
}

bool TubeFamily::has_curves() const {
    return std::any_of(members_.begin(), members_.end(), [](const Member& m) { return m.is_curve(); });
}

double TubeFamily::max_angle() const {
    double best = 0.0;
    for (const Member& m : members_) {
        if (const auto* line = std::get_if<Line>(&m.shape))
            best = std::max(best, angle_from_axis(line->dir(), axis_));
        else
            best = std::max(best, curve_angle(std::get<LipschitzCurve>(m.shape)));
    }
    return best;
}

TubeFamily TubeFamily::with_radius(double radius) const { return TubeFamily(axis_, radius, members_); }

bool TubeFamily::member_indicator(std::size_t i, std::span<const double> p) const {
    const Member& m = members_.at(i);
    require(p.size() == m.dim(), "point dimension does not match family");
    if (const auto* line = std::get_if<Line>(&m.shape))
        return detail::line_distance(line->anchor().data(), line->dir().components().data(), p.data(), p.size()) <=
               radius_;
    const auto& v = std::get<LipschitzCurve>(m.shape).vertices();
    for (std::size_t k = 0; k + 1 < v.size(); ++k)
        if (detail::segment_distance(v[k].data(), v[k + 1].data(), p.data(), p.size()) <= radius_) return true;
    return false;
}

double TubeFamily::member_box_distance(std::size_t i, const AxisBox& box) const {
    const Member& m = members_.at(i);
    require(box.dim() == m.dim(), "box dimension does not match family");
    if (const auto* line = std::get_if<Line>(&m.shape))
        return line_box_distance(line->anchor(), line->dir().components(), box);
    return curve_box_distance(std::get<LipschitzCurve>(m.shape), box);
}

bool TubeFamily::member_meets_box(std::size_t i, const AxisBox& box) const {
    return member_box_distance(i, box) <= radius_;
}

std::size_t check_families(std::span<const TubeFamily> families, std::size_t n) {
    require(n >= 2, "dimension must be at least 2");
    require(families.size() == n, "need exactly one family per axis");
    for (std::size_t j = 0; j < n; ++j) {
        require(families[j].axis() == j, "families must be listed in axis order");
        for (const Member& m : families[j].members()) require(m.dim() == n, "member dimension does not match n");
    }
    return n;
}

// ---------------------------------------------------------------- evaluation

double overlap_integrand(std::span<const TubeFamily> families, std::span<const double> p) {
    const std::size_t n = check_families(families, p.size());
    double prod = 1.0;
    for (const TubeFamily& f : families) {
        double s = 0.0;
        for (std::size_t i = 0; i < f.size(); ++i)
            if (f.member_indicator(i, p)) s += f.members()[i].weight;
        if (s == 0.0) return 0.0;
        prod *= detail::family_power(s, n);
    }
    return prod;
}

OverlapValue evaluate_overlap(std::span<const TubeFamily> families, const Cube& cube, GridSpec grid,
                              const EvalOptions& options) {
    check_families(families, cube.dim());
    check_curve_spans(families, cube);
    require(grid.cells_per_side >= 1, "cells per side must be positive");
    const auto fams = compile(families);
    OverlapValue out;
    out.cells_per_side = grid.cells_per_side;
    out.value = midpoint_rule(fams, cube, grid.cells_per_side, options);
    if (grid.cells_per_side % 2 == 0)
        out.error_estimate = std::abs(out.value - midpoint_rule(fams, cube, grid.cells_per_side / 2, options));
    return out;
}

OverlapValue evaluate_refined(std::span<const TubeFamily> families, const Cube& cube, const RefineOptions& options) {
    check_families(families, cube.dim());
    check_curve_spans(families, cube);
    require(options.tol > 0.0, "refinement tolerance must be positive");
    require(options.max_doublings >= 0, "max doublings must be nonnegative");
    std::size_t m = options.initial_cells;
    if (m == 0) {
        double r = std::numeric_limits<double>::infinity();
        for (const TubeFamily& f : families) r = std::min(r, f.radius());
        m = static_cast<std::size_t>(std::ceil(4.0 * cube.side() / r));
        m = std::max<std::size_t>(m + (m % 2), 4);
    }
    const auto fams = compile(families);
    OverlapValue out;
    out.cells_per_side = m;
    out.value = midpoint_rule(fams, cube, m, options.eval);
    out.converged = false;
    for (int k = 0; k < options.max_doublings; ++k) {
        m *= 2;
        const double next = midpoint_rule(fams, cube, m, options.eval);
        const double diff = std::abs(next - out.value);
        out.value = next;
        out.cells_per_side = m;
        out.error_estimate = diff;
        if (diff <= options.tol * std::abs(next)) {
            out.converged = true;
            break;
        }
    }
    return out;
}

double polygon_area(std::span<const std::array<double, 2>> poly) {
    double s = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const auto& p = poly[i];
        const auto& q = poly[(i + 1) % poly.size()];
        s += p[0] * q[1] - q[0] * p[1];
    }
    return 0.5 * std::abs(s);
}

double exact_overlap_2d(std::span<const TubeFamily> families, const Cube& cube) {
    require(cube.dim() == 2, "exact oracle is only available for n = 2");
    check_families(families, 2);
    for (const TubeFamily& f : families) require(!f.has_curves(), "exact oracle handles straight tubes only");
    const auto& lo = cube.min_corner();
    const double s = cube.side();
    const Polygon square{{lo[0], lo[1]}, {lo[0] + s, lo[1]}, {lo[0] + s, lo[1] + s}, {lo[0], lo[1] + s}};

    std::vector<Polygon> first;
    for (const Member& m : families[0].members())
        first.push_back(clip_strip(square, std::get<Line>(m.shape), families[0].radius()));

    double total = 0.0;
    for (std::size_t a = 0; a < first.size(); ++a) {
        if (first[a].size() < 3) continue;
        const double wa = families[0].members()[a].weight;
        for (const Member& mb : families[1].members()) {
            const Polygon both = clip_strip(first[a], std::get<Line>(mb.shape), families[1].radius());
            if (both.size() >= 3) total += wa * mb.weight * polygon_area(both);
        }
    }
    return total;
}

double average_integral(const OverlapValue& v, const Cube& cube) { return v.value / cube.volume(); }

}  // namespace kakeya
