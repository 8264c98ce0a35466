#include "kakeya/io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace kakeya {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw ValidationError(what);
}

const Json& field(const Json& j, const char* key) {
    require(j.is_object(), std::string("expected an object holding '") + key + "'");
    const auto it = j.find(key);
    require(it != j.end(), std::string("missing field '") + key + "'");
    return *it;
}

double as_double(const Json& j, const char* what) {
    require(j.is_number(), std::string("'") + what + "' must be a number");
    const double x = j.get<double>();
    require(std::isfinite(x), std::string("'") + what + "' must be finite");
    return x;
}

std::size_t as_size(const Json& j, const char* what) {
    require(j.is_number_integer() && j.get<long long>() >= 0, std::string("'") + what + "' must be a nonnegative integer");
    return j.get<std::size_t>();
}

std::vector<double> as_doubles(const Json& j, const char* what) {
    require(j.is_array(), std::string("'") + what + "' must be an array");
    std::vector<double> out;
    out.reserve(j.size());
    for (const Json& x : j) out.push_back(as_double(x, what));
    return out;
}

double number_or(const Json& j, const char* key, double fallback) {
    const auto it = j.find(key);
    return it == j.end() ? fallback : as_double(*it, key);
}

Json optional_number(const std::optional<double>& x) { return x ? Json(*x) : Json(nullptr); }

Json to_json(const Member& m) {
    Json out;
    if (const auto* line = std::get_if<Line>(&m.shape)) {
        out["anchor"] = line->anchor();
        out["dir"] = std::vector<double>(line->dir().components().begin(), line->dir().components().end());
    } else {
        const auto& c = std::get<LipschitzCurve>(m.shape);
        out["polyline"] = {{"breakpoints", c.breakpoints()}, {"values", c.values()}, {"lip", c.lip()}};
    }
    out["weight"] = m.weight;
    return out;
}

Member member_from_json(const Json& j, std::size_t axis, std::size_t n) {
    require(j.is_object(), "member must be an object");
    const double weight = number_or(j, "weight", 1.0);
    const bool has_line = j.contains("anchor") || j.contains("dir");
    const bool has_curve = j.contains("polyline");
    require(has_line != has_curve, "member needs either anchor+dir or polyline");
    if (has_line) {
        Point anchor = as_doubles(field(j, "anchor"), "anchor");
        require(anchor.size() == n, "anchor dimension does not match n");
        std::vector<double> dir = as_doubles(field(j, "dir"), "dir");
        require(dir.size() == n, "dir dimension does not match n");
        // Unit vectors are kept verbatim so that written configurations
        // parse back bit-identically; anything else is normalized.
        double len2 = 0.0;
        for (const double x : dir) len2 += x * x;
        Direction d = std::abs(std::sqrt(len2) - 1.0) <= 1e-12 ? Direction(std::move(dir))
                                                                 : Direction::normalized(std::move(dir));
        return Member{Line(std::move(anchor), std::move(d)), weight};
    }
    const Json& p = field(j, "polyline");
    std::vector<double> ts = as_doubles(field(p, "breakpoints"), "breakpoints");
    const Json& vs = field(p, "values");
    require(vs.is_array(), "'values' must be an array");
    std::vector<Point> values;
    for (const Json& v : vs) {
        values.push_back(as_doubles(v, "values"));
        require(values.back().size() + 1 == n, "polyline values must have n-1 coordinates");
    }
    return Member{LipschitzCurve(axis, std::move(ts), std::move(values), as_double(field(p, "lip"), "lip")), weight};
}

const char* regime_name(Regime r) {
    switch (r) {
        case Regime::axis_parallel: return "axis_parallel";
        case Regime::small_angle: return "small_angle";
        case Regime::general: return "general";
        case Regime::lipschitz: return "lipschitz";
        case Regime::weighted: return "weighted";
    }
    return "";
}

Regime regime_from_name(const std::string& s) {
    for (Regime r : {Regime::axis_parallel, Regime::small_angle, Regime::general, Regime::lipschitz, Regime::weighted})
        if (s == regime_name(r)) return r;
    throw ValidationError("unknown regime '" + s + "'");
}

Json families_json(std::span<const TubeFamily> families) {
    Json fams = Json::array();
    for (const TubeFamily& f : families) {
        Json members = Json::array();
        for (const Member& m : f.members()) members.push_back(to_json(m));
        fams.push_back({{"axis", f.axis()}, {"radius", f.radius()}, {"members", std::move(members)}});
    }
    return fams;
}

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t offset) {
    offset = std::min(offset, text.size());
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < offset; ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

}  // namespace

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    return std::string(buf.data(), res.ptr);
}

Json parse_json(std::string_view text, std::string_view source) {
    try {
        return Json::parse(text.begin(), text.end());
    } catch (const nlohmann::json::parse_error& e) {
        // byte is 1-based and points one past the offending character.
        const std::size_t offset = e.byte == 0 ? 0 : e.byte - 1;
        const auto [line, col] = line_column(text, offset);
        std::string msg = std::string(source) + ": malformed JSON at line " + std::to_string(line) + ", column " +
                          std::to_string(col);
        throw ValidationError(msg);
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    require(in.good(), "cannot open '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

Json to_json(const Cube& c) { return {{"min_corner", c.min_corner()}, {"side", c.side()}}; }

Cube cube_from_json(const Json& j, std::size_t n) {
    Point corner = as_doubles(field(j, "min_corner"), "min_corner");
    require(corner.size() == n, "cube dimension does not match n");
    return Cube(std::move(corner), as_double(field(j, "side"), "side"));
}

Json to_json(const Configuration& c) {
    return {{"schema_version", kSchemaVersion}, {"n", c.n}, {"families", families_json(c.families)},
            {"cube", to_json(c.cube)}};
}

Configuration configuration_from_json(const Json& j) {
    require(j.is_object(), "configuration must be a JSON object");
    if (j.contains("schema_version"))
        require(j["schema_version"] == kSchemaVersion, "unsupported schema_version");
    Configuration c;
    c.n = as_size(field(j, "n"), "n");
    require(c.n >= 2, "n must be at least 2");
    const Json& fams = field(j, "families");
    require(fams.is_array() && fams.size() == c.n, "need exactly n families");
    for (const Json& f : fams) {
        const std::size_t axis = as_size(field(f, "axis"), "axis");
        require(axis < c.n, "family axis out of range");
        TubeFamily fam(axis, as_double(field(f, "radius"), "radius"));
        const Json& members = field(f, "members");
        require(members.is_array(), "'members' must be an array");
        for (const Json& m : members) fam.add(member_from_json(m, axis, c.n));
        c.families.push_back(std::move(fam));
    }
    c.cube = cube_from_json(field(j, "cube"), c.n);
    check_families(c.families, c.n);
    return c;
}

Json to_json(const GenSpec& s) {
    return {{"n", s.n},
            {"counts", s.counts},
            {"regime", regime_name(s.regime)},
            {"angle", s.angle},
            {"breakpoints", s.breakpoints},
            {"weight_min", s.weight_min},
            {"weight_max", s.weight_max},
            {"integer_weights", s.integer_weights},
            {"cube", to_json(s.cube)},
            {"radius", s.radius},
            {"seed", s.seed}};
}

GenSpec genspec_from_json(const Json& j) {
    require(j.is_object(), "generator stanza must be an object");
    GenSpec s;
    s.n = as_size(field(j, "n"), "n");
    require(s.n >= 2, "n must be at least 2");
    const Json& counts = field(j, "counts");
    require(counts.is_array(), "'counts' must be an array");
    s.counts.clear();
    for (const Json& c : counts) s.counts.push_back(as_size(c, "counts"));
    if (j.contains("regime")) {
        require(j["regime"].is_string(), "'regime' must be a string");
        s.regime = regime_from_name(j["regime"].get<std::string>());
    }
    s.angle = number_or(j, "angle", s.angle);
    if (j.contains("breakpoints")) s.breakpoints = as_size(j["breakpoints"], "breakpoints");
    s.weight_min = number_or(j, "weight_min", s.weight_min);
    s.weight_max = number_or(j, "weight_max", s.weight_max);
    if (j.contains("integer_weights")) {
        require(j["integer_weights"].is_boolean(), "'integer_weights' must be a boolean");
        s.integer_weights = j["integer_weights"].get<bool>();
    }
    s.cube = j.contains("cube") ? cube_from_json(j["cube"], s.n) : Cube(Point(s.n, 0.0), 10.0);
    s.radius = number_or(j, "radius", s.radius);
    if (j.contains("seed")) {
        require(j["seed"].is_number_unsigned() || j["seed"].is_number_integer(), "'seed' must be an integer");
        s.seed = j["seed"].get<std::uint64_t>();
    }
    validate(s);
    return s;
}

AxisBox box_from_json(const Json& j) {
    AxisBox b{as_doubles(field(j, "lo"), "lo"), as_doubles(field(j, "hi"), "hi")};
    require(b.lo.size() == b.hi.size() && !b.lo.empty(), "box corners must have equal nonzero dimension");
    for (std::size_t d = 0; d < b.lo.size(); ++d) require(b.lo[d] < b.hi[d], "box must have positive extent");
    return b;
}

ProjectionFunction projection_from_json(const Json& j) {
    AxisBox box = box_from_json(field(j, "box"));
    const Json& shape = field(j, "shape");
    require(shape.is_array(), "'shape' must be an array");
    std::vector<std::size_t> dims;
    for (const Json& s : shape) dims.push_back(as_size(s, "shape"));
    return ProjectionFunction(std::move(box), std::move(dims), as_doubles(field(j, "values"), "values"));
}

Json to_json(const OverlapValue& v) {
    return {{"value", v.value},
            {"error_estimate", optional_number(v.error_estimate)},
            {"cells_per_side", v.cells_per_side},
            {"converged", v.converged}};
}

Json to_json(const Certificate& c) {
    Json ladder = Json::array();
    for (const LadderRung& r : c.ladder) ladder.push_back({{"k", r.k}, {"w", r.w}});
    Json out = {{"n", c.n},
                {"delta", c.delta},
                {"m", c.m},
                {"ladder", std::move(ladder)},
                {"c_lw", c.c_lw},
                {"c_step", c.c_step},
                {"epsilon_exponent", c.epsilon_exponent},
                {"counts_total", c.counts_total},
                {"counts_in_cube", c.counts_in_cube},
                {"cover_side", c.cover_side},
                {"covering_multiplicity", c.covering_multiplicity},
                {"final_bound", c.final_bound},
                {"first_step_subcubes", c.first_step_subcubes}};
    if (c.first_step_histograms) {
        Json hs = Json::array();
        for (const auto& h : *c.first_step_histograms) {
            Json pairs = Json::array();
            for (const auto& [count, cubes] : h) pairs.push_back({count, cubes});
            hs.push_back(std::move(pairs));
        }
        out["first_step_histograms"] = std::move(hs);
    } else {
        out["first_step_histograms"] = nullptr;
    }
    return out;
}

Json to_json(const StepCheck& s) {
    return {{"lhs", to_json(s.lhs)},   {"rhs", to_json(s.rhs)},         {"ratio", s.ratio},
            {"tolerance", s.tolerance}, {"vacuous", s.vacuous},         {"converged", s.converged},
            {"holds", s.holds()}};
}

Json to_json(const LwCheck& c) {
    return {{"left", c.left},
            {"right", c.right},
            {"ratio", c.ratio},
            {"error_estimate", c.error_estimate},
            {"vacuous", c.vacuous},
            {"holds", c.holds()}};
}

Json to_json(const ReducedProblem& p) {
    Json centres = Json::array();
    for (const Direction& d : p.cap_centers)
        centres.push_back(std::vector<double>(d.components().begin(), d.components().end()));
    Json matrix = Json::array();
    const auto& m = p.map.matrix();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        matrix.push_back(std::move(row));
    }
    return {{"cap_indices", p.cap_indices},
            {"cap_centers", std::move(centres)},
            {"map", std::move(matrix)},
            {"rescale", p.rescale},
            {"families", families_json(p.families)},
            {"cube", to_json(p.cube)},
            {"distortion_factor", p.distortion_factor},
            {"max_angle", p.max_angle}};
}

Json to_json(const Reduction& r) {
    Json problems = Json::array();
    for (const ReducedProblem& p : r.problems) problems.push_back(to_json(p));
    return {{"delta", r.delta},
            {"cap_radius", r.cap_radius},
            {"caps_per_axis", r.caps_per_axis},
            {"problems", std::move(problems)}};
}

Json to_json(const SweepResult& r) {
    Json rows = Json::array();
    for (const SweepRow& row : r.rows)
        rows.push_back({{"S", row.s},
                        {"integral", to_json(row.integral)},
                        {"bound", row.bound},
                        {"count_product", row.count_product},
                        {"ratio", row.ratio},
                        {"sound", row.sound}});
    return {{"rows", std::move(rows)}, {"slope", optional_number(r.slope)}};
}

Json to_json(const SearchResult& r) {
    Json trace = Json::array();
    for (const TraceEntry& e : r.trace)
        trace.push_back({{"restart", e.restart},
                         {"iteration", e.iteration},
                         {"proposed", e.proposed},
                         {"accepted", e.accepted},
                         {"current", e.current},
                         {"best", e.best}});
    return {{"best_ratio", r.best_ratio},
            {"best_restart", r.best_restart},
            {"best_families", families_json(r.best)},
            {"trace", std::move(trace)}};
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace kakeya
