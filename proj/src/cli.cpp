#include "kakeya/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>

#include "kakeya/io.hpp"
#include "kakeya/parallel.hpp"

namespace kakeya {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw ValidationError(what);
}

struct Flags {
    std::string command;
    std::string config;
    std::string out;
    std::string csv;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> threads;
    std::optional<std::size_t> grid;
    std::optional<double> tol;
    std::optional<double> epsilon;
    std::optional<double> delta;
    bool check = false;
};

struct Context {
    Flags flags;
    Json config;
    unsigned threads = 1;
    std::ostream& out;
    std::ostream& err;
};

const Json& stanza(const Json& config, const char* key) {
    static const Json empty = Json::object();
    const auto it = config.find(key);
    if (it == config.end()) return empty;
    require(it->is_object(), std::string("'") + key + "' must be an object");
    return *it;
}

double opt_number(const Json& s, const char* key, double fallback) {
    const auto it = s.find(key);
    if (it == s.end()) return fallback;
    require(it->is_number() && std::isfinite(it->get<double>()), std::string("'") + key + "' must be a finite number");
    return it->get<double>();
}

std::size_t opt_size(const Json& s, const char* key, std::size_t fallback) {
    const auto it = s.find(key);
    if (it == s.end()) return fallback;
    require(it->is_number_integer() && it->get<long long>() >= 0,
            std::string("'") + key + "' must be a nonnegative integer");
    return it->get<std::size_t>();
}

bool opt_bool(const Json& s, const char* key, bool fallback) {
    const auto it = s.find(key);
    if (it == s.end()) return fallback;
    require(it->is_boolean(), std::string("'") + key + "' must be a boolean");
    return it->get<bool>();
}

void emit(Context& ctx, const std::string& text, const std::string& path) {
    if (path.empty()) {
        ctx.out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    require(f.good(), "cannot write '" + path + "'");
    f << text;
    require(f.good(), "failed writing '" + path + "'");
}

void emit(Context& ctx, const Json& j) { emit(ctx, dump(j), ctx.flags.out); }

RefineOptions refine_options(const Context& ctx) {
    const Json& s = stanza(ctx.config, "eval");
    RefineOptions r;
    r.tol = ctx.flags.tol.value_or(opt_number(s, "tol", r.tol));
    require(r.tol > 0.0, "tolerance must be positive");
    r.max_doublings = static_cast<int>(opt_size(s, "max_doublings", static_cast<std::size_t>(r.max_doublings)));
    r.initial_cells = opt_size(s, "initial_cells", 0);
    r.eval.cell_budget = opt_number(s, "cell_budget", r.eval.cell_budget);
    r.eval.threads = ctx.threads;
    return r;
}

std::optional<std::size_t> grid_option(const Context& ctx) {
    if (ctx.flags.grid) return ctx.flags.grid;
    const Json& s = stanza(ctx.config, "eval");
    if (s.contains("grid")) return opt_size(s, "grid", 0);
    return std::nullopt;
}

double delta_option(const Context& ctx, const char* stanza_name) {
    const Json& s = stanza(ctx.config, stanza_name);
    require(ctx.flags.delta || s.contains("delta"), "delta is required (--delta or config)");
    const double d = ctx.flags.delta ? *ctx.flags.delta : opt_number(s, "delta", 0.0);
    require(d > 0.0 && d < 1.0, "delta must lie in (0, 1)");
    return d;
}

Configuration load_configuration(const Context& ctx) { return configuration_from_json(ctx.config); }

GenSpec load_genspec(const Context& ctx) {
    require(ctx.config.contains("generator"), "config needs a 'generator' stanza");
    Json g = ctx.config["generator"];
    if (ctx.flags.seed) {
        require(g.is_object(), "generator stanza must be an object");
        g["seed"] = *ctx.flags.seed;
    }
    return genspec_from_json(g);
}

int finish_overlap(Context& ctx, const OverlapValue& v) {
    emit(ctx, to_json(v));
    if (!v.converged) {
        ctx.err << "warning: quadrature did not converge to the requested tolerance\n";
        return kExitNonConvergence;
    }
    return kExitOk;
}

int cmd_gen(Context& ctx) {
    const GenSpec spec = load_genspec(ctx);
    Configuration c;
    c.n = spec.n;
    c.families = generate(spec);
    c.cube = spec.cube;
    emit(ctx, to_json(c));
    return kExitOk;
}

int cmd_eval(Context& ctx) {
    const Configuration c = load_configuration(ctx);
    const RefineOptions r = refine_options(ctx);
    if (const auto g = grid_option(ctx)) {
        require(*g >= 1, "grid must be at least 1");
        return finish_overlap(ctx, evaluate_overlap(c.families, c.cube, GridSpec{*g}, r.eval));
    }
    return finish_overlap(ctx, evaluate_refined(c.families, c.cube, r));
}

int cmd_exact2d(Context& ctx) {
    const Configuration c = load_configuration(ctx);
    emit(ctx, Json{{"value", exact_overlap_2d(c.families, c.cube)}});
    return kExitOk;
}

int cmd_certify(Context& ctx) {
    const Configuration c = load_configuration(ctx);
    const double delta = delta_option(ctx, "certify");
    const Certificate cert = certify_multiscale(c.families, c.cube, delta, ctx.threads);
    Json j = to_json(cert);
    const bool check = ctx.flags.check || opt_bool(stanza(ctx.config, "certify"), "check", false);
    if (!check) {
        emit(ctx, j);
        return kExitOk;
    }
    const OverlapValue v = c.n == 2 && std::none_of(c.families.begin(), c.families.end(),
                                                    [](const TubeFamily& f) { return f.has_curves(); })
                               ? OverlapValue{exact_overlap_2d(c.families, c.cube), 0.0, 0, true}
                               : evaluate_refined(c.families, c.cube, refine_options(ctx));
    const bool sound = v.value <= cert.final_bound;
    j["check"] = {{"integral", to_json(v)}, {"sound", sound}};
    emit(ctx, j);
    if (!sound) {
        ctx.err << "violation: integral exceeds the certified bound\n";
        return kExitViolation;
    }
    return v.converged ? kExitOk : kExitNonConvergence;
}

int cmd_verify_lw(Context& ctx) {
    const Json& s = stanza(ctx.config, "lw");
    require(s.contains("functions") && s["functions"].is_array(), "'lw.functions' must be an array");
    std::vector<ProjectionFunction> fs;
    for (const Json& f : s["functions"]) fs.push_back(projection_from_json(f));
    require(s.contains("box"), "'lw.box' is required");
    const AxisBox box = box_from_json(s["box"]);
    const std::size_t grid = ctx.flags.grid.value_or(opt_size(s, "grid", 64));
    require(grid >= 1, "grid must be at least 1");
    const LwCheck r = verify_lw(fs, box, GridSpec{grid}, ctx.threads);
    emit(ctx, to_json(r));
    if (!r.holds()) {
        ctx.err << "violation: Loomis-Whitney ratio exceeds its tolerance\n";
        return kExitViolation;
    }
    return kExitOk;
}

int cmd_verify_step(Context& ctx) {
    const Configuration c = load_configuration(ctx);
    const double delta = delta_option(ctx, "step");
    const StepCheck r = verify_step_inequality(c.families, c.cube, delta, refine_options(ctx));
    emit(ctx, to_json(r));
    if (!r.holds()) {
        ctx.err << "violation: step inequality ratio exceeds its tolerance\n";
        return kExitViolation;
    }
    return r.converged ? kExitOk : kExitNonConvergence;
}

int cmd_reduce(Context& ctx) {
    const Configuration c = load_configuration(ctx);
    const Json& s = stanza(ctx.config, "reduce");
    const double eps = ctx.flags.epsilon.value_or(opt_number(s, "epsilon", 0.0));
    require(eps > 0.0, "epsilon is required and must be positive (--epsilon or config)");
    const std::string mode = s.contains("mode") && s["mode"].is_string() ? s["mode"].get<std::string>() : "general";
    Reduction red;
    if (mode == "general") {
        red = reduce_general_to_small_angle(c.families, c.cube, eps, ctx.threads);
    } else if (mode == "transversal") {
        require(s.contains("direction_caps") && s["direction_caps"].is_array(),
                "transversal mode needs 'direction_caps'");
        std::vector<Cap> caps;
        for (const Json& cap : s["direction_caps"]) {
            require(cap.is_object() && cap.contains("center") && cap["center"].is_array(),
                    "direction cap needs 'center'");
            std::vector<double> centre;
            for (const Json& x : cap["center"]) {
                require(x.is_number(), "cap centre must be numeric");
                centre.push_back(x.get<double>());
            }
            caps.emplace_back(Direction::normalized(std::move(centre)), opt_number(cap, "radius", 0.0));
        }
        red = transversal_reduce(c.families, c.cube, caps, opt_number(s, "nu", 0.0), eps, ctx.threads);
    } else {
        throw ValidationError("unknown reduce mode '" + mode + "'");
    }
    Json j = to_json(red);
    if (opt_bool(s, "certify", false)) {
        std::vector<double> terms;
        for (const ReducedProblem& p : red.problems)
            terms.push_back(p.distortion_factor *
                            certify_multiscale(p.families, p.cube, red.delta, ctx.threads).final_bound);
        j["certified_total"] = ordered_sum(terms);
    }
    emit(ctx, j);
    return kExitOk;
}

std::vector<double> number_list(const Json& s, const char* key) {
    require(s.contains(key) && s[key].is_array(), std::string("'") + key + "' must be an array");
    std::vector<double> out;
    for (const Json& x : s[key]) {
        require(x.is_number(), std::string("'") + key + "' entries must be numbers");
        out.push_back(x.get<double>());
    }
    return out;
}

int cmd_sweep(Context& ctx) {
    const GenSpec spec = load_genspec(ctx);
    const Json& s = stanza(ctx.config, "sweep");
    SweepOptions opt;
    opt.fixed_tubes = opt_bool(s, "fixed_tubes", false);
    opt.refine = refine_options(ctx);
    opt.threads = ctx.threads;
    const SweepResult r = sweep_scale(spec, number_list(s, "s_values"), delta_option(ctx, "sweep"), opt);
    emit(ctx, to_json(r));
    if (!ctx.flags.csv.empty()) emit(ctx, sweep_csv(r), ctx.flags.csv);
    if (std::any_of(r.rows.begin(), r.rows.end(), [](const SweepRow& row) { return !row.sound; })) {
        ctx.err << "violation: a sweep row exceeds its certified bound\n";
        return kExitViolation;
    }
    return kExitOk;
}

int cmd_search(Context& ctx) {
    const GenSpec spec = load_genspec(ctx);
    const Json& s = stanza(ctx.config, "search");
    SearchOptions opt;
    opt.budget = opt_size(s, "budget", opt.budget);
    opt.restarts = opt_size(s, "restarts", opt.restarts);
    opt.step = opt_number(s, "step", opt.step);
    opt.anneal = opt_bool(s, "anneal", opt.anneal);
    opt.temperature = opt_number(s, "temperature", opt.temperature);
    opt.cooling = opt_number(s, "cooling", opt.cooling);
    opt.grid = ctx.flags.grid.value_or(opt_size(s, "grid", opt.grid));
    opt.threads = ctx.threads;
    const SearchResult r = extremal_search(spec, opt);
    emit(ctx, to_json(r));
    if (!ctx.flags.csv.empty()) emit(ctx, trace_csv(r), ctx.flags.csv);
    return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    const std::vector<std::string> commands = {"gen",         "eval",   "exact2d", "certify", "verify-lw",
                                               "verify-step", "reduce", "sweep",   "search"};
    CLI::App app{"Multilinear Kakeya overlap evaluation and certification"};
    Flags flags;
    app.add_option("command", flags.command, "gen | eval | exact2d | certify | verify-lw | verify-step | reduce | sweep | search")
        ->required()
        ->check(CLI::IsMember(commands));
    app.add_option("--config", flags.config, "JSON configuration file")->required();
    app.add_option("--out", flags.out, "output path (default stdout)");
    app.add_option("--csv", flags.csv, "CSV output path for sweep and search");
    app.add_option("--seed", flags.seed, "generator seed override");
    app.add_option("--threads", flags.threads, "worker count (default KAKEYA_THREADS or hardware)")
        ->check(CLI::PositiveNumber);
    app.add_option("--grid", flags.grid, "cells per side for a fixed grid")->check(CLI::PositiveNumber);
    app.add_option("--tol", flags.tol, "relative refinement tolerance")->check(CLI::PositiveNumber);
    app.add_option("--epsilon", flags.epsilon, "target exponent epsilon")->check(CLI::PositiveNumber);
    app.add_option("--delta", flags.delta, "scale ratio delta in (0, 1)");
    app.add_flag("--check", flags.check, "certify: also evaluate and fail on a violated bound");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitValidation;
    }

    try {
        Context ctx{flags, Json(), flags.threads.value_or(default_thread_count()), out, err};
        ctx.config = parse_json(read_file(flags.config), flags.config);
        require(ctx.config.is_object(), "configuration must be a JSON object");
        const std::string& c = flags.command;
        if (c == "gen") return cmd_gen(ctx);
        if (c == "eval") return cmd_eval(ctx);
        if (c == "exact2d") return cmd_exact2d(ctx);
        if (c == "certify") return cmd_certify(ctx);
        if (c == "verify-lw") return cmd_verify_lw(ctx);
        if (c == "verify-step") return cmd_verify_step(ctx);
        if (c == "reduce") return cmd_reduce(ctx);
        if (c == "sweep") return cmd_sweep(ctx);
        return cmd_search(ctx);
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const BudgetExceeded& e) {
        err << "error: " << e.what() << "\n";
        return kExitNonConvergence;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitValidation;
    }
}

}  // namespace kakeya
