#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kakeya/certifier.hpp"
#include "kakeya/evaluator.hpp"
#include "kakeya/generators.hpp"

namespace kakeya {

struct SweepRow {
    double s = 0.0;
    OverlapValue integral;
    double bound = 0.0;          // certificate final_bound
    double count_product = 0.0;  // prod_j N_j^{1/(n-1)}, N_j counted inside the cube
    double ratio = 0.0;          // integral / count_product (0 if the product vanishes)
    bool sound = true;           // integral <= bound
};

struct SweepOptions {
    /// Generate once on the largest cube and reuse the same tubes for every S,
    /// instead of regenerating (same seed) on each cube.
    bool fixed_tubes = false;
    RefineOptions refine;
    unsigned threads = 0;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    /// Least-squares slope of log(ratio) against log(S) over converged rows
    /// with positive ratio; empty when fewer than two such rows remain.
    std::optional<double> slope;
};

/// For each S the template's cube becomes [min_corner, min_corner + S]^n.
SweepResult sweep_scale(const GenSpec& tmpl, const std::vector<double>& s_values, double delta,
                        const SweepOptions& options = {});

struct SearchOptions {
    std::size_t budget = 100;   // total evaluations over all restarts
    std::size_t restarts = 4;   // budget split evenly, remainder to the first restarts
    double step = 0.1;          // anchor moves ~ step * side, direction moves ~ step * angle
    bool anneal = false;
    double temperature = 0.05;  // initial temperature, decays geometrically
    double cooling = 0.95;
    std::size_t grid = 32;      // fixed quadrature grid per evaluation
    unsigned threads = 0;
};

struct TraceEntry {
    std::size_t restart = 0;
    std::size_t iteration = 0;
    double proposed = 0.0;
    bool accepted = false;
    double current = 0.0;
    double best = 0.0;  // best so far over the merged trace
};

/// State of one restart after its last iteration.
struct SearchState {
    std::vector<TubeFamily> families;
    double ratio = 0.0;
    std::vector<TubeFamily> best_families;
    double best_ratio = 0.0;
    std::size_t iterations = 0;
    double temperature = 0.0;
};

struct SearchResult {
    std::vector<TubeFamily> best;
    double best_ratio = 0.0;
    std::size_t best_restart = 0;
    std::vector<TraceEntry> trace;  // ordered by restart, then iteration
};

/// Overlap divided by prod_j N_j^{1/(n-1)} on a fixed grid.
double overlap_ratio(std::span<const TubeFamily> families, const Cube& cube, std::size_t grid, unsigned threads = 1);

/// Multi-start perturbation search over the generator's regime. Restart r starts
/// from generate(spec) with a seed derived from (spec.seed, r). Each step
/// moves one member: anchor by a Gaussian kick clamped to the cube and
/// direction by a Gaussian kick renormalized, resampled in the cap if it
/// leaves the regime angle. Greedy acceptance takes strict improvements;
/// with `anneal` worse states pass with probability exp(diff / T).
SearchResult extremal_search(const GenSpec& spec, const SearchOptions& options);

/// Fixed-column CSV; numbers use round-trip formatting independent of locale.
std::string sweep_csv(const SweepResult& r);
std::string trace_csv(const SearchResult& r);

}  // namespace kakeya
