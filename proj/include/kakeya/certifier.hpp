#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "kakeya/evaluator.hpp"
#include "kakeya/geometry.hpp"

namespace kakeya {

/// Explicit constants of the one-scale step.
///
/// On a subcube Q every tube meeting Q at radius W is dominated by an
/// axis-parallel tube of radius 2W, whose projection along its axis is a
/// ball of volume omega_{n-1} (2W)^{n-1}. Loomis-Whitney then gives
///     int_Q prod_j f_{j,W}^{1/(n-1)} <= omega_{n-1}^{n/(n-1)} 2^n W^n prod_j N_j(Q)^{1/(n-1)},
/// i.e. c_lw W^n prod N_j(Q)^{1/(n-1)}. Each such tube fills Q at radius
/// W/delta, so prod N_j(Q)^{1/(n-1)} is at most the Q-average of
/// prod f_{j,W/delta}^{1/(n-1)}, and |Q| >= (W / (20 n delta))^n turns W^n/|Q|
/// into (20 n)^n delta^n. Hence c_step = c_lw (20 n)^n.
struct Constants {
    std::size_t n = 0;
    double c_lw = 0.0;
    double c_step = 0.0;
};

Constants make_constants(std::size_t n);

/// Largest delta accepted by the certifier. The fattening step needs
/// tan(delta) (1 + 1/(20 n delta)) <= 1 for Lipschitz graphs and the
/// identically-one step needs 1 + 1/(10 sqrt(n) delta) <= 1/delta; both hold
/// on (0, 1/2].
inline constexpr double kMaxDelta = 0.5;

struct SubcubeCount {
    Cube cube;
    std::vector<double> counts;  // weighted N_j(Q), one per axis
};

struct StepBound {
    double w = 0.0;
    double delta = 0.0;
    std::vector<SubcubeCount> subcubes;
    double numeric_bound = 0.0;  // sum_Q c_lw W^n prod_j N_j(Q)^{1/(n-1)}
};

struct LadderRung {
    std::size_t k = 0;
    double w = 0.0;
};

struct Certificate {
    std::size_t n = 0;
    double delta = 0.0;
    std::size_t m = 0;  // number of one-scale steps M
    std::vector<LadderRung> ladder;
    double c_lw = 0.0;
    double c_step = 0.0;
    double epsilon_exponent = 0.0;  // log c_step / log(1/delta)
    std::vector<double> counts_total;    // sum of weights per family
    std::vector<double> counts_in_cube;  // weight of members meeting the cube
    double cover_side = 0.0;
    std::size_t covering_multiplicity = 1;
    double final_bound = 0.0;
    /// Per-axis histogram {N_j(Q) -> number of subcubes} for the first step;
    /// only recorded when the subcube count stays under the audit budget.
    std::optional<std::vector<std::map<double, std::size_t>>> first_step_histograms;
    std::size_t first_step_subcubes = 0;
};

/// Members whose radius-w neighbourhood meets the cube.
std::size_t count_intersections(const TubeFamily& family, const Cube& cube, double w);
double weighted_count(const TubeFamily& family, const AxisBox& box, double w);

struct IdenticallyOne {
    bool holds = false;
    bool preconditions_met = false;
};

/// Whether the radius-W/delta tube covers all of the cube, by the exact
/// maximum over cube corners of the distance to the axis.
IdenticallyOne identically_one_check(const Tube& tube, const Cube& cube, double delta, double w);

/// Explicit single-step bound on int_cube prod_j f_{j,W}^{1/(n-1)}.
StepBound step_bound(std::span<const TubeFamily> families, const Cube& cube, double delta, unsigned threads = 0);

struct StepCheck {
    OverlapValue lhs;
    OverlapValue rhs;
    double ratio = 0.0;      // lhs / (c_step delta^n rhs)
    double tolerance = 0.0;  // combined relative quadrature error
    bool vacuous = false;    // rhs == 0
    bool converged = true;

    bool holds() const { return ratio <= 1.0 + tolerance; }
};

StepCheck verify_step_inequality(std::span<const TubeFamily> families, const Cube& cube, double delta,
                                 const RefineOptions& options);

struct CubeCover {
    std::vector<Cube> cubes;
    std::size_t multiplicity = 0;
};

/// ceil(S / delta^{-M})^n cubes of side delta^{-M} anchored at the cube's
/// minimum corner.
CubeCover cover_for_arbitrary_s(const Cube& cube, double delta, std::size_t m);

/// Smallest M >= 0 with delta^{-M} >= S.
std::size_t ladder_length(double side, double delta);

Certificate certify_multiscale(std::span<const TubeFamily> families, const Cube& cube, double delta,
                               unsigned threads = 0);

/// delta = exp(-log(c_step) / eps), so log c_step / log(1/delta) = eps.
double delta_for_epsilon(double eps, const Constants& consts);

/// Throws unless every member angle is <= delta.
void require_small_angles(std::span<const TubeFamily> families, double delta);

}  // namespace kakeya
