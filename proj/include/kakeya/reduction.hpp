#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "kakeya/evaluator.hpp"
#include "kakeya/geometry.hpp"

namespace kakeya {

/// One cap tuple (beta_1, ..., beta_n) after the change of coordinates
/// z = L x / |L|, where L maps the cap centres to the basis vectors.
///
/// A W-tube around a line maps under L into the (|L| W)-tube around the
/// image line; dividing by |L| = max stretch brings the radius back to W.
/// The original integral over the cube is therefore at most
/// distortion_factor times the transformed integral over `cube`, with
/// distortion_factor = |L|^n / |det L| >= 1.
struct ReducedProblem {
    std::vector<std::size_t> cap_indices;
    std::vector<Direction> cap_centers;
    LinearMap map;
    double rescale = 1.0;
    std::vector<TubeFamily> families;
    Cube cube;
    double distortion_factor = 1.0;
    double max_angle = 0.0;
};

struct Reduction {
    double delta = 0.0;
    double cap_radius = 0.0;
    std::vector<std::size_t> caps_per_axis;
    std::vector<ReducedProblem> problems;
};

/// Assigns each member to the first cap containing its direction.
std::vector<TubeFamily> split_by_caps(const TubeFamily& family, std::span<const Cap> caps);

/// Small-angle reduction for families within 1/(10n) of their axes, with
/// delta = delta_for_epsilon(eps) and caps of radius delta/10.
Reduction reduce_general_to_small_angle(std::span<const TubeFamily> families, const Cube& cube, double eps,
                                        unsigned threads = 0);

/// Reduction for direction sets S_j (given as caps) whose wedge is at least
/// nu. Caps start at radius min(nu/(100n), delta/10) and are halved until
/// every transformed angle is at most delta.
Reduction transversal_reduce(std::span<const TubeFamily> families, const Cube& cube, std::span<const Cap> direction_sets,
                             double nu, double eps, unsigned threads = 0);

/// (2 n^{(n-1)/2} / nu)^n. With unit columns |A| <= sqrt(n) and
/// |det A| >= nu/2, so |A^{-1}| <= n^{(n-1)/2} / |det A| and the factor
/// |A^{-1}|^n |det A| is bounded by this.
double transversal_distortion_ceiling(std::size_t n, double nu);

/// Each member of integer weight w replaced by w unit-weight copies.
std::vector<TubeFamily> expand_integer_weights(std::span<const TubeFamily> families);

/// Weighted and multiplicity-expanded families evaluate bit-identically.
bool weighted_multiplicity_check(std::span<const TubeFamily> families, const Cube& cube, GridSpec grid,
                                 const EvalOptions& options = {});

/// Weights p/q: scales by q, expands, and returns the relative difference
/// between value(expanded) and q^{n/(n-1)} value(weighted).
double rational_multiplicity_gap(std::span<const TubeFamily> families, std::size_t denominator, const Cube& cube,
                                 GridSpec grid, const EvalOptions& options = {});

}  // namespace kakeya
