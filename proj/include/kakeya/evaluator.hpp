#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <variant>
#include <vector>

#include "kakeya/geometry.hpp"

namespace kakeya {

/// Raised when a grid would exceed the configured cell budget.
struct BudgetExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Member {
    std::variant<Line, LipschitzCurve> shape;
    double weight = 1.0;

    bool is_curve() const { return std::holds_alternative<LipschitzCurve>(shape); }
    std::size_t dim() const;

    friend bool operator==(const Member&, const Member&) = default;
};

/// Weighted tubes (or curve neighbourhoods) of a common radius, all roughly
/// parallel to one coordinate axis. Indexing of axes is 0-based.
class TubeFamily {
  public:
    TubeFamily(std::size_t axis, double radius, std::vector<Member> members = {});

    std::size_t axis() const { return axis_; }
    double radius() const { return radius_; }
    const std::vector<Member>& members() const { return members_; }
    std::size_t size() const { return members_.size(); }
    bool empty() const { return members_.empty(); }

    void add(Member m);
    void add_line(Line line, double weight = 1.0) { add(Member{std::move(line), weight}); }

    double total_weight() const;
    bool has_curves() const;
    /// Largest member angle against the family axis (curve: steepest segment).
    double max_angle() const;
    /// Same members, different neighbourhood radius.
    TubeFamily with_radius(double radius) const;

    bool member_indicator(std::size_t i, std::span<const double> p) const;
    bool member_meets_box(std::size_t i, const AxisBox& box) const;
    /// Exact line/curve to box distance of member i.
    double member_box_distance(std::size_t i, const AxisBox& box) const;

    friend bool operator==(const TubeFamily&, const TubeFamily&) = default;

  private:
    void check_member(const Member& m) const;

    std::size_t axis_;
    double radius_;
    std::vector<Member> members_;
};

/// Checks one family per axis, in axis order, all in the same R^n; returns n.
std::size_t check_families(std::span<const TubeFamily> families, std::size_t n);

struct GridSpec {
    std::size_t cells_per_side = 1;
};

struct OverlapValue {
    double value = 0.0;
    /// |value(m) - value(m/2)| or the last refinement difference; empty when
    /// no comparison grid was available (odd m).
    std::optional<double> error_estimate;
    std::size_t cells_per_side = 0;
    bool converged = true;
};

struct EvalOptions {
    double cell_budget = 1e8;
    unsigned threads = 0;  // 0: default_thread_count()
};

struct RefineOptions {
    double tol = 1e-3;
    int max_doublings = 4;
    std::size_t initial_cells = 0;  // 0: about four cells per radius, even
    EvalOptions eval;
};

/// prod_j (sum_a w_{j,a} [p in member])^{1/(n-1)}.
double overlap_integrand(std::span<const TubeFamily> families, std::span<const double> p);

/// Midpoint rule on an m^n grid over the cube. Deterministic for any thread
/// count: cells are grouped in fixed blocks, each block summed in cell order,
/// and block sums combined by ordered_sum.
OverlapValue evaluate_overlap(std::span<const TubeFamily> families, const Cube& cube, GridSpec grid,
                              const EvalOptions& options = {});

/// Doubles m until successive values agree to relative `tol`.
OverlapValue evaluate_refined(std::span<const TubeFamily> families, const Cube& cube, const RefineOptions& options = {});

/// Exact value for n = 2 straight tubes: sum_{a,b} w_a w_b area(T_a cap T_b cap Q)
/// with each area obtained by clipping the square against both strips.
double exact_overlap_2d(std::span<const TubeFamily> families, const Cube& cube);

double average_integral(const OverlapValue& v, const Cube& cube);

/// Area of a simple polygon by the shoelace formula.
double polygon_area(std::span<const std::array<double, 2>> poly);

}  // namespace kakeya
