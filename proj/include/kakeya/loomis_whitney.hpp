#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "kakeya/evaluator.hpp"
#include "kakeya/geometry.hpp"

namespace kakeya {

/// Nonnegative piecewise-constant function on a regular grid over a box in
/// R^{n-1}. Values are stored with the first coordinate varying fastest;
/// lookups use the cell containing the point (the last cell is closed).
class ProjectionFunction {
  public:
    ProjectionFunction(AxisBox box, std::vector<std::size_t> shape, std::vector<double> values);

    /// Indicator of `inner` sampled on a shape^d grid over `box`; `inner`
    /// must be a union of grid cells for the result to be exact.
    static ProjectionFunction indicator(const AxisBox& box, std::vector<std::size_t> shape, const AxisBox& inner);

    std::size_t dim() const { return box_.dim(); }
    const AxisBox& box() const { return box_; }
    const std::vector<std::size_t>& shape() const { return shape_; }
    const std::vector<double>& values() const { return values_; }
    double cell_volume() const;

    /// Throws if y lies outside the box.
    double value_at(std::span<const double> y) const;
    double l1_norm() const;
    ProjectionFunction scaled(double lambda) const;

  private:
    AxisBox box_;
    std::vector<std::size_t> shape_;
    std::vector<double> values_;
};

struct BallSum {
    std::vector<Point> centers;
    std::vector<double> weights;
    double radius = 1.0;
};

/// Drops coordinate j (0-based). Requires p.size() >= 2.
Point project(std::span<const double> p, std::size_t j);

/// Midpoint-rule value of int_box prod_j f_j(pi_j x)^{1/(n-1)}.
double lw_left(std::span<const ProjectionFunction> fs, const AxisBox& box, GridSpec grid, unsigned threads = 0);

/// prod_j ||f_j||_1^{1/(n-1)}.
double lw_right(std::span<const ProjectionFunction> fs);

struct LwCheck {
    double left = 0.0;
    double right = 0.0;
    double ratio = 0.0;        // left / right, 0 for vacuous instances
    double error_estimate = 0.0;  // relative to `right`
    bool vacuous = false;      // right == 0

    bool holds() const { return ratio <= 1.0 + 3.0 * error_estimate; }
};

/// Both sides by quadrature. The error estimate is
/// (|left(m) - left(m/2)| + 64 eps left) / right, the second term bounding
/// accumulated rounding so exact equality cases are not misreported.
LwCheck verify_lw(std::span<const ProjectionFunction> fs, const AxisBox& box, GridSpec grid, unsigned threads = 0);

/// Volume of the unit ball in R^d.
double unit_ball_volume(std::size_t d);

/// omega_d r^d sum_a w_a.
double ball_sum_l1(const BallSum& b, std::size_t d);

}  // namespace kakeya
