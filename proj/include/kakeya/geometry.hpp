#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace kakeya {

struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

using Point = std::vector<double>;

/// Unit vector in R^n. Construction fails unless |v| = 1 within 1e-12.
class Direction {
  public:
    explicit Direction(std::vector<double> components);

    /// Scales `v` to unit length; rejects the zero vector.
    static Direction normalized(std::vector<double> v);
    /// Standard basis vector e_j.
    static Direction axis(std::size_t n, std::size_t j);

    std::size_t dim() const { return c_.size(); }
    double operator[](std::size_t i) const { return c_[i]; }
    std::span<const double> components() const { return c_; }
    Direction flipped() const;

    friend bool operator==(const Direction&, const Direction&) = default;

  private:
    std::vector<double> c_;
};

class Line {
  public:
    Line(Point anchor, Direction dir);

    std::size_t dim() const { return anchor_.size(); }
    const Point& anchor() const { return anchor_; }
    const Direction& dir() const { return dir_; }
    Point at(double t) const;

    friend bool operator==(const Line&, const Line&) = default;

  private:
    Point anchor_;
    Direction dir_;
};

/// Closed radius-neighborhood of a line.
class Tube {
  public:
    Tube(Line line, double radius);

    const Line& line() const { return line_; }
    double radius() const { return radius_; }
    std::size_t dim() const { return line_.dim(); }

    friend bool operator==(const Tube&, const Tube&) = default;

  private:
    Line line_;
    double radius_;
};

/// Graph {x : x_{!=axis} = g(x_axis)} of a piecewise-linear g through the
/// samples (breakpoints[i], values[i]). The declared Lipschitz constant is
/// checked segment by segment on construction.
class LipschitzCurve {
  public:
    LipschitzCurve(std::size_t axis, std::vector<double> breakpoints, std::vector<Point> values, double lip);

    /// Affine graph matching `line` on [t0, t1] of the axis coordinate.
    static LipschitzCurve from_line(const Line& line, std::size_t axis, double t0, double t1);

    std::size_t axis() const { return axis_; }
    std::size_t dim() const { return values_.front().size() + 1; }
    const std::vector<double>& breakpoints() const { return breakpoints_; }
    const std::vector<Point>& values() const { return values_; }
    double lip() const { return lip_; }

    /// Polyline vertices embedded in R^n.
    const std::vector<Point>& vertices() const { return vertices_; }
    std::size_t segment_count() const { return vertices_.size() - 1; }
    double max_slope() const;
    /// Piecewise-linear interpolation of g; `t` is clamped to the span.
    Point value_at(double t) const;
    double span_begin() const { return breakpoints_.front(); }
    double span_end() const { return breakpoints_.back(); }

    friend bool operator==(const LipschitzCurve& a, const LipschitzCurve& b) {
        return a.axis_ == b.axis_ && a.breakpoints_ == b.breakpoints_ && a.values_ == b.values_ && a.lip_ == b.lip_;
    }

  private:
    std::size_t axis_;
    std::vector<double> breakpoints_;
    std::vector<Point> values_;
    double lip_;
    std::vector<Point> vertices_;
};

struct AxisBox {
    Point lo;
    Point hi;

    std::size_t dim() const { return lo.size(); }
    bool contains(std::span<const double> p, double slack = 0.0) const;
};

class Cube {
  public:
    Cube(Point min_corner, double side);

    std::size_t dim() const { return min_corner_.size(); }
    const Point& min_corner() const { return min_corner_; }
    double side() const { return side_; }
    Point center() const;
    AxisBox box() const;
    double volume() const;

    friend bool operator==(const Cube&, const Cube&) = default;

  private:
    Point min_corner_;
    double side_;
};

/// Set of unoriented directions within `ang_radius` of `center`.
class Cap {
  public:
    Cap(Direction center, double ang_radius);

    const Direction& center() const { return center_; }
    double ang_radius() const { return ang_radius_; }
    bool contains(const Direction& d, double slack = 1e-12) const;

  private:
    Direction center_;
    double ang_radius_;
};

/// Invertible linear map with its singular-value extremes and |det|.
class LinearMap {
  public:
    explicit LinearMap(Eigen::MatrixXd matrix);

    const Eigen::MatrixXd& matrix() const { return matrix_; }
    std::size_t dim() const { return static_cast<std::size_t>(matrix_.rows()); }
    double min_stretch() const { return min_sv_; }
    double max_stretch() const { return max_sv_; }
    double volume_distortion() const { return abs_det_; }

    Point apply(std::span<const double> p) const;
    LinearMap inverse() const;

  private:
    Eigen::MatrixXd matrix_;
    double min_sv_ = 0.0;
    double max_sv_ = 0.0;
    double abs_det_ = 0.0;
};

// Distances. All exact up to floating-point rounding.
double point_line_distance(std::span<const double> anchor, std::span<const double> dir, std::span<const double> p);
double point_segment_distance(std::span<const double> a, std::span<const double> b, std::span<const double> p);
double line_box_distance(std::span<const double> anchor, std::span<const double> dir, const AxisBox& box);
double segment_box_distance(std::span<const double> a, std::span<const double> b, const AxisBox& box);
double curve_distance(const LipschitzCurve& curve, std::span<const double> p);
double curve_box_distance(const LipschitzCurve& curve, const AxisBox& box);

bool tube_indicator(const Tube& tube, std::span<const double> p);

/// Throws if p's axis coordinate lies outside the curve span widened by radius.
bool curve_indicator(const LipschitzCurve& curve, double radius, std::span<const double> p);

/// Angle in [0, pi/2] between the unoriented line direction and e_j.
double angle_from_axis(const Direction& dir, std::size_t j);

/// Angle in [0, pi/2] between two unoriented directions.
double line_angle(const Direction& a, const Direction& b);

/// Angle of the steepest polyline segment against the curve's axis.
double curve_angle(const LipschitzCurve& curve);

bool tube_intersects_box(const Tube& tube, const AxisBox& box);
bool tube_intersects_cube(const Tube& tube, const Cube& cube);

/// Splits the cube into k^n equal subcubes with side in
/// [W/(20 n delta), W/(10 n delta)].
std::vector<Cube> subdivide_cube(const Cube& cube, double delta, double w);

/// Number of subcubes per side chosen by subdivide_cube.
std::size_t subdivision_count(const Cube& cube, double delta, double w);

/// Axis-parallel tube of twice the radius, through the point where the axis
/// line crosses the hyperplane x_j = center_j of the cube. Dominates the
/// input tube on the cube under the stated preconditions.
Tube fatten_axis_parallel(const Tube& tube, std::size_t axis, const Cube& cube, double delta);

/// Deterministic cover of `cap` by caps of angular radius rho.
///
/// Construction (latitude bands): a polar cap of radius rho around the
/// centre, then bands of polar-angle width rho from rho out to R. Each band
/// is centred on its mid-latitude and gets an azimuthal net on S^{n-2} of
/// radius rho / (2 sin phi_max), built recursively as a full-sphere cover.
/// A point at (phi, u) is within rho/2 of its band's latitude and within
/// sin(phi) * angle(u, u_i) <= rho/2 along the latitude circle of its
/// nearest azimuth u_i, hence within rho of a centre.
///
/// The count obeys |cover| <= cap_cover_constant(n) * (R/rho)^{n-1}.
std::vector<Cap> cap_cover(const Cap& cap, double rho);

/// c_1 = 2, c_n = 1 + c_{n-1} (2 pi)^{n-2}.
double cap_cover_constant(std::size_t n);

/// The cap centre plus the 2(n-1) boundary points reached by moving the
/// full angular radius along each direction of an orthonormal tangent basis.
std::vector<Direction> cap_probe_directions(const Cap& cap);

/// Map sending each centres[j] to e_j: the inverse of [v_1 ... v_n].
LinearMap frame_map(std::span<const Direction> centres);

/// |det [v_1 ... v_n]|.
double wedge_volume(std::span<const Direction> vs);

}  // namespace kakeya
