#include "kakeya/geometry.hpp"

#include "kakeya/detail/distance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace kakeya {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

bool all_finite(std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

void require(bool ok, const std::string& what) {
    if (!ok) throw ValidationError(what);
}

// Squared distance from a + t d to the box.
double box_excess_sq(std::span<const double> a, std::span<const double> d, double t, const AxisBox& box) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double x = a[i] + t * d[i];
        double e = 0.0;
        if (x < box.lo[i])
            e = box.lo[i] - x;
        else if (x > box.hi[i])
            e = x - box.hi[i];
        s += e * e;
    }
    return s;
}

// Minimises the convex piecewise-quadratic f(t) = dist(a + t d, box)^2 over
// [t_lo, t_hi]. Between consecutive knots (where a coordinate crosses a box
// face) every coordinate is either clamped below, clamped above or inside,
// so f is an explicit quadratic there and its minimiser is closed-form.
double parametric_box_distance(std::span<const double> a, std::span<const double> d, const AxisBox& box, double t_lo,
                               double t_hi) {
    const std::size_t n = a.size();
    std::vector<double> knots;
    knots.reserve(2 * n + 2);
    if (std::isfinite(t_lo)) knots.push_back(t_lo);
    if (std::isfinite(t_hi)) knots.push_back(t_hi);
    for (std::size_t i = 0; i < n; ++i) {
        if (d[i] == 0.0) continue;
        for (const double bound : {box.lo[i], box.hi[i]}) {
            const double t = (bound - a[i]) / d[i];
            if (t > t_lo && t < t_hi) knots.push_back(t);
        }
    }
    std::sort(knots.begin(), knots.end());

    double best = std::numeric_limits<double>::infinity();
    for (const double t : knots) best = std::min(best, box_excess_sq(a, d, t, box));

    auto scan_interval = [&](double u, double v) {
        double probe = 0.0;
        if (std::isfinite(u) && std::isfinite(v))
            probe = 0.5 * (u + v);
        else if (std::isfinite(u))
            probe = u + 1.0;
        else if (std::isfinite(v))
            probe = v - 1.0;
        best = std::min(best, box_excess_sq(a, d, probe, box));
        double qa = 0.0;
        double qb = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double x = a[i] + probe * d[i];
            double bound = 0.0;
            if (x < box.lo[i])
                bound = box.lo[i];
            else if (x > box.hi[i])
                bound = box.hi[i];
            else
                continue;
            const double c = a[i] - bound;
            qa += d[i] * d[i];
            qb += 2.0 * c * d[i];
        }
        if (qa > 0.0) {
            const double t = std::clamp(-qb / (2.0 * qa), u, v);
            if (std::isfinite(t)) best = std::min(best, box_excess_sq(a, d, t, box));
        }
    };

    if (knots.empty()) {
        scan_interval(t_lo, t_hi);
    } else {
        if (!std::isfinite(t_lo)) scan_interval(t_lo, knots.front());
        for (std::size_t k = 0; k + 1 < knots.size(); ++k) scan_interval(knots[k], knots[k + 1]);
        if (!std::isfinite(t_hi)) scan_interval(knots.back(), t_hi);
    }
    return std::sqrt(best);
}

Point embed(std::size_t axis, double t, std::span<const double> rest) {
    Point p;
    p.reserve(rest.size() + 1);
    for (std::size_t i = 0; i < rest.size() + 1; ++i) {
        if (i < axis)
            p.push_back(rest[i]);
        else if (i == axis)
            p.push_back(t);
        else
            p.push_back(rest[i - 1]);
    }
    return p;
}

using Vec = Eigen::VectorXd;

// Orthonormal basis of the complement of unit vector c, as matrix columns.
Eigen::MatrixXd complement_basis(const Vec& c) {
    const Eigen::Index n = c.size();
    Vec v = c;
    if (c[0] > 0.0)
        v[0] += 1.0;
    else
        v[0] -= 1.0;
    const Eigen::MatrixXd h = Eigen::MatrixXd::Identity(n, n) - 2.0 * v * v.transpose() / v.squaredNorm();
    return h.rightCols(n - 1);
}

std::vector<Vec> sphere_net(const Vec& centre, double radius, double rho) {
    const Eigen::Index n = centre.size();
    if (rho >= radius) return {centre};
    if (n == 1) {
        if (radius >= std::numbers::pi) return {centre, -centre};
        return {centre};
    }
    const Eigen::MatrixXd basis = complement_basis(centre);
    std::vector<Vec> out{centre};
    const double span = radius - rho;
    const auto bands = static_cast<std::size_t>(std::ceil(span / rho * (1.0 - 1e-12)));
    const double width = span / static_cast<double>(bands);
    for (std::size_t b = 0; b < bands; ++b) {
        const double lo = rho + static_cast<double>(b) * width;
        const double hi = (b + 1 == bands) ? radius : rho + static_cast<double>(b + 1) * width;
        const double mid = 0.5 * (lo + hi);
        const double s = (lo <= std::numbers::pi / 2 && hi >= std::numbers::pi / 2) ? 1.0
                                                                                   : std::max(std::sin(lo), std::sin(hi));
        const double rho_u = s > 0.0 ? 0.5 * rho / s : std::numeric_limits<double>::infinity();
        Vec pole = Vec::Zero(n - 1);
        pole[0] = 1.0;
        for (const Vec& u : sphere_net(pole, std::numbers::pi, rho_u)) {
            Vec p = std::cos(mid) * centre + std::sin(mid) * (basis * u);
            out.push_back(p / p.norm());
        }
    }
    return out;
}

}  // namespace

// ---------------------------------------------------------------- Direction

Direction::Direction(std::vector<double> components) : c_(std::move(components)) {
    require(!c_.empty(), "direction must have at least one component");
    require(all_finite(c_), "direction has non-finite components");
    require(std::abs(norm(c_) - 1.0) <= 1e-12, "direction is not a unit vector");
}

Direction Direction::normalized(std::vector<double> v) {
    require(all_finite(v), "direction has non-finite components");
    const double len = norm(v);
    require(len > 0.0, "cannot normalise the zero vector");
    for (double& x : v) x /= len;
    return Direction(std::move(v));
}

Direction Direction::axis(std::size_t n, std::size_t j) {
    require(j < n, "axis index out of range");
    std::vector<double> v(n, 0.0);
    v[j] = 1.0;
    return Direction(std::move(v));
}

Direction Direction::flipped() const {
    std::vector<double> v = c_;
    for (double& x : v) x = -x;
    return Direction(std::move(v));
}

// ---------------------------------------------------------------- Line/Tube

Line::Line(Point anchor, Direction dir) : anchor_(std::move(anchor)), dir_(std::move(dir)) {
    require(anchor_.size() == dir_.dim(), "line anchor and direction dimensions differ");
    require(all_finite(anchor_), "line anchor has non-finite components");
}

Point Line::at(double t) const {
    Point p = anchor_;
    for (std::size_t i = 0; i < p.size(); ++i) p[i] += t * dir_[i];
    return p;
}

Tube::Tube(Line line, double radius) : line_(std::move(line)), radius_(radius) {
    require(std::isfinite(radius_) && radius_ > 0.0, "tube radius must be positive");
}

// ---------------------------------------------------------------- LipschitzCurve

LipschitzCurve::LipschitzCurve(std::size_t axis, std::vector<double> breakpoints, std::vector<Point> values, double lip)
    : axis_(axis), breakpoints_(std::move(breakpoints)), values_(std::move(values)), lip_(lip) {
    require(breakpoints_.size() >= 2, "curve needs at least two breakpoints");
    require(breakpoints_.size() == values_.size(), "curve breakpoints and values differ in length");
    const std::size_t m = values_.front().size();
    require(m >= 1, "curve values must live in R^{n-1} with n >= 2");
    require(axis_ <= m, "curve axis out of range");
    require(std::isfinite(lip_) && lip_ >= 0.0, "curve Lipschitz constant must be finite and nonnegative");
    require(all_finite(breakpoints_), "curve breakpoints must be finite");
    for (const Point& v : values_) {
        require(v.size() == m, "curve values have inconsistent dimensions");
        require(all_finite(v), "curve values must be finite");
    }
    for (std::size_t i = 0; i + 1 < breakpoints_.size(); ++i) {
        const double dt = breakpoints_[i + 1] - breakpoints_[i];
        require(dt > 0.0, "curve breakpoints must be strictly increasing");
        double dg = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
            const double diff = values_[i + 1][k] - values_[i][k];
            dg += diff * diff;
        }
        require(std::sqrt(dg) <= lip_ * dt * (1.0 + 1e-12), "curve violates its declared Lipschitz constant");
    }
    vertices_.reserve(breakpoints_.size());
    for (std::size_t i = 0; i < breakpoints_.size(); ++i) vertices_.push_back(embed(axis_, breakpoints_[i], values_[i]));
}

LipschitzCurve LipschitzCurve::from_line(const Line& line, std::size_t axis, double t0, double t1) {
    require(axis < line.dim(), "curve axis out of range");
    const double dj = line.dir()[axis];
    require(std::abs(dj) > 1e-12, "line is perpendicular to the curve axis");
    require(t0 < t1, "curve span must be nonempty");
    auto g = [&](double t) {
        const Point p = line.at((t - line.anchor()[axis]) / dj);
        Point v;
        for (std::size_t i = 0; i < p.size(); ++i)
            if (i != axis) v.push_back(p[i]);
        return v;
    };
    double perp = 0.0;
    for (std::size_t i = 0; i < line.dim(); ++i)
        if (i != axis) perp += line.dir()[i] * line.dir()[i];
    const double slope = std::sqrt(perp) / std::abs(dj);
    return LipschitzCurve(axis, {t0, t1}, {g(t0), g(t1)}, slope * (1.0 + 1e-12));
}

double LipschitzCurve::max_slope() const {
    double best = 0.0;
    for (std::size_t i = 0; i + 1 < breakpoints_.size(); ++i) {
        double dg = 0.0;
        for (std::size_t k = 0; k < values_[i].size(); ++k) {
            const double diff = values_[i + 1][k] - values_[i][k];
            dg += diff * diff;
        }
        best = std::max(best, std::sqrt(dg) / (breakpoints_[i + 1] - breakpoints_[i]));
    }
    return best;
}

Point LipschitzCurve::value_at(double t) const {
    t = std::clamp(t, breakpoints_.front(), breakpoints_.back());
    auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t);
    std::size_t i = static_cast<std::size_t>(std::distance(breakpoints_.begin(), it));
    if (i == breakpoints_.size()) --i;
    if (i == 0) i = 1;
    const double s = (t - breakpoints_[i - 1]) / (breakpoints_[i] - breakpoints_[i - 1]);
    Point v(values_[i].size());
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = values_[i - 1][k] + s * (values_[i][k] - values_[i - 1][k]);
    return v;
}

// ---------------------------------------------------------------- boxes, cubes, caps

bool AxisBox::contains(std::span<const double> p, double slack) const {
    for (std::size_t i = 0; i < lo.size(); ++i)
        if (p[i] < lo[i] - slack || p[i] > hi[i] + slack) return false;
    return true;
}

Cube::Cube(Point min_corner, double side) : min_corner_(std::move(min_corner)), side_(side) {
    require(!min_corner_.empty(), "cube dimension must be positive");
    require(all_finite(min_corner_), "cube corner must be finite");
    require(std::isfinite(side_) && side_ > 0.0, "cube side must be positive");
}

Point Cube::center() const {
    Point c = min_corner_;
    for (double& x : c) x += 0.5 * side_;
    return c;
}

AxisBox Cube::box() const {
    AxisBox b{min_corner_, min_corner_};
    for (double& x : b.hi) x += side_;
    return b;
}

double Cube::volume() const { return std::pow(side_, static_cast<double>(dim())); }

Cap::Cap(Direction center, double ang_radius) : center_(std::move(center)), ang_radius_(ang_radius) {
    require(ang_radius_ > 0.0 && ang_radius_ <= std::numbers::pi, "cap radius must lie in (0, pi]");
}

bool Cap::contains(const Direction& d, double slack) const {
    require(d.dim() == center_.dim(), "cap and direction dimensions differ");
    return line_angle(d, center_) <= ang_radius_ + slack;
}

// ---------------------------------------------------------------- LinearMap

LinearMap::LinearMap(Eigen::MatrixXd matrix) : matrix_(std::move(matrix)) {
    require(matrix_.rows() == matrix_.cols() && matrix_.rows() > 0, "linear map must be square");
    require(matrix_.allFinite(), "linear map has non-finite entries");
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(matrix_);
    const auto& sv = svd.singularValues();
    max_sv_ = sv.maxCoeff();
    min_sv_ = sv.minCoeff();
    abs_det_ = std::abs(matrix_.determinant());
    require(abs_det_ > 0.0, "linear map is singular");
}

Point LinearMap::apply(std::span<const double> p) const {
    require(p.size() == dim(), "point dimension does not match linear map");
    const Eigen::Map<const Eigen::VectorXd> v(p.data(), static_cast<Eigen::Index>(p.size()));
    const Eigen::VectorXd r = matrix_ * v;
    return Point(r.data(), r.data() + r.size());
}

LinearMap LinearMap::inverse() const { return LinearMap(matrix_.inverse()); }

// ---------------------------------------------------------------- distances

double point_line_distance(std::span<const double> anchor, std::span<const double> dir, std::span<const double> p) {
    return detail::line_distance(anchor.data(), dir.data(), p.data(), p.size());
}

double point_segment_distance(std::span<const double> a, std::span<const double> b, std::span<const double> p) {
    return detail::segment_distance(a.data(), b.data(), p.data(), p.size());
}

double line_box_distance(std::span<const double> anchor, std::span<const double> dir, const AxisBox& box) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    return parametric_box_distance(anchor, dir, box, -inf, inf);
}

double segment_box_distance(std::span<const double> a, std::span<const double> b, const AxisBox& box) {
    std::vector<double> d(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) d[i] = b[i] - a[i];
    return parametric_box_distance(a, d, box, 0.0, 1.0);
}

double curve_distance(const LipschitzCurve& curve, std::span<const double> p) {
    const auto& v = curve.vertices();
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < v.size(); ++i) best = std::min(best, point_segment_distance(v[i], v[i + 1], p));
    return best;
}

double curve_box_distance(const LipschitzCurve& curve, const AxisBox& box) {
    const auto& v = curve.vertices();
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < v.size(); ++i) best = std::min(best, segment_box_distance(v[i], v[i + 1], box));
    return best;
}

bool tube_indicator(const Tube& tube, std::span<const double> p) {
    require(p.size() == tube.dim(), "point dimension does not match tube");
    return point_line_distance(tube.line().anchor(), tube.line().dir().components(), p) <= tube.radius();
}

bool curve_indicator(const LipschitzCurve& curve, double radius, std::span<const double> p) {
    require(p.size() == curve.dim(), "point dimension does not match curve");
    require(radius > 0.0, "curve radius must be positive");
    const double x = p[curve.axis()];
    require(x >= curve.span_begin() - radius && x <= curve.span_end() + radius,
            "query point lies outside the curve's breakpoint span");
    return curve_distance(curve, p) <= radius;
}

double angle_from_axis(const Direction& dir, std::size_t j) {
    require(j < dir.dim(), "axis index out of range");
    double perp = 0.0;
    for (std::size_t i = 0; i < dir.dim(); ++i)
        if (i != j) perp += dir[i] * dir[i];
    return std::atan2(std::sqrt(perp), std::abs(dir[j]));
}

double line_angle(const Direction& a, const Direction& b) {
    require(a.dim() == b.dim(), "direction dimensions differ");
    const double sign = dot(a.components(), b.components()) < 0.0 ? -1.0 : 1.0;
    double minus = 0.0;
    double plus = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) {
        const double m = a[i] - sign * b[i];
        const double p = a[i] + sign * b[i];
        minus += m * m;
        plus += p * p;
    }
    return 2.0 * std::atan2(std::sqrt(minus), std::sqrt(plus));
}

double curve_angle(const LipschitzCurve& curve) { return std::atan(curve.max_slope()); }

bool tube_intersects_box(const Tube& tube, const AxisBox& box) {
    require(box.dim() == tube.dim(), "box dimension does not match tube");
    return line_box_distance(tube.line().anchor(), tube.line().dir().components(), box) <= tube.radius();
}

bool tube_intersects_cube(const Tube& tube, const Cube& cube) { return tube_intersects_box(tube, cube.box()); }

// ---------------------------------------------------------------- subdivision, fattening

std::size_t subdivision_count(const Cube& cube, double delta, double w) {
    require(delta > 0.0 && delta < 1.0, "delta must lie in (0, 1)");
    require(std::isfinite(w) && w > 0.0, "scale W must be positive");
    const double n = static_cast<double>(cube.dim());
    const double lower = w / (delta * 20.0 * n);
    const double upper = w / (delta * 10.0 * n);
    require(cube.side() >= lower * (1.0 - 1e-12), "cube is smaller than the admissible subcube side");
    auto k = static_cast<std::size_t>(std::ceil(cube.side() / upper * (1.0 - 1e-12)));
    k = std::max<std::size_t>(k, 1);
    if (cube.side() / static_cast<double>(k) < lower * (1.0 - 1e-12)) --k;
    require(k >= 1, "no admissible subdivision");
    const double s = cube.side() / static_cast<double>(k);
    require(s >= lower * (1.0 - 1e-12) && s <= upper * (1.0 + 1e-12), "no admissible subdivision");
    return k;
}

std::vector<Cube> subdivide_cube(const Cube& cube, double delta, double w) {
    const std::size_t k = subdivision_count(cube, delta, w);
    const std::size_t n = cube.dim();
    const double s = cube.side() / static_cast<double>(k);
    std::size_t total = 1;
    for (std::size_t d = 0; d < n; ++d) total *= k;
    std::vector<Cube> out;
    out.reserve(total);
    std::vector<std::size_t> idx(n, 0);
    for (std::size_t c = 0; c < total; ++c) {
        Point corner = cube.min_corner();
        for (std::size_t d = 0; d < n; ++d) corner[d] += static_cast<double>(idx[d]) * s;
        out.emplace_back(std::move(corner), s);
        for (std::size_t d = 0; d < n; ++d) {
            if (++idx[d] < k) break;
            idx[d] = 0;
        }
    }
    return out;
}

Tube fatten_axis_parallel(const Tube& tube, std::size_t axis, const Cube& cube, double delta) {
    require(delta > 0.0 && delta < 1.0, "delta must lie in (0, 1)");
    require(tube.dim() == cube.dim(), "tube and cube dimensions differ");
    require(angle_from_axis(tube.line().dir(), axis) <= delta * (1.0 + 1e-12),
            "tube makes an angle larger than delta with its axis");
    const double n = static_cast<double>(cube.dim());
    require(cube.side() <= tube.radius() / (delta * 10.0 * n) * (1.0 + 1e-12), "cube is too large to fatten against");
    const auto& a = tube.line().anchor();
    const auto& d = tube.line().dir();
    const double t = (cube.center()[axis] - a[axis]) / d[axis];
    return Tube(Line(tube.line().at(t), Direction::axis(cube.dim(), axis)), 2.0 * tube.radius());
}

// ---------------------------------------------------------------- caps, frames

std::vector<Cap> cap_cover(const Cap& cap, double rho) {
    require(rho > 0.0 && rho <= cap.ang_radius(), "cover radius must lie in (0, cap radius]");
    if (rho == cap.ang_radius()) return {cap};
    const auto c = cap.center().components();
    const Eigen::VectorXd centre = Eigen::Map<const Eigen::VectorXd>(c.data(), static_cast<Eigen::Index>(c.size()));
    std::vector<Cap> out;
    for (const Eigen::VectorXd& v : sphere_net(centre, cap.ang_radius(), rho))
        out.emplace_back(Direction::normalized(std::vector<double>(v.data(), v.data() + v.size())), rho);
    return out;
}

std::vector<Direction> cap_probe_directions(const Cap& cap) {
    const auto c = cap.center().components();
    const Eigen::VectorXd centre = Eigen::Map<const Eigen::VectorXd>(c.data(), static_cast<Eigen::Index>(c.size()));
    std::vector<Direction> out{cap.center()};
    if (centre.size() == 1) return out;
    const Eigen::MatrixXd basis = complement_basis(centre);
    for (Eigen::Index k = 0; k < basis.cols(); ++k) {
        for (const double sign : {1.0, -1.0}) {
            const Eigen::VectorXd v =
                std::cos(cap.ang_radius()) * centre + sign * std::sin(cap.ang_radius()) * basis.col(k);
            out.push_back(Direction::normalized(std::vector<double>(v.data(), v.data() + v.size())));
        }
    }
    return out;
}

double cap_cover_constant(std::size_t n) {
    require(n >= 1, "dimension must be positive");
    double c = 2.0;
    for (std::size_t k = 2; k <= n; ++k) c = 1.0 + c * std::pow(2.0 * std::numbers::pi, static_cast<double>(k) - 2.0);
    return c;
}

namespace {
Eigen::MatrixXd column_matrix(std::span<const Direction> vs) {
    const auto n = static_cast<Eigen::Index>(vs.size());
    require(n >= 1, "need at least one vector");
    Eigen::MatrixXd a(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        require(vs[static_cast<std::size_t>(j)].dim() == static_cast<std::size_t>(n),
                "need exactly n vectors in R^n");
        for (Eigen::Index i = 0; i < n; ++i) a(i, j) = vs[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
    }
    return a;
}
}  // namespace

LinearMap frame_map(std::span<const Direction> centres) {
    const Eigen::MatrixXd a = column_matrix(centres);
    require(std::abs(a.determinant()) >= 1e-12, "frame is singular");
    return LinearMap(a.inverse());
}

double wedge_volume(std::span<const Direction> vs) { return std::abs(column_matrix(vs).determinant()); }

}  // namespace kakeya
