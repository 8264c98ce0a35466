#include "kakeya/loomis_whitney.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "kakeya/detail/distance.hpp"
#include "kakeya/parallel.hpp"

namespace kakeya {

namespace {
void require(bool ok, const std::string& what) {
    if (!ok) throw ValidationError(what);
}
}  // namespace

ProjectionFunction::ProjectionFunction(AxisBox box, std::vector<std::size_t> shape, std::vector<double> values)
    : box_(std::move(box)), shape_(std::move(shape)), values_(std::move(values)) {
    require(box_.dim() >= 1 && box_.lo.size() == box_.hi.size(), "grid box must have matching positive dimension");
    require(shape_.size() == box_.dim(), "grid shape must match the box dimension");
    std::size_t total = 1;
    for (std::size_t d = 0; d < shape_.size(); ++d) {
        require(shape_[d] >= 1, "grid shape entries must be positive");
        require(box_.hi[d] > box_.lo[d], "grid box must have positive extent");
        total *= shape_[d];
    }
    require(values_.size() == total, "grid values do not match the grid shape");
    for (const double v : values_) require(std::isfinite(v) && v >= 0.0, "grid values must be finite and nonnegative");
}

ProjectionFunction ProjectionFunction::indicator(const AxisBox& box, std::vector<std::size_t> shape,
                                                 const AxisBox& inner) {
    std::size_t total = 1;
    for (const std::size_t s : shape) total *= s;
    std::vector<double> values(total, 0.0);
    std::vector<std::size_t> idx(shape.size(), 0);
    Point mid(shape.size());
    for (std::size_t c = 0; c < total; ++c) {
        for (std::size_t d = 0; d < shape.size(); ++d) {
            const double h = (box.hi[d] - box.lo[d]) / static_cast<double>(shape[d]);
            mid[d] = box.lo[d] + (static_cast<double>(idx[d]) + 0.5) * h;
        }
        values[c] = inner.contains(mid) ? 1.0 : 0.0;
        for (std::size_t d = 0; d < shape.size(); ++d) {
            if (++idx[d] < shape[d]) break;
            idx[d] = 0;
        }
    }
    return ProjectionFunction(box, std::move(shape), std::move(values));
}

double ProjectionFunction::cell_volume() const {
    double v = 1.0;
    for (std::size_t d = 0; d < dim(); ++d) v *= (box_.hi[d] - box_.lo[d]) / static_cast<double>(shape_[d]);
    return v;
}

double ProjectionFunction::value_at(std::span<const double> y) const {
    require(y.size() == dim(), "point dimension does not match grid function");
    std::size_t offset = 0;
    std::size_t stride = 1;
    for (std::size_t d = 0; d < dim(); ++d) {
        require(y[d] >= box_.lo[d] && y[d] <= box_.hi[d], "point lies outside the grid function's box");
        const double h = (box_.hi[d] - box_.lo[d]) / static_cast<double>(shape_[d]);
        auto i = static_cast<std::size_t>(std::floor((y[d] - box_.lo[d]) / h));
        i = std::min(i, shape_[d] - 1);
        offset += i * stride;
        stride *= shape_[d];
    }
    return values_[offset];
}

double ProjectionFunction::l1_norm() const { return ordered_sum(values_) * cell_volume(); }

ProjectionFunction ProjectionFunction::scaled(double lambda) const {
    require(std::isfinite(lambda) && lambda >= 0.0, "scale must be finite and nonnegative");
    std::vector<double> v = values_;
    for (double& x : v) x *= lambda;
    return ProjectionFunction(box_, shape_, std::move(v));
}

Point project(std::span<const double> p, std::size_t j) {
    require(p.size() >= 2, "projection needs n >= 2");
    require(j < p.size(), "projection axis out of range");
    Point out;
    out.reserve(p.size() - 1);
    for (std::size_t i = 0; i < p.size(); ++i)
        if (i != j) out.push_back(p[i]);
    return out;
}

double lw_left(std::span<const ProjectionFunction> fs, const AxisBox& box, GridSpec grid, unsigned threads) {
    const std::size_t n = box.dim();
    require(n >= 2, "dimension must be at least 2");
    require(fs.size() == n, "need one grid function per axis");
    require(grid.cells_per_side >= 1, "cells per side must be positive");
    for (std::size_t d = 0; d < n; ++d) require(box.hi[d] > box.lo[d], "integration box must have positive extent");
    for (std::size_t j = 0; j < n; ++j) {
        require(fs[j].dim() == n - 1, "grid function dimension must be n - 1");
        const AxisBox shadow{project(box.lo, j), project(box.hi, j)};
        for (std::size_t d = 0; d < n - 1; ++d)
            require(shadow.lo[d] >= fs[j].box().lo[d] && shadow.hi[d] <= fs[j].box().hi[d],
                    "projection of the integration box leaves a grid function's box");
    }
    const std::size_t m = grid.cells_per_side;
    std::vector<double> h(n);
    double cell = 1.0;
    for (std::size_t d = 0; d < n; ++d) {
        h[d] = (box.hi[d] - box.lo[d]) / static_cast<double>(m);
        cell *= h[d];
    }
    // One slab of m^{n-1} cells per index of the last coordinate.
    std::vector<double> slabs(m, 0.0);
    parallel_for(m, threads, [&](std::size_t last) {
        std::vector<std::size_t> idx(n, 0);
        idx[n - 1] = last;
        Point x(n);
        double sum = 0.0;
        for (;;) {
            for (std::size_t d = 0; d < n; ++d) x[d] = box.lo[d] + (static_cast<double>(idx[d]) + 0.5) * h[d];
            double prod = 1.0;
            for (std::size_t j = 0; j < n && prod != 0.0; ++j) {
                const double v = fs[j].value_at(project(x, j));
                prod = v == 0.0 ? 0.0 : prod * detail::family_power(v, n);
            }
            sum += prod;
            std::size_t d = 0;
            for (; d + 1 < n; ++d) {
                if (++idx[d] < m) break;
                idx[d] = 0;
            }
            if (d + 1 == n) break;
        }
        slabs[last] = sum;
    });
    return ordered_sum(slabs) * cell;
}

double lw_right(std::span<const ProjectionFunction> fs) {
    require(!fs.empty(), "need at least one grid function");
    const std::size_t n = fs.size();
    require(n >= 2, "dimension must be at least 2");
    double prod = 1.0;
    for (const ProjectionFunction& f : fs) prod *= detail::family_power(f.l1_norm(), n);
    return prod;
}

LwCheck verify_lw(std::span<const ProjectionFunction> fs, const AxisBox& box, GridSpec grid, unsigned threads) {
    LwCheck out;
    out.left = lw_left(fs, box, grid, threads);
    out.right = lw_right(fs);
    double diff = 0.0;
    if (grid.cells_per_side % 2 == 0)
        diff = std::abs(out.left - lw_left(fs, box, GridSpec{grid.cells_per_side / 2}, threads));
    if (out.right == 0.0) {
        out.vacuous = true;
        return out;
    }
    out.ratio = out.left / out.right;
    out.error_estimate = (diff + 64.0 * std::numeric_limits<double>::epsilon() * out.left) / out.right;
    return out;
}

double unit_ball_volume(std::size_t d) {
    const double half = 0.5 * static_cast<double>(d);
    return std::pow(std::numbers::pi, half) / std::tgamma(half + 1.0);
}

double ball_sum_l1(const BallSum& b, std::size_t d) {
    require(b.weights.size() == b.centers.size(), "ball sum needs one weight per centre");
    double w = 0.0;
    for (const double x : b.weights) {
        require(std::isfinite(x) && x >= 0.0, "ball weights must be finite and nonnegative");
        w += x;
    }
    return unit_ball_volume(d) * std::pow(b.radius, static_cast<double>(d)) * w;
}

}  // namespace kakeya
