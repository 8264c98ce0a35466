#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>

// Raw-pointer distance kernels shared by the geometry predicates and the
// quadrature inner loop, so both sides agree bit for bit at boundaries.
namespace kakeya::detail {

inline double line_distance(const double* anchor, const double* dir, const double* p, std::size_t n) {
    double t = 0.0;
    for (std::size_t i = 0; i < n; ++i) t += (p[i] - anchor[i]) * dir[i];
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = p[i] - anchor[i] - t * dir[i];
        s += r * r;
    }
    return std::sqrt(s);
}

inline double segment_distance(const double* a, const double* b, const double* p, std::size_t n) {
    double len2 = 0.0;
    double proj = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = b[i] - a[i];
        len2 += d * d;
        proj += (p[i] - a[i]) * d;
    }
    const double t = len2 > 0.0 ? std::clamp(proj / len2, 0.0, 1.0) : 0.0;
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = p[i] - a[i] - t * (b[i] - a[i]);
        s += r * r;
    }
    return std::sqrt(s);
}

/// s^{1/(n-1)} with the exact shortcuts for n = 2, 3.
inline double family_power(double s, std::size_t n) {
    if (n == 2) return s;
    if (n == 3) return std::sqrt(s);
    return std::pow(s, 1.0 / static_cast<double>(n - 1));
}

}  // namespace kakeya::detail
