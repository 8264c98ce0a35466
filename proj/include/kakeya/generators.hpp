#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "kakeya/evaluator.hpp"
#include "kakeya/geometry.hpp"

namespace kakeya {

enum class Regime { axis_parallel, small_angle, general, lipschitz, weighted };

/// Configuration recipe. `angle` bounds member directions (small_angle,
/// lipschitz, weighted); the general regime always uses 1/(10n).
struct GenSpec {
    std::size_t n = 2;
    std::vector<std::size_t> counts;
    Regime regime = Regime::small_angle;
    double angle = 0.1;
    std::size_t breakpoints = 8;  // lipschitz: polyline vertices per curve
    double weight_min = 1.0;
    double weight_max = 1.0;
    bool integer_weights = false;
    Cube cube{Point{0.0, 0.0}, 10.0};
    double radius = 1.0;
    std::uint64_t seed = 0;
};

/// Random source for all generators: std::mt19937_64 with uniforms built
/// from the top 53 bits and normals by Box-Muller, so streams are identical
/// across standard libraries.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform();  // [0, 1)
    double uniform(double lo, double hi);
    double normal();
    std::uint64_t bits() { return engine_(); }

  private:
    std::mt19937_64 engine_;
};

void validate(const GenSpec& spec);

/// One family per axis, fully determined by the GenSpec.
std::vector<TubeFamily> generate(const GenSpec& spec);

/// Direction within `angle` of e_j, uniform on the cap.
Direction random_direction_in_cap(Rng& rng, std::size_t n, std::size_t j, double angle);

/// k^{n-1} axis-parallel tubes per axis; the coordinates other than j run
/// over (i - (k-1)/2) * spacing for i in [0, k).
std::vector<TubeFamily> enumerate_grid_axis_parallel(std::size_t n, std::size_t k, double spacing, double radius = 1.0);

/// The regime's angle bound (or 0 for axis-parallel).
double regime_angle(const GenSpec& spec);

}  // namespace kakeya
