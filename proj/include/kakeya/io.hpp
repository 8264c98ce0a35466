#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "kakeya/certifier.hpp"
#include "kakeya/evaluator.hpp"
#include "kakeya/experiments.hpp"
#include "kakeya/generators.hpp"
#include "kakeya/loomis_whitney.hpp"
#include "kakeya/reduction.hpp"

namespace kakeya {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

/// Tube configuration: one family per axis plus the integration cube.
struct Configuration {
    std::size_t n = 0;
    std::vector<TubeFamily> families;
    Cube cube{Point{0.0, 0.0}, 1.0};

    friend bool operator==(const Configuration&, const Configuration&) = default;
};

/// Shortest decimal that round-trips, independent of the C locale.
std::string format_number(double x);

/// Parses JSON text; syntax errors become ValidationError with
/// "line L, column C" of the offending byte.
Json parse_json(std::string_view text, std::string_view source = "<input>");
std::string read_file(const std::string& path);

Json to_json(const Configuration& c);
Configuration configuration_from_json(const Json& j);

Json to_json(const Cube& c);
Cube cube_from_json(const Json& j, std::size_t n);

Json to_json(const GenSpec& s);
GenSpec genspec_from_json(const Json& j);

ProjectionFunction projection_from_json(const Json& j);
AxisBox box_from_json(const Json& j);

Json to_json(const OverlapValue& v);
Json to_json(const Certificate& c);
Json to_json(const StepCheck& s);
Json to_json(const LwCheck& c);
Json to_json(const ReducedProblem& p);
Json to_json(const Reduction& r);
Json to_json(const SweepResult& r);
Json to_json(const SearchResult& r);

/// Pretty-printed with a trailing newline; byte-stable for equal values.
std::string dump(const Json& j);

}  // namespace kakeya
