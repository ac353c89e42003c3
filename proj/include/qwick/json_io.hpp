#pragma once

// JSON encodings of graded vectors, Wick polynomials and series specs.
//
//   GradedVector:   {"q":..., "dim":..., "max_degree":..., "components":{"0":[...], ...}}
//   WickPolynomial: {"terms":[{"coeff":..., "creators":[[...],...], "annihilators":[[...],...]}]}
//   SeriesSpec:     {"coefficients":[...], "radius":...}
//
// Doubles are written in shortest round-trip form, so parsing a written value
// reproduces it bit for bit.

#include <filesystem>
#include <string>

#include "json.hpp"
#include "qwick/wick_algebra.hpp"
#include "qwick/wick_series.hpp"

namespace qwick {

using Json = nlohmann::ordered_json;

/// Malformed input: wrong shape, wrong type, or inconsistent sizes.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Json to_json(const GradedVector& f);
/// Missing degrees are zero. Component lengths must equal dim^n.
GradedVector graded_vector_from_json(const Json& j);

Json to_json(const WickPolynomial& p);
/// Every vector in every word must have length `dim` when dim > 0; with
/// dim == 0 the first vector fixes it.
WickPolynomial wick_polynomial_from_json(const Json& j, int dim = 0);

Json to_json(const SeriesSpec& spec);
SeriesSpec series_spec_from_json(const Json& j);

Json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const Json& j);

}  // namespace qwick
