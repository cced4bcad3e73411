#pragma once

#include "nidx/space.hpp"
#include "nidx/types.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>

namespace nidx {

using Json = nlohmann::json;

/// Loads a space spec. Keys: kind, p, dim, samples, angles, outer, left,
/// right, E, summands, of. Errors name the offending JSON path.
Space space_from_json(const Json& j);
Json space_to_json(const Space& space);

Space load_space(const std::string& path);  // "-" reads stdin

struct OperatorData {
  Mat matrix;
  std::optional<Space> space;
};

/// {"matrix": [[...]], "space": <space-spec>}; the space is optional.
OperatorData operator_from_json(const Json& j);
Json matrix_to_json(const Mat& m);
Mat matrix_from_json(const Json& j);
/// Whitespace- or comma-separated rows.
Mat matrix_from_csv(std::istream& in);
std::string matrix_to_csv(const Mat& m);

Json vec_to_json(const Vec& v);

}  // namespace nidx
