#pragma once

#include "geoloop/certificates.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace geoloop {

using Json = nlohmann::json;

class IoError : public Error {
 public:
  using Error::Error;
};

// Sorted keys, two-space indent, floats with `digits` significant digits.
std::string canonical_json(const Json& j, int digits = 12);
std::string format_number(double x, int digits = 12);

std::string read_text(const std::filesystem::path& p);
void write_text(const std::filesystem::path& p, const std::string& s);
Json read_json(const std::filesystem::path& p);

Json manifold_to_json(const Manifold& m);
ManifoldPtr manifold_from_json(const Json& j);

Json point_to_json(const Point& p);
Point point_from_json(const Json& j);

// {"breakpoints": [[...], ...], "length": ...}
Json curve_to_json(const PLCurve& c);
PLCurve curve_from_json(const ManifoldPtr& m, const Json& j);

// {"manifold": spec, "frames": [curve, ...]}
Json frames_to_json(const Json& manifold_spec, const std::vector<PLCurve>& frames);
// Accepts a frames document or a single curve document {"manifold": spec, "breakpoints": ...}.
std::vector<PLCurve> frames_from_json(const Json& j);

// {"formula", "expression", "params", "value", "measured_max", "slack", "pass"}
Json certificate_to_json(const BoundCertificate& c);
BoundCertificate certificate_from_json(const Json& j);

// RFC 4180.
std::string csv_field(const std::string& s);
std::string csv_row(const std::vector<std::string>& fields);
void write_csv(const std::filesystem::path& p, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

// arclength, coordinates.
void write_curve_csv(const std::filesystem::path& p, const PLCurve& c);

}  // namespace geoloop
