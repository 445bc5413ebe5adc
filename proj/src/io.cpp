#include "geoloop/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace geoloop {

namespace {

void emit(const Json& j, int digits, int indent, std::string& out) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += inner + Json(it.key()).dump() + ": ";
        emit(it.value(), digits, indent + 1, out);
      }
      out += "\n" + pad + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      bool flat = true;
      for (const Json& e : j)
        if (e.is_structured()) flat = false;
      if (flat) {
        out += "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) out += ", ";
          emit(j[i], digits, indent + 1, out);
        }
        out += "]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += inner;
        emit(j[i], digits, indent + 1, out);
      }
      out += "\n" + pad + "]";
      return;
    }
    case Json::value_t::number_float:
      out += std::isfinite(j.get<double>()) ? format_number(j.get<double>(), digits) : "null";
      return;
    default:
      out += j.dump();
  }
}

}  // namespace

std::string format_number(double x, int digits) {
  if (x == 0.0) return "0";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

std::string canonical_json(const Json& j, int digits) {
  std::string out;
  emit(j, digits, 0, out);
  out += "\n";
  return out;
}

std::string read_text(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoError("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& p, const std::string& s) {
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw IoError("cannot write " + p.string());
  out << s;
  if (!out) throw IoError("write failed for " + p.string());
}

Json read_json(const std::filesystem::path& p) {
  const std::string text = read_text(p);
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ConfigError(p.string() + ": " + e.what());
  }
}

Json manifold_to_json(const Manifold& m) {
  Json j;
  j["kind"] = m.kind_name();
  j["diameter_bound"] = m.diameter_bound();
  if (const auto* s = dynamic_cast<const RoundSphere*>(&m)) {
    j["dim"] = s->dim();
    j["radius"] = s->radius();
  } else if (const auto* t = dynamic_cast<const FlatTorus*>(&m)) {
    j["periods"] = t->periods();
  } else if (const auto* e = dynamic_cast<const Ellipsoid*>(&m)) {
    j["semi_axes"] = e->semi_axes();
  } else {
    throw ConfigError("manifold '" + m.kind_name() + "' has no JSON form");
  }
  return j;
}

ManifoldPtr manifold_from_json(const Json& j) {
  try {
    const std::string kind = j.at("kind").get<std::string>();
    std::optional<double> diam;
    if (j.contains("diameter_bound")) diam = j.at("diameter_bound").get<double>();
    if (kind == "round_sphere")
      return std::make_shared<RoundSphere>(j.value("dim", 2), j.value("radius", 1.0), diam);
    if (kind == "flat_torus") return std::make_shared<FlatTorus>(j.at("periods").get<std::vector<double>>(), diam);
    if (kind == "ellipsoid") return std::make_shared<Ellipsoid>(j.at("semi_axes").get<std::vector<double>>(), diam);
    if (kind == "torus_of_revolution")
      return ParamSurface::torus_of_revolution(j.at("R").get<double>(), j.at("r").get<double>(), diam);
    throw ConfigError("unknown manifold kind '" + kind + "'");
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("manifold: ") + e.what());
  }
}

Json point_to_json(const Point& p) { return to_vector(p); }

Point point_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw ConfigError("point must be a nonempty array");
  return make_point(j.get<std::vector<double>>());
}

Json curve_to_json(const PLCurve& c) {
  Json pts = Json::array();
  for (const Point& p : c.points()) pts.push_back(point_to_json(p));
  return Json{{"breakpoints", pts}, {"length", c.length()}};
}

PLCurve curve_from_json(const ManifoldPtr& m, const Json& j) {
  if (!j.contains("breakpoints")) throw ConfigError("curve needs breakpoints");
  std::vector<Point> pts;
  for (const Json& p : j.at("breakpoints")) pts.push_back(point_from_json(p));
  if (pts.empty()) throw ConfigError("curve has no breakpoints");
  return PLCurve(m, std::move(pts));
}

Json frames_to_json(const Json& manifold_spec, const std::vector<PLCurve>& frames) {
  Json j;
  j["manifold"] = manifold_spec;
  Json arr = Json::array();
  for (const PLCurve& c : frames) arr.push_back(curve_to_json(c));
  j["frames"] = arr;
  return j;
}

std::vector<PLCurve> frames_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("manifold")) throw ConfigError("curve document needs a manifold");
  const ManifoldPtr m = manifold_from_json(j.at("manifold"));
  std::vector<PLCurve> out;
  if (!j.contains("frames")) {
    out.push_back(curve_from_json(m, j));
    return out;
  }
  for (const Json& c : j.at("frames")) out.push_back(curve_from_json(m, c));
  return out;
}

Json certificate_to_json(const BoundCertificate& c) {
  Json params = Json::object();
  for (const auto& [k, v] : c.params) params[k] = v;
  return Json{{"formula", formula_name(c.formula)}, {"expression", formula_text(c.formula)},
              {"params", params},                   {"value", c.claimed},
              {"measured_max", c.measured},         {"slack", c.slack},
              {"pass", c.pass}};
}

BoundCertificate certificate_from_json(const Json& j) {
  try {
    BoundCertificate c;
    c.formula = formula_from_name(j.at("formula").get<std::string>());
    for (auto it = j.at("params").begin(); it != j.at("params").end(); ++it) c.params[it.key()] = it.value().get<double>();
    c.claimed = j.at("value").get<double>();
    c.measured = j.at("measured_max").get<double>();
    c.slack = j.at("slack").get<double>();
    c.pass = j.at("pass").get<bool>();
    return c;
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("certificate: ") + e.what());
  }
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string csv_row(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += csv_field(fields[i]);
  }
  return out + "\r\n";
}

void write_csv(const std::filesystem::path& p, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
  std::string s = csv_row(header);
  for (const auto& r : rows) s += csv_row(r);
  write_text(p, s);
}

void write_curve_csv(const std::filesystem::path& p, const PLCurve& c) {
  std::vector<std::string> header{"arclength"};
  for (int k = 0; k < c.manifold().coord_dim(); ++k) header.push_back("x" + std::to_string(k));
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < c.size(); ++i) {
    std::vector<std::string> r{format_number(c.cumulative()[i])};
    for (int k = 0; k < c.points()[i].size(); ++k) r.push_back(format_number(c.points()[i](k)));
    rows.push_back(std::move(r));
  }
  write_csv(p, header, rows);
}

}  // namespace geoloop
