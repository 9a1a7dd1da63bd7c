#include "permsft/io.hpp"

#include <charconv>
#include <cmath>
#include <nlohmann/json.hpp>

#include "permsft/error.hpp"

namespace permsft {

namespace {

using nlohmann::json;

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("malformed JSON: ") + e.what());
  }
}

LatticePoint point_from(const json& j, const char* what) {
  if (!j.is_array()) throw InvalidArgument(std::string(what) + " must be an array of integers");
  std::vector<std::int64_t> c;
  for (const auto& v : j) {
    if (!v.is_number_integer()) throw InvalidArgument(std::string(what) + " must contain integers");
    c.push_back(v.get<std::int64_t>());
  }
  return LatticePoint(std::move(c));
}

json point_to(const LatticePoint& p) { return json(std::vector<std::int64_t>(p.coords().begin(), p.coords().end())); }

}  // namespace

GroupRingElement parse_element(std::string_view json_text) {
  const json j = parse_json(json_text);
  if (!j.is_object() || !j.contains("dim") || !j.contains("terms")) {
    throw InvalidArgument("element JSON needs \"dim\" and \"terms\"");
  }
  if (!j["dim"].is_number_integer() || j["dim"].get<std::int64_t>() < 1) {
    throw InvalidArgument("\"dim\" must be a positive integer");
  }
  const auto dim = static_cast<std::size_t>(j["dim"].get<std::int64_t>());
  if (!j["terms"].is_array()) throw InvalidArgument("\"terms\" must be an array");
  std::vector<std::pair<LatticePoint, double>> terms;
  for (const auto& t : j["terms"]) {
    if (!t.is_object() || !t.contains("exp") || !t.contains("coef") || !t["coef"].is_number()) {
      throw InvalidArgument("each term needs \"exp\" and numeric \"coef\"");
    }
    LatticePoint p = point_from(t["exp"], "\"exp\"");
    if (p.dim() != dim) throw InvalidArgument("term exponent " + p.to_string() + " does not have dimension " +
                                              std::to_string(dim));
    terms.emplace_back(std::move(p), t["coef"].get<double>());
  }
  return GroupRingElement(dim, std::move(terms));
}

std::string element_to_json(const GroupRingElement& f) {
  json terms = json::array();
  for (const auto& [s, c] : f.terms()) terms.push_back({{"exp", point_to(s)}, {"coef", c}});
  return json{{"dim", f.dim()}, {"terms", terms}}.dump();
}

Window parse_window(std::string_view json_text) {
  const json j = parse_json(json_text);
  if (j.is_object() && j.contains("box")) {
    const json& b = j["box"];
    if (!b.is_object() || !b.contains("origin") || !b.contains("lengths")) {
      throw InvalidArgument("\"box\" needs \"origin\" and \"lengths\"");
    }
    LatticePoint origin = point_from(b["origin"], "\"origin\"");
    LatticePoint lengths = point_from(b["lengths"], "\"lengths\"");
    return Window::box(origin, lengths.coords());
  }
  if (j.is_object() && j.contains("points")) {
    if (!j["points"].is_array()) throw InvalidArgument("\"points\" must be an array");
    std::vector<LatticePoint> pts;
    for (const auto& p : j["points"]) pts.push_back(point_from(p, "window point"));
    return Window::from_points(std::move(pts));
  }
  throw InvalidArgument("window JSON needs \"box\" or \"points\"");
}

std::string window_to_json(const Window& w) {
  json pts = json::array();
  for (const auto& p : w) pts.push_back(point_to(p));
  return json{{"points", pts}}.dump();
}

std::string format_number(double v, int significant_digits) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, significant_digits);
  return std::string(buf, res.ptr);
}

double round_significant(double v, int significant_digits) {
  if (!std::isfinite(v)) return v;
  const std::string text = format_number(v, significant_digits);
  double out = v;
  std::from_chars(text.data(), text.data() + text.size(), out);
  return out;
}

}  // namespace permsft
