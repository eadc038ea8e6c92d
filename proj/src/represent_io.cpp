#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "beurling/errors.hpp"
#include "beurling/represent.hpp"

namespace beurling {

namespace {

using nlohmann::ordered_json;

ordered_json component_to_json(const RealFunc& fn,
                               const std::vector<std::pair<double, double>>& table,
                               bool log_scale) {
  if (!table.empty()) {
    ordered_json rows = ordered_json::array();
    for (const auto& [x, y] : table) rows.push_back(ordered_json::array({x, y}));
    ordered_json obj = ordered_json::object();
    obj[log_scale ? "log_polyline" : "polyline"] = std::move(rows);
    return obj;
  }
  if (fn.expression_backed()) {
    ordered_json obj = ordered_json::object();
    obj["expr"] = fn.print();
    return obj;
  }
  throw ValidationError("component '" + fn.label() + "' has no serialisable form");
}

struct Component {
  RealFunc fn;
  std::vector<std::pair<double, double>> table;  // empty for expression form
  bool log_scale = false;
};

Component component_from_json(const ordered_json& obj, const std::string& which) {
  Component out;
  if (obj.is_string()) {
    out.fn = parse_expr(obj.get<std::string>());
    return out;
  }
  if (!obj.is_object())
    throw ValidationError("component '" + which + "' must be an expression string or an object");
  if (obj.contains("expr")) {
    if (!obj["expr"].is_string())
      throw ValidationError("component '" + which + "': expr must be a string");
    out.fn = parse_expr(obj["expr"].get<std::string>());
    return out;
  }
  out.log_scale = obj.contains("log_polyline");
  const char* key = out.log_scale ? "log_polyline" : "polyline";
  if (!obj.contains(key))
    throw ValidationError("component '" + which + "' needs one of: expr, polyline, log_polyline");
  for (const auto& row : obj[key]) {
    if (!row.is_array() || row.size() != 2 || !row[0].is_number() || !row[1].is_number())
      throw ValidationError("component '" + which + "': table rows must be [x, y] number pairs");
    out.table.emplace_back(row[0].get<double>(), row[1].get<double>());
  }
  out.fn = polyline_func(out.table, out.log_scale, which + "_polyline");
  return out;
}

}  // namespace

std::string representation_to_json(const GammaRepresentation& rep) {
  if (!rep.phi.valid() || !rep.d_component.valid() || !rep.e_component.valid())
    throw ValidationError("representation is incomplete");
  if (!rep.phi.expression_backed())
    throw ValidationError("rate '" + rep.phi.label() + "' has no serialisable form");

  ordered_json doc = ordered_json::object();
  doc["rho"] = rep.rho;
  doc["phi"] = rep.phi.print();
  if (rep.phi.domain().lo != 0.0) doc["phi_domain_lo"] = rep.phi.domain().lo;
  doc["d"] = component_to_json(rep.d_component, rep.d_log_table, true);
  doc["e"] = component_to_json(rep.e_component, rep.e_table, false);
  return doc.dump(2) + "\n";
}

GammaRepresentation representation_from_json(const std::string& text, double quad_tol) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& ex) {
    throw ValidationError(std::string("representation JSON: ") + ex.what());
  }
  try {
    if (!doc.is_object()) throw ValidationError("representation JSON must be an object");
    if (!doc.contains("rho") || !doc["rho"].is_number())
      throw ValidationError("representation JSON needs a numeric rho");
    if (!doc.contains("phi") || !doc["phi"].is_string())
      throw ValidationError("representation JSON needs a rate expression string phi");

    const double rho = doc["rho"].get<double>();
    RealFunc phi = resolve_func_spec(doc["phi"].get<std::string>());
    if (doc.contains("phi_domain_lo")) {
      Domain dom = phi.domain();
      dom.lo = doc["phi_domain_lo"].get<double>();
      phi = phi.with_domain(dom);
    }
    Component d = component_from_json(doc.at("d"), "d");
    Component e = component_from_json(doc.at("e"), "e");

    GammaRepresentation rep = build_gamma(rho, phi, d.fn, e.fn, quad_tol);
    if (!d.table.empty()) rep.d_log_table = std::move(d.table);
    if (!e.table.empty()) rep.e_table = std::move(e.table);
    return rep;
  } catch (const nlohmann::json::exception& ex) {
    throw ValidationError(std::string("representation JSON: ") + ex.what());
  }
}

}  // namespace beurling
