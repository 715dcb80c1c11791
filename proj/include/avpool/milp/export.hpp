#ifndef AVPOOL_MILP_EXPORT_HPP
#define AVPOOL_MILP_EXPORT_HPP

// LP text export of a built model, plus the JSON sidecar that carries the
// instance and the variable-name map for external solver round trips.

#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "avpool/milp/build.hpp"
#include "avpool/milp/validate.hpp"

namespace avpool::milp {

using Json = nlohmann::json;

namespace detail {

/// Exact decimal for integers and terminating fractions, 17 significant
/// digits otherwise (LP text has no fraction syntax).
inline std::string lp_number(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  std::int64_t den = r.denominator();
  while (den % 2 == 0) den /= 2;
  while (den % 5 == 0) den /= 5;
  std::ostringstream os;
  if (den == 1) {
    os << std::setprecision(20) << static_cast<long double>(r.numerator()) / r.denominator();
  } else {
    os << std::setprecision(17) << static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
  }
  return os.str();
}

inline void write_linear(std::ostream& os, const Model& model, const std::vector<Term>& terms) {
  if (terms.empty()) {
    os << " 0 " << model.variables.front().name;
    return;
  }
  constexpr std::size_t kTermsPerLine = 8;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (i > 0 && i % kTermsPerLine == 0) os << "\n  ";
    const Rational& c = terms[i].coefficient;
    const Rational mag = c < 0 ? -c : c;
    os << (c < 0 ? " - " : (i == 0 ? " " : " + "));
    if (mag != Rational(1)) os << lp_number(mag) << ' ';
    os << model.variables[terms[i].variable].name;
  }
}

inline const char* lp_sense(Sense s) {
  switch (s) {
    case Sense::LessEqual: return "<=";
    case Sense::Equal: return "=";
    case Sense::GreaterEqual: return ">=";
  }
  return "?";
}

}  // namespace detail

/// Writes the model in LP text format. Output depends only on the model, so
/// identical models give identical bytes.
inline void write_lp(std::ostream& os, const Model& model) {
  os << "\\ autonomous vehicle allocation model\n";
  os << "\\ variables: " << model.variables.size() << ", rows: " << model.constraints.size() << '\n';
  os << "Minimize\n obj:";
  if (!model.variables.empty()) detail::write_linear(os, model, model.objective);
  os << "\nSubject To\n";
  for (const auto& row : model.constraints) {
    os << ' ' << row.name << ':';
    detail::write_linear(os, model, row.terms);
    os << ' ' << detail::lp_sense(row.sense) << ' ' << detail::lp_number(row.rhs) << '\n';
  }
  os << "Bounds\n";
  for (const auto& v : model.variables) {
    if (v.type == VarType::Binary && v.lower == Rational(0) && v.upper == Rational(1)) continue;
    if (v.lower == v.upper) os << ' ' << v.name << " = " << detail::lp_number(v.lower) << '\n';
    else os << ' ' << detail::lp_number(v.lower) << " <= " << v.name << " <= " << detail::lp_number(v.upper) << '\n';
  }
  auto section = [&](const char* title, VarType type) {
    bool any = false;
    std::size_t on_line = 0;
    for (const auto& v : model.variables) {
      if (v.type != type) continue;
      if (!any) os << title << '\n';
      any = true;
      os << ' ' << v.name;
      if (++on_line == 10) {
        os << '\n';
        on_line = 0;
      }
    }
    if (on_line != 0) os << '\n';
  };
  section("Generals", VarType::Integer);
  section("Binaries", VarType::Binary);
  os << "End\n";
}

inline void export_lp(const Model& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  write_lp(out, model);
  if (!out) throw std::runtime_error("write failed: " + path);
}

// ---------------------------------------------------------------------------
// JSON

[[nodiscard]] inline Json to_json(const ModelInstance& inst) {
  Json locations = Json::array();
  for (const auto& p : inst.locations) locations.push_back({p.x, p.y});
  Json customers = Json::array();
  for (const auto& c : inst.customers)
    customers.push_back({{"id", c.id},
                         {"origin", c.origin},
                         {"destination", c.destination},
                         {"arrival", c.arrival},
                         {"patience", c.patience}});
  return Json{{"locations", locations},
              {"horizon", inst.horizon},
              {"customers", customers},
              {"vehicle_pools", inst.vehicle_pools},
              {"distance", inst.distance},
              {"travel_time", inst.travel_time},
              {"lost_sale_cost", inst.lost_sale_cost},
              {"travel_cost", inst.travel_cost},
              {"facility_cost", inst.facility_cost},
              {"facility_capacity", inst.facility_capacity},
              {"fleet_size", inst.fleet_size},
              {"big_m", inst.big_m}};
}

[[nodiscard]] inline ModelInstance instance_from_json(const Json& j) {
  try {
    ModelInstance inst;
    for (const auto& p : j.at("locations"))
      inst.locations.push_back(GridCoord{p.at(0).get<std::int32_t>(), p.at(1).get<std::int32_t>()});
    inst.horizon = j.at("horizon").get<TimeUnit>();
    for (const auto& c : j.at("customers"))
      inst.customers.push_back(InstanceCustomer{c.at("id").get<CustomerId>(), c.at("origin").get<LocationIndex>(),
                                                c.at("destination").get<LocationIndex>(),
                                                c.at("arrival").get<TimeUnit>(), c.at("patience").get<Blocks>()});
    j.at("vehicle_pools").get_to(inst.vehicle_pools);
    j.at("distance").get_to(inst.distance);
    j.at("travel_time").get_to(inst.travel_time);
    j.at("lost_sale_cost").get_to(inst.lost_sale_cost);
    j.at("travel_cost").get_to(inst.travel_cost);
    j.at("facility_cost").get_to(inst.facility_cost);
    j.at("facility_capacity").get_to(inst.facility_capacity);
    inst.fleet_size = j.at("fleet_size").get<std::int32_t>();
    inst.big_m = j.at("big_m").get<Money>();
    validate(inst);
    return inst;
  } catch (const Json::exception& e) {
    throw InputError(std::string("model instance: ") + e.what());
  }
}

/// Sidecar document: the instance plus variable name -> family/indices.
[[nodiscard]] inline Json sidecar_json(const ModelInstance& inst, const Model& model) {
  Json vars = Json::object();
  for (const auto& v : model.variables)
    vars[v.name] = Json{{"family", std::string(1, static_cast<char>(v.index.family))}, {"indices", v.index.indices}};
  return Json{{"format", "avpool-milp"}, {"version", 1}, {"instance", to_json(inst)}, {"variables", vars}};
}

/// Rebuilds the model described by a sidecar and checks that its variable map
/// matches the one recorded.
[[nodiscard]] inline std::pair<ModelInstance, Model> model_from_sidecar(const Json& j) {
  if (!j.is_object() || j.value("format", "") != "avpool-milp") throw InputError("not an avpool-milp sidecar");
  auto inst = instance_from_json(j.at("instance"));
  auto model = build_model(inst);
  const auto& vars = j.at("variables");
  if (vars.size() != model.variables.size())
    throw InputError("sidecar variable map does not match the rebuilt model");
  for (const auto& v : model.variables) {
    auto it = vars.find(v.name);
    if (it == vars.end() || it->at("indices").get<std::vector<std::int64_t>>() != v.index.indices)
      throw InputError("sidecar variable map does not match the rebuilt model at " + v.name);
  }
  return {std::move(inst), std::move(model)};
}

[[nodiscard]] inline Rational rational_from_json(const Json& v) {
  if (v.is_number_integer()) return Rational(v.get<std::int64_t>());
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    const auto slash = s.find('/');
    try {
      if (slash == std::string::npos) return Rational(std::stoll(s));
      return Rational(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
    } catch (const std::exception&) {
      throw InputError("bad rational '" + s + "'");
    }
  }
  if (v.is_number_float()) {
    const double d = v.get<double>();
    const auto r = static_cast<std::int64_t>(d);
    if (static_cast<double>(r) == d) return Rational(r);
    throw InputError("non-integral float value; write fractions as \"p/q\" strings");
  }
  throw InputError("assignment values must be integers or \"p/q\" strings");
}

[[nodiscard]] inline Assignment assignment_from_json(const Json& j) {
  if (!j.is_object()) throw InputError("assignment must be a JSON object of name -> value");
  Assignment a;
  for (const auto& [name, value] : j.items()) {
    auto idx = parse_variable_name(name);
    if (!idx) throw InputError("assignment: malformed variable name '" + name + "'");
    a[*idx] = rational_from_json(value);
  }
  return a;
}

[[nodiscard]] inline Json to_json(const Assignment& a) {
  Json j = Json::object();
  for (const auto& [idx, value] : a) {
    if (value == Rational(0)) continue;
    if (value.denominator() == 1) j[idx.name()] = value.numerator();
    else j[idx.name()] = to_string(value);
  }
  return j;
}

}  // namespace avpool::milp

#endif  // AVPOOL_MILP_EXPORT_HPP
