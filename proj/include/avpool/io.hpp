#ifndef AVPOOL_IO_HPP
#define AVPOOL_IO_HPP

// JSON documents for scenario configs and facility layouts.

#include <fstream>
#include <set>
#include <string>

#include <json.hpp>

#include "avpool/core.hpp"
#include "avpool/layout.hpp"

namespace avpool {

using Json = nlohmann::json;

namespace detail {

inline void reject_unknown_keys(const Json& j, const std::set<std::string>& known, const std::string& where) {
  if (!j.is_object()) throw InputError(where + ": expected a JSON object");
  for (const auto& [key, _] : j.items())
    if (!known.contains(key)) throw InputError(where + ": unknown field '" + key + "'");
}

template <typename T>
void read_field(const Json& j, const char* key, T& out, const std::string& where) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw InputError(where + ": field '" + key + "': " + e.what());
  }
}

}  // namespace detail

/// Fields absent from the document keep the real-case defaults.
[[nodiscard]] inline ScenarioConfig config_from_json(const Json& j) {
  static const std::set<std::string> kKeys{"grid_width",        "grid_height",         "fleet_size",
                                           "customers_per_day", "time_units_per_day",  "demand_probability",
                                           "patience_radius",   "patience_radius_max", "vehicle_speed",
                                           "costs",             "facility_capacity"};
  static const std::set<std::string> kCostKeys{"lost_sale_per_unit", "travel_per_block",
                                               "facility_open_per_time_unit"};
  detail::reject_unknown_keys(j, kKeys, "config");
  ScenarioConfig c;
  detail::read_field(j, "grid_width", c.grid_width, "config");
  detail::read_field(j, "grid_height", c.grid_height, "config");
  detail::read_field(j, "fleet_size", c.fleet_size, "config");
  detail::read_field(j, "customers_per_day", c.customers_per_day, "config");
  detail::read_field(j, "time_units_per_day", c.time_units_per_day, "config");
  detail::read_field(j, "demand_probability", c.demand_probability, "config");
  detail::read_field(j, "patience_radius", c.patience_radius, "config");
  detail::read_field(j, "patience_radius_max", c.patience_radius_max, "config");
  detail::read_field(j, "vehicle_speed", c.vehicle_speed, "config");
  detail::read_field(j, "facility_capacity", c.facility_capacity, "config");
  if (j.contains("costs")) {
    const auto& cj = j.at("costs");
    detail::reject_unknown_keys(cj, kCostKeys, "config.costs");
    detail::read_field(cj, "lost_sale_per_unit", c.costs.lost_sale_per_unit, "config.costs");
    detail::read_field(cj, "travel_per_block", c.costs.travel_per_block, "config.costs");
    detail::read_field(cj, "facility_open_per_time_unit", c.costs.facility_open_per_time_unit, "config.costs");
  }
  validate(c);
  return c;
}

[[nodiscard]] inline Json to_json(const ScenarioConfig& c) {
  Json j = {{"grid_width", c.grid_width},
            {"grid_height", c.grid_height},
            {"fleet_size", c.fleet_size},
            {"customers_per_day", c.customers_per_day},
            {"time_units_per_day", c.time_units_per_day},
            {"demand_probability", c.demand_probability},
            {"patience_radius", c.patience_radius},
            {"vehicle_speed", c.vehicle_speed},
            {"costs",
             {{"lost_sale_per_unit", c.costs.lost_sale_per_unit},
              {"travel_per_block", c.costs.travel_per_block},
              {"facility_open_per_time_unit", c.costs.facility_open_per_time_unit}}},
            {"facility_capacity", c.facility_capacity}};
  if (c.per_customer_patience()) j["patience_radius_max"] = c.patience_radius_max;
  return j;
}

[[nodiscard]] inline FacilityLayout layout_from_json(const Json& j, const ScenarioConfig& config) {
  detail::reject_unknown_keys(j, {"facilities"}, "layout");
  if (!j.contains("facilities") || !j.at("facilities").is_array())
    throw InputError("layout: 'facilities' array required");
  FacilityLayout layout;
  for (const auto& f : j.at("facilities")) {
    detail::reject_unknown_keys(f, {"x", "y", "vehicles"}, "layout.facilities[]");
    if (!f.contains("x") || !f.contains("y") || !f.contains("vehicles"))
      throw InputError("layout: each facility needs x, y and vehicles");
    GridCoord p;
    std::int32_t n = 0;
    detail::read_field(f, "x", p.x, "layout.facilities[]");
    detail::read_field(f, "y", p.y, "layout.facilities[]");
    detail::read_field(f, "vehicles", n, "layout.facilities[]");
    layout.facilities.push_back(p);
    layout.initial_vehicles.push_back(n);
  }
  validate(layout, config);
  return layout;
}

[[nodiscard]] inline Json to_json(const FacilityLayout& layout) {
  Json arr = Json::array();
  for (std::size_t i = 0; i < layout.size(); ++i)
    arr.push_back({{"x", layout.facilities[i].x}, {"y", layout.facilities[i].y},
                   {"vehicles", layout.initial_vehicles[i]}});
  return Json{{"facilities", arr}};
}

[[nodiscard]] inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InputError(path + ": " + e.what());
  }
}

}  // namespace avpool

#endif  // AVPOOL_IO_HPP
