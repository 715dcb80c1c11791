#ifndef AVPOOL_DEMAND_HPP
#define AVPOOL_DEMAND_HPP

#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "avpool/core.hpp"
#include "avpool/rng.hpp"

namespace avpool {

using CustomerId = std::int64_t;

/// One unit of demand: a customer appearing at `origin` at `arrival_time`,
/// bound for `destination`, willing to be served by a vehicle parked at most
/// `patience_radius` blocks away.
struct CustomerRequest {
  CustomerId id = 0;
  GridCoord origin;
  GridCoord destination;
  TimeUnit arrival_time = 0;
  Blocks patience_radius = 0;

  friend bool operator==(const CustomerRequest&, const CustomerRequest&) = default;
};

inline void validate(const CustomerRequest& r, const ScenarioConfig& c) {
  if (!on_grid(r.origin, c) || !on_grid(r.destination, c))
    throw InputError("customer " + std::to_string(r.id) + " has an off-grid coordinate");
  if (r.origin == r.destination)
    throw InputError("customer " + std::to_string(r.id) + " has origin == destination");
  if (r.arrival_time < 0 || r.arrival_time >= c.time_units_per_day)
    throw InputError("customer " + std::to_string(r.id) + " arrives outside the day");
  if (r.patience_radius < 0)
    throw InputError("customer " + std::to_string(r.id) + " has negative patience");
}

/// Requests of one day. Every block draws a Bernoulli(demand_probability)
/// trial per time unit (time-major, blocks row-major); each success creates a
/// customer until the daily pool of customers_per_day is used up. Ids are
/// assigned in creation order starting at 0.
[[nodiscard]] inline std::vector<CustomerRequest> generate_day_demand(const ScenarioConfig& config,
                                                                      std::uint64_t seed,
                                                                      std::uint64_t day) {
  validate(config);
  std::vector<CustomerRequest> out;
  const std::int32_t blocks = config.block_count();
  // A single-block grid has no valid destination.
  if (blocks < 2 || config.customers_per_day == 0 || config.demand_probability <= 0.0) return out;

  Rng rng(derive_seed(seed, StreamKind::Demand, day));
  out.reserve(static_cast<std::size_t>(config.customers_per_day));
  for (TimeUnit t = 0; t < config.time_units_per_day; ++t) {
    for (std::int32_t b = 0; b < blocks; ++b) {
      if (!rng.bernoulli(config.demand_probability)) continue;
      CustomerRequest r;
      r.id = static_cast<CustomerId>(out.size());
      r.origin = block_at(b, config.grid_width);
      auto d = static_cast<std::int32_t>(rng.below(static_cast<std::uint64_t>(blocks - 1)));
      if (d >= b) ++d;
      r.destination = block_at(d, config.grid_width);
      r.arrival_time = t;
      r.patience_radius = config.per_customer_patience()
                              ? rng.between(config.patience_radius, config.patience_radius_max)
                              : config.patience_radius;
      out.push_back(r);
      if (static_cast<std::int32_t>(out.size()) == config.customers_per_day) return out;
    }
  }
  return out;
}

inline constexpr const char* kDemandCsvHeader =
    "id,origin_x,origin_y,dest_x,dest_y,arrival_time,patience_radius";

inline void write_demand_csv(std::ostream& os, const std::vector<CustomerRequest>& requests) {
  os << kDemandCsvHeader << '\n';
  for (const auto& r : requests) {
    os << r.id << ',' << r.origin.x << ',' << r.origin.y << ',' << r.destination.x << ','
       << r.destination.y << ',' << r.arrival_time << ',' << r.patience_radius << '\n';
  }
}

[[nodiscard]] inline std::vector<CustomerRequest> read_demand_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw InputError("demand CSV is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kDemandCsvHeader) throw InputError("unexpected demand CSV header: " + line);

  std::vector<CustomerRequest> out;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::vector<std::int64_t> v;
    std::string cell;
    while (std::getline(fields, cell, ',')) {
      try {
        std::size_t used = 0;
        v.push_back(std::stoll(cell, &used));
        if (used != cell.size()) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw InputError("demand CSV line " + std::to_string(lineno) + ": bad integer '" + cell + "'");
      }
    }
    if (v.size() != 7)
      throw InputError("demand CSV line " + std::to_string(lineno) + ": expected 7 columns");
    CustomerRequest r;
    r.id = v[0];
    r.origin = {static_cast<std::int32_t>(v[1]), static_cast<std::int32_t>(v[2])};
    r.destination = {static_cast<std::int32_t>(v[3]), static_cast<std::int32_t>(v[4])};
    r.arrival_time = v[5];
    r.patience_radius = v[6];
    out.push_back(r);
  }
  return out;
}

}  // namespace avpool

#endif  // AVPOOL_DEMAND_HPP
