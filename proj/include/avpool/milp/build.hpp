#ifndef AVPOOL_MILP_BUILD_HPP
#define AVPOOL_MILP_BUILD_HPP

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "avpool/milp/model.hpp"

namespace avpool::milp {

inline void validate(const ModelInstance& inst) {
  const auto L = inst.locations.size();
  const auto H = static_cast<std::size_t>(inst.horizon);
  if (L == 0) throw InputError("instance: no locations");
  if (inst.horizon < 1) throw InputError("instance: horizon must be >= 1");
  if (inst.distance.size() != L * L || inst.travel_time.size() != L * L)
    throw InputError("instance: distance/travel-time matrices must be |V|x|V|");
  if (inst.vehicle_pools.size() != L) throw InputError("instance: one vehicle pool per location required");
  if (inst.lost_sale_cost.size() != H || inst.travel_cost.size() != H || inst.facility_cost.size() != H ||
      inst.facility_capacity.size() != H)
    throw InputError("instance: per-time vectors must have one entry per time unit");
  std::size_t pooled = 0;
  std::set<VehicleId> ids;
  for (const auto& pool : inst.vehicle_pools)
    for (auto c : pool) {
      ++pooled;
      if (c < 0 || !ids.insert(c).second) throw InputError("instance: vehicle ids must be distinct and >= 0");
    }
  if (static_cast<std::int64_t>(pooled) != inst.fleet_size)
    throw InputError("instance: vehicle pools do not add up to fleet_size");
  std::set<CustomerId> seen;
  for (const auto& c : inst.customers) {
    if (c.id < 0 || !seen.insert(c.id).second) throw InputError("instance: customer ids must be distinct and >= 0");
    if (c.origin < 0 || c.destination < 0 || static_cast<std::size_t>(c.origin) >= L ||
        static_cast<std::size_t>(c.destination) >= L || c.origin == c.destination)
      throw InputError("instance: customer " + std::to_string(c.id) + " has bad locations");
    if (c.arrival < 0 || c.arrival >= inst.horizon)
      throw InputError("instance: customer " + std::to_string(c.id) + " arrives outside the horizon");
    if (c.patience < 0) throw InputError("instance: negative patience");
  }
  if (inst.big_m < minimum_big_m(inst))
    throw InputError("instance: big_M " + std::to_string(inst.big_m) + " is below the minimum valid value " +
                     std::to_string(minimum_big_m(inst)));
}

namespace detail {

/// Accumulates one row; duplicate variables are merged, zeros dropped and
/// terms emitted in variable order.
class RowBuilder {
public:
  RowBuilder& add(std::size_t var, const Rational& coef) {
    coefs_[var] += coef;
    return *this;
  }
  [[nodiscard]] bool empty() const { return coefs_.empty(); }
  LinearConstraint finish(std::string name, Sense sense, Rational rhs) const {
    LinearConstraint row{std::move(name), {}, sense, rhs};
    for (const auto& [var, coef] : coefs_)
      if (coef != Rational(0)) row.terms.push_back(Term{var, coef});
    return row;
  }

private:
  std::map<std::size_t, Rational> coefs_;
};

inline std::string row_name(const char* family, std::initializer_list<std::int64_t> idx) {
  std::string s(family);
  for (auto i : idx) {
    s += '_';
    s += std::to_string(i);
  }
  return s;
}

}  // namespace detail

/// Instantiates the allocation model over the realized instance.
///
/// Objective: lost sales, same-location round trips, cross-location three-leg
/// trips and open-facility time units. Rows:
///   supply_u_t      departures from u at t <= g_u_t, where g_u_t = n_u_t * f_u_t
///                   is linearized by lin_n/lin_f/lin_on
///   flow_v_t        n_v_t = n_v_(t-1) - departures_(t-1) + returns_t
///   return_c_k_u_r  z equals the cross-location trips ending with that return
///   cust_once_m     at most one cross-location vehicle per customer
///   veh_once_c_t    at most one customer per vehicle and time unit
///   patience_m      big-M: a served cross-location customer is within radius
///   demand_m        exactly one of same-location, cross-location or lost
///   capacity_t      open facilities <= F_t
/// Trips whose return would land past the horizon are fixed to zero. n_v_0 is
/// fixed to the size of the vehicle pool at v.
[[nodiscard]] inline Model build_model(const ModelInstance& inst) {
  validate(inst);
  Model model;
  model.big_m = Rational(inst.big_m);
  model.fleet_bound = Rational(inst.fleet_size);
  const auto L = static_cast<LocationIndex>(inst.locations.size());
  const TimeUnit H = inst.horizon;
  const auto at = [&](LocationIndex v, TimeUnit t) {
    return static_cast<std::size_t>(v) * static_cast<std::size_t>(H) + static_cast<std::size_t>(t);
  };

  auto add_var = [&](Family fam, std::vector<std::int64_t> idx, Rational lo, Rational hi, VarType type) {
    VariableIndex vi{fam, std::move(idx)};
    const auto pos = model.variables.size();
    model.variables.push_back(Variable{vi, vi.name(), lo, hi, type});
    model.lookup.emplace(std::move(vi), pos);
    return pos;
  };
  std::map<std::size_t, Rational> objective;
  auto add_obj = [&](std::size_t var, Money coef) {
    if (coef != 0) objective[var] += Rational(coef);
  };

  std::vector<std::vector<std::size_t>> departures(static_cast<std::size_t>(L) * static_cast<std::size_t>(H));
  std::vector<std::vector<std::size_t>> returns(static_cast<std::size_t>(L) * static_cast<std::size_t>(H));
  std::map<std::pair<VehicleId, TimeUnit>, std::vector<std::size_t>> vehicle_use;
  std::map<std::size_t, std::vector<std::size_t>> return_sources;  // z -> y
  std::vector<std::size_t> return_order;

  struct CustomerVars {
    std::size_t x, w;
    std::vector<std::pair<std::size_t, Blocks>> y;  // (var, d_uv)
  };
  std::vector<CustomerVars> cvars;
  cvars.reserve(inst.customers.size());

  for (const auto& m : inst.customers) {
    const auto v = m.origin, k = m.destination;
    const TimeUnit t = m.arrival;
    const auto ts = static_cast<std::size_t>(t);
    CustomerVars cv{};

    cv.w = add_var(Family::w, {m.id, v, t}, 0, 1, VarType::Binary);
    add_obj(cv.w, inst.lost_sale_cost[ts]);

    const TimeUnit x_back = t + inst.tt(v, k) + inst.tt(k, v);
    cv.x = add_var(Family::x, {v, m.id, k, t}, 0, x_back < H ? 1 : 0, VarType::Binary);
    add_obj(cv.x, inst.travel_cost[ts] * (inst.d(v, k) + inst.d(k, v)));
    departures[at(v, t)].push_back(cv.x);
    if (x_back < H) returns[at(v, x_back)].push_back(cv.x);

    for (LocationIndex u = 0; u < L; ++u) {
      if (u == v) continue;
      const TimeUnit back = t + inst.tt(u, v) + inst.tt(v, k) + inst.tt(k, u);
      for (VehicleId c : inst.vehicle_pools[static_cast<std::size_t>(u)]) {
        const auto y = add_var(Family::y, {m.id, v, c, u, k, t}, 0, back < H ? 1 : 0, VarType::Binary);
        add_obj(y, inst.travel_cost[ts] * (inst.d(u, v) + inst.d(v, k) + inst.d(k, u)));
        cv.y.emplace_back(y, inst.d(u, v));
        departures[at(u, t)].push_back(y);
        vehicle_use[{c, t}].push_back(y);
        if (back < H) {
          const VariableIndex zi{Family::z, {c, k, u, back}};
          auto z = model.find(zi);
          if (!z) {
            z = add_var(Family::z, zi.indices, 0, 1, VarType::Binary);
            return_order.push_back(*z);
            returns[at(u, back)].push_back(*z);
          }
          return_sources[*z].push_back(y);
        }
      }
    }
    cvars.push_back(std::move(cv));
  }

  // Facility and inventory variables, location-major.
  std::vector<std::size_t> f_var(static_cast<std::size_t>(L) * static_cast<std::size_t>(H));
  std::vector<std::size_t> n_var(f_var.size());
  for (LocationIndex v = 0; v < L; ++v) {
    const Rational pool_size(static_cast<std::int64_t>(inst.vehicle_pools[static_cast<std::size_t>(v)].size()));
    for (TimeUnit t = 0; t < H; ++t) {
      f_var[at(v, t)] = add_var(Family::f, {v, t}, 0, 1, VarType::Binary);
      add_obj(f_var[at(v, t)], inst.facility_cost[static_cast<std::size_t>(t)]);
      n_var[at(v, t)] = t == 0 ? add_var(Family::n, {v, t}, pool_size, pool_size, VarType::Integer)
                               : add_var(Family::n, {v, t}, 0, model.fleet_bound, VarType::Integer);
    }
  }

  auto& rows = model.constraints;
  const Rational F = model.fleet_bound;

  for (LocationIndex u = 0; u < L; ++u) {
    for (TimeUnit t = 0; t < H; ++t) {
      const auto& out = departures[at(u, t)];
      if (out.empty()) continue;
      const auto n = n_var[at(u, t)], f = f_var[at(u, t)];
      const auto g = add_var(Family::g, {u, t}, 0, F, VarType::Integer);
      detail::RowBuilder supply;
      for (auto var : out) supply.add(var, 1);
      supply.add(g, -1);
      model.supply_links.push_back(SupplyLink{rows.size(), n, f, g});
      rows.push_back(supply.finish(detail::row_name("supply", {u, t}), Sense::LessEqual, 0));
      rows.push_back(detail::RowBuilder{}.add(g, 1).add(n, -1).finish(detail::row_name("lin_n", {u, t}),
                                                                      Sense::LessEqual, 0));
      rows.push_back(detail::RowBuilder{}.add(g, 1).add(f, -F).finish(detail::row_name("lin_f", {u, t}),
                                                                      Sense::LessEqual, 0));
      rows.push_back(detail::RowBuilder{}.add(g, 1).add(n, -1).add(f, -F).finish(
          detail::row_name("lin_on", {u, t}), Sense::GreaterEqual, -F));
    }
  }

  for (LocationIndex v = 0; v < L; ++v) {
    for (TimeUnit t = 1; t < H; ++t) {
      detail::RowBuilder flow;
      flow.add(n_var[at(v, t)], 1).add(n_var[at(v, t - 1)], -1);
      for (auto var : departures[at(v, t - 1)]) flow.add(var, 1);
      for (auto var : returns[at(v, t)]) flow.add(var, -1);
      rows.push_back(flow.finish(detail::row_name("flow", {v, t}), Sense::Equal, 0));
    }
  }

  for (auto z : return_order) {
    detail::RowBuilder ret;
    ret.add(z, 1);
    for (auto y : return_sources[z]) ret.add(y, -1);
    const auto& zi = model.variables[z].index.indices;
    rows.push_back(ret.finish(detail::row_name("return", {zi[0], zi[1], zi[2], zi[3]}), Sense::Equal, 0));
  }

  for (std::size_t i = 0; i < inst.customers.size(); ++i) {
    if (cvars[i].y.empty()) continue;
    detail::RowBuilder once;
    for (const auto& [y, _] : cvars[i].y) once.add(y, 1);
    rows.push_back(once.finish(detail::row_name("cust_once", {inst.customers[i].id}), Sense::LessEqual, 1));
  }

  for (const auto& [key, ys] : vehicle_use) {
    detail::RowBuilder once;
    for (auto y : ys) once.add(y, 1);
    rows.push_back(once.finish(detail::row_name("veh_once", {key.first, key.second}), Sense::LessEqual, 1));
  }

  // N(1 - x - sum y) + sum d_uv y <= S(1 - w) + N w
  //   <=>  -N x + sum (d_uv - N) y + (S - N) w <= S - N
  const Rational N = model.big_m;
  for (std::size_t i = 0; i < inst.customers.size(); ++i) {
    const Rational S(inst.customers[i].patience);
    detail::RowBuilder row;
    row.add(cvars[i].x, -N);
    for (const auto& [y, d] : cvars[i].y) row.add(y, Rational(d) - N);
    row.add(cvars[i].w, S - N);
    rows.push_back(row.finish(detail::row_name("patience", {inst.customers[i].id}), Sense::LessEqual, S - N));
  }

  for (std::size_t i = 0; i < inst.customers.size(); ++i) {
    detail::RowBuilder row;
    row.add(cvars[i].x, 1).add(cvars[i].w, 1);
    for (const auto& [y, _] : cvars[i].y) row.add(y, 1);
    rows.push_back(row.finish(detail::row_name("demand", {inst.customers[i].id}), Sense::Equal, 1));
  }

  for (TimeUnit t = 0; t < H; ++t) {
    detail::RowBuilder row;
    for (LocationIndex v = 0; v < L; ++v) row.add(f_var[at(v, t)], 1);
    rows.push_back(row.finish(detail::row_name("capacity", {t}), Sense::LessEqual,
                              Rational(inst.facility_capacity[static_cast<std::size_t>(t)])));
  }

  for (const auto& [var, coef] : objective)
    if (coef != Rational(0)) model.objective.push_back(Term{var, coef});
  return model;
}

}  // namespace avpool::milp

#endif  // AVPOOL_MILP_BUILD_HPP
