#ifndef AVPOOL_MILP_VALIDATE_HPP
#define AVPOOL_MILP_VALIDATE_HPP

#include <ostream>
#include <string>
#include <vector>

#include "avpool/milp/model.hpp"

namespace avpool::milp {

struct RowViolation {
  std::string row;
  Rational activity{0};
  Sense sense = Sense::LessEqual;
  Rational rhs{0};
  /// rhs - activity: negative for a violated <=, positive for a violated >=.
  Rational slack{0};
};

struct DomainViolation {
  std::string variable;
  Rational value{0};
  std::string reason;
};

struct ValidationReport {
  bool feasible = true;
  std::vector<RowViolation> violated_rows;
  std::vector<DomainViolation> domain_violations;
  Rational objective{0};
};

[[nodiscard]] inline Rational value_of(const Model& model, const Assignment& a, std::size_t var) {
  auto it = a.find(model.variables[var].index);
  return it == a.end() ? Rational(0) : it->second;
}

[[nodiscard]] inline Rational row_activity(const Model& model, const Assignment& a, const LinearConstraint& row) {
  Rational sum(0);
  for (const auto& term : row.terms) sum += term.coefficient * value_of(model, a, term.variable);
  return sum;
}

[[nodiscard]] inline bool row_holds(const Rational& activity, Sense sense, const Rational& rhs) {
  switch (sense) {
    case Sense::LessEqual: return activity <= rhs;
    case Sense::Equal: return activity == rhs;
    case Sense::GreaterEqual: return activity >= rhs;
  }
  return false;
}

/// Checks every row, bound and integrality requirement exactly. Variables in
/// the assignment that the model does not define are reported as domain
/// violations when nonzero.
[[nodiscard]] inline ValidationReport validate_solution(const Model& model, const Assignment& assignment) {
  ValidationReport report;
  for (const auto& [idx, value] : assignment) {
    if (value != Rational(0) && !model.find(idx))
      report.domain_violations.push_back({idx.name(), value, "not a model variable"});
  }
  for (const auto& var : model.variables) {
    auto it = assignment.find(var.index);
    const Rational value = it == assignment.end() ? Rational(0) : it->second;
    if (value < var.lower) report.domain_violations.push_back({var.name, value, "below lower bound"});
    if (value > var.upper) report.domain_violations.push_back({var.name, value, "above upper bound"});
    if (var.type != VarType::Continuous && value.denominator() != 1)
      report.domain_violations.push_back({var.name, value, "not integral"});
  }
  for (const auto& row : model.constraints) {
    const Rational activity = row_activity(model, assignment, row);
    if (!row_holds(activity, row.sense, row.rhs))
      report.violated_rows.push_back({row.name, activity, row.sense, row.rhs, row.rhs - activity});
  }
  for (const auto& term : model.objective) report.objective += term.coefficient * value_of(model, assignment, term.variable);
  report.feasible = report.violated_rows.empty() && report.domain_violations.empty();
  return report;
}

/// Supply rows evaluated in their original product form
/// (departures <= n * f), without the auxiliary variable. Returns the names
/// of the violated rows.
[[nodiscard]] inline std::vector<std::string> product_supply_violations(const Model& model,
                                                                        const Assignment& assignment) {
  std::vector<std::string> out;
  for (const auto& link : model.supply_links) {
    const auto& row = model.constraints[link.row];
    Rational departures(0);
    for (const auto& term : row.terms)
      if (term.variable != link.g) departures += term.coefficient * value_of(model, assignment, term.variable);
    const Rational capacity = value_of(model, assignment, link.n) * value_of(model, assignment, link.f);
    if (departures > capacity) out.push_back(row.name);
  }
  return out;
}

/// Sets every auxiliary g to n * f, the value the linearization pins it to
/// whenever n and f are within their domains.
inline void complete_auxiliaries(const Model& model, Assignment& assignment) {
  for (const auto& link : model.supply_links) {
    const Rational product = value_of(model, assignment, link.n) * value_of(model, assignment, link.f);
    if (product == Rational(0)) assignment.erase(model.variables[link.g].index);
    else assignment[model.variables[link.g].index] = product;
  }
}

inline std::string to_string(const Rational& r) {
  return r.denominator() == 1 ? std::to_string(r.numerator())
                              : std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

inline const char* to_string(Sense s) {
  switch (s) {
    case Sense::LessEqual: return "<=";
    case Sense::Equal: return "=";
    case Sense::GreaterEqual: return ">=";
  }
  return "?";
}

inline void print_report(std::ostream& os, const ValidationReport& r) {
  os << "feasible: " << (r.feasible ? "yes" : "no") << '\n';
  os << "objective: " << to_string(r.objective) << '\n';
  os << "violated rows: " << r.violated_rows.size() << '\n';
  for (const auto& v : r.violated_rows)
    os << "  " << v.row << ": " << to_string(v.activity) << ' ' << to_string(v.sense) << ' ' << to_string(v.rhs)
       << " (slack " << to_string(v.slack) << ")\n";
  os << "domain violations: " << r.domain_violations.size() << '\n';
  for (const auto& v : r.domain_violations)
    os << "  " << v.variable << " = " << to_string(v.value) << ": " << v.reason << '\n';
}

}  // namespace avpool::milp

#endif  // AVPOOL_MILP_VALIDATE_HPP
