#pragma once

#include <limits>
#include <map>
#include <string>
#include <vector>

#include "nncpdf/symbolic.hpp"

namespace nncpdf {

struct FmeOptions {
  std::size_t max_inequalities = 100'000;
  bool prune = true;
  /// Numeric slack for closure semantics in evaluate_region / contains_point.
  double tolerance = 1e-12;
};

/// Rewrites every inequality as  lhs < rhs  with the leading rate coefficient
/// scaled to +-1 (then flipped to ">" when it was negative).
SymbolicInequality canonical(const SymbolicInequality& q, const std::vector<std::string>& order);

/// Removes syntactic duplicates, atom-wise dominated inequalities and
/// rate-free inequalities whose right side has only nonnegative coefficients.
SymbolicRegion prune_region(const SymbolicRegion& r);

SymbolicRegion eliminate_variable(const SymbolicRegion& r, const std::string& v,
                                  const FmeOptions& opt = {});

/// Eliminates every variable except R, in the given order (default: the
/// region's variable order).
SymbolicRegion project_to_R(const SymbolicRegion& r, const std::vector<std::string>& order = {},
                            const FmeOptions& opt = {});

/// Supremum of R over the closure of the region. Regions with other rate
/// variables are projected first. Returns -inf when empty, +inf when unbounded.
double evaluate_region(const SymbolicRegion& r, const std::map<std::string, double>& atom_values,
                       const FmeOptions& opt = {}, double B = 0.0);

/// Closure membership of a full rate assignment.
bool contains_point(const SymbolicRegion& r, const std::map<std::string, double>& rates,
                    const std::map<std::string, double>& atom_values, const FmeOptions& opt = {},
                    double B = 0.0);

struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  bool others_ok = true;  // inequalities free of v hold at the point
  bool nonempty(double tol = 1e-12) const { return others_ok && lo <= hi + tol; }
};

/// Feasible range of variable v when every other rate is fixed.
Interval variable_interval(const SymbolicRegion& r, const std::string& v,
                           const std::map<std::string, double>& rates,
                           const std::map<std::string, double>& atom_values, const FmeOptions& opt = {},
                           double B = 0.0);

}  // namespace nncpdf
