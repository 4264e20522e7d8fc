#include "nncpdf/fme.hpp"

#include <algorithm>
#include <set>

namespace nncpdf {

namespace {

SymbolicInequality to_less(const SymbolicInequality& q) {
  if (q.sense == Sense::Less) return q;
  SymbolicInequality out = q;
  out.lhs = -q.lhs;
  out.rhs = -q.rhs;
  out.sense = Sense::Less;
  return out;
}

bool leq(const AffineCoef& a, const AffineCoef& b) { return a.c0 <= b.c0 && a.c1 <= b.c1; }

// Every coefficient of a is <= the matching coefficient of b (missing = 0).
bool atomwise_leq(const LinearForm& a, const LinearForm& b) {
  for (const auto& [k, c] : a.terms())
    if (!leq(c, b.coef(k))) return false;
  for (const auto& [k, c] : b.terms())
    if (!leq(a.coef(k), c)) return false;
  return true;
}

bool nonnegative(const LinearForm& f) {
  for (const auto& [k, c] : f.terms())
    if (c.c0 < 0 || c.c1 < 0) return false;
  return true;
}

}  // namespace

SymbolicInequality canonical(const SymbolicInequality& q, const std::vector<std::string>& order) {
  SymbolicInequality out = to_less(q);
  const AffineCoef* lead = nullptr;
  for (const auto& name : order) {
    auto it = out.lhs.terms().find(name);
    if (it != out.lhs.terms().end()) {
      lead = &it->second;
      break;
    }
  }
  if (!lead && !out.lhs.empty()) lead = &out.lhs.terms().begin()->second;
  if (!lead && !out.rhs.empty()) lead = &out.rhs.terms().begin()->second;
  if (!lead || !lead->b_free()) return out;

  const Rational c = lead->c0;
  const bool flip = c < 0 && !out.lhs.empty();
  const Rational scale = Rational(1) / (c < 0 ? Rational(-c) : c);
  out.lhs *= scale;
  out.rhs *= scale;
  if (flip) {
    out.lhs = -out.lhs;
    out.rhs = -out.rhs;
    out.sense = Sense::Greater;
  }
  return out;
}

SymbolicRegion prune_region(const SymbolicRegion& r) {
  SymbolicRegion out;
  out.variables = r.variables;
  out.atoms = r.atoms;

  std::set<std::string> seen;
  std::vector<SymbolicInequality> uniq;
  for (const auto& q : r.inequalities) {
    auto c = canonical(q, r.variables);
    if (c.lhs.empty() && c.sense == Sense::Less && nonnegative(c.rhs)) continue;
    if (seen.insert(format_inequality(c, r.variables)).second) uniq.push_back(std::move(c));
  }

  // Group by (lhs, sense); inside a group a tighter right side makes the
  // other inequality redundant because every atom is nonnegative.
  std::map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < uniq.size(); ++i)
    groups[format_form(uniq[i].lhs, r.variables) + (uniq[i].sense == Sense::Less ? "<" : ">")].push_back(i);

  std::vector<bool> drop(uniq.size(), false);
  for (const auto& [key, idx] : groups) {
    for (std::size_t a : idx) {
      if (drop[a]) continue;
      for (std::size_t b : idx) {
        if (a == b || drop[b]) continue;
        const bool less = uniq[a].sense == Sense::Less;
        // a makes b redundant.
        const bool dominated = less ? atomwise_leq(uniq[a].rhs, uniq[b].rhs)
                                    : atomwise_leq(uniq[b].rhs, uniq[a].rhs);
        if (dominated) drop[b] = true;
      }
    }
  }
  for (std::size_t i = 0; i < uniq.size(); ++i)
    if (!drop[i]) out.inequalities.push_back(std::move(uniq[i]));
  return out;
}

SymbolicRegion eliminate_variable(const SymbolicRegion& r, const std::string& v, const FmeOptions& opt) {
  if (std::find(r.variables.begin(), r.variables.end(), v) == r.variables.end())
    throw Error(ErrorKind::UnknownVariable, "cannot eliminate undeclared variable " + v);

  SymbolicRegion out;
  out.atoms = r.atoms;
  for (const auto& name : r.variables)
    if (name != v) out.variables.push_back(name);

  std::vector<SymbolicInequality> upper, lower;
  for (const auto& q : r.inequalities) {
    auto l = to_less(q);
    const AffineCoef a = l.lhs.coef(v);
    if (a.is_zero()) {
      out.inequalities.push_back(std::move(l));
      continue;
    }
    if (!a.b_free())
      throw Error(ErrorKind::NotAffineInB, "coefficient of " + v + " depends on B; take the limit first");
    (a.c0 > 0 ? upper : lower).push_back(std::move(l));
  }
  const std::size_t total = out.inequalities.size() + upper.size() * lower.size();
  if (total > opt.max_inequalities)
    throw Error(ErrorKind::TooManyInequalities,
                "eliminating " + v + " would produce " + std::to_string(total) + " inequalities (" +
                    std::to_string(upper.size()) + " upper x " + std::to_string(lower.size()) + " lower)");

  for (const auto& p : upper) {
    const Rational ap = p.lhs.coef(v).c0;
    for (const auto& n : lower) {
      const Rational an = -n.lhs.coef(v).c0;
      SymbolicInequality c;
      c.sense = Sense::Less;
      c.lhs = p.lhs * an + n.lhs * ap;
      c.rhs = p.rhs * an + n.rhs * ap;
      c.lhs.erase(v);
      c.origin = p.origin + " & " + n.origin;
      out.inequalities.push_back(std::move(c));
    }
  }
  if (opt.prune) return prune_region(out);
  for (auto& q : out.inequalities) q = canonical(q, out.variables);
  return out;
}

SymbolicRegion project_to_R(const SymbolicRegion& r, const std::vector<std::string>& order,
                            const FmeOptions& opt) {
  std::vector<std::string> todo = order;
  std::vector<std::string> expected;
  for (const auto& v : r.variables)
    if (v != kRateR) expected.push_back(v);
  if (todo.empty()) todo = expected;
  {
    auto a = todo, b = expected;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a != b) throw Error(ErrorKind::InvalidArgument, "elimination order must list every variable except R");
  }
  SymbolicRegion cur = opt.prune ? prune_region(r) : r;
  for (const auto& v : todo) cur = eliminate_variable(cur, v, opt);
  return cur;
}

Interval variable_interval(const SymbolicRegion& r, const std::string& v,
                           const std::map<std::string, double>& rates,
                           const std::map<std::string, double>& atom_values, const FmeOptions& opt,
                           double B) {
  Interval iv;
  for (const auto& q : r.inequalities) {
    const auto l = to_less(q);
    const double a = l.lhs.coef(v).at(B);
    LinearForm rest = l.lhs;
    rest.erase(v);
    const double lhs = rest.evaluate(rates, B);
    const double rhs = l.rhs.evaluate(atom_values, B);
    if (a == 0.0) {
      if (lhs > rhs + opt.tolerance) iv.others_ok = false;
    } else if (a > 0.0) {
      iv.hi = std::min(iv.hi, (rhs - lhs) / a);
    } else {
      iv.lo = std::max(iv.lo, (rhs - lhs) / a);
    }
  }
  return iv;
}

double evaluate_region(const SymbolicRegion& r, const std::map<std::string, double>& atom_values,
                       const FmeOptions& opt, double B) {
  const bool only_r = std::all_of(r.variables.begin(), r.variables.end(),
                                  [](const std::string& v) { return v == kRateR; });
  if (!only_r) return evaluate_region(project_to_R(r, {}, opt), atom_values, opt, B);
  const auto iv = variable_interval(r, kRateR, {}, atom_values, opt, B);
  if (!iv.nonempty(opt.tolerance)) return -std::numeric_limits<double>::infinity();
  return iv.hi;
}

bool contains_point(const SymbolicRegion& r, const std::map<std::string, double>& rates,
                    const std::map<std::string, double>& atom_values, const FmeOptions& opt, double B) {
  for (const auto& q : r.inequalities) {
    const double lhs = q.lhs.evaluate(rates, B);
    const double rhs = q.rhs.evaluate(atom_values, B);
    if (q.sense == Sense::Less ? lhs > rhs + opt.tolerance : lhs < rhs - opt.tolerance) return false;
  }
  return true;
}

}  // namespace nncpdf
