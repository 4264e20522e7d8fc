#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "nncpdf/probability.hpp"

namespace nncpdf {

using Rational = boost::multiprecision::cpp_rational;

inline const std::string kRateR = "R";

/// c0 + c1 * B, exact.
struct AffineCoef {
  Rational c0 = 0;
  Rational c1 = 0;

  AffineCoef() = default;
  AffineCoef(Rational a) : c0(std::move(a)) {}  // NOLINT: implicit on purpose
  AffineCoef(int a) : c0(a) {}                  // NOLINT
  AffineCoef(Rational a, Rational b) : c0(std::move(a)), c1(std::move(b)) {}

  static AffineCoef B() { return {Rational(0), Rational(1)}; }

  bool is_zero() const { return c0 == 0 && c1 == 0; }
  bool b_free() const { return c1 == 0; }
  Rational at(const Rational& b) const { return c0 + c1 * b; }
  double at(double b) const;

  AffineCoef& operator+=(const AffineCoef& o);
  AffineCoef& operator-=(const AffineCoef& o);
  AffineCoef& operator*=(const Rational& r);
  friend AffineCoef operator+(AffineCoef a, const AffineCoef& b) { return a += b; }
  friend AffineCoef operator-(AffineCoef a, const AffineCoef& b) { return a -= b; }
  friend AffineCoef operator*(AffineCoef a, const Rational& r) { return a *= r; }
  AffineCoef operator-() const { return {-c0, -c1}; }
  friend bool operator==(const AffineCoef&, const AffineCoef&) = default;

  std::string str() const;
};

/// Sparse linear combination of named symbols; zero coefficients are never stored.
class LinearForm {
 public:
  using Map = std::map<std::string, AffineCoef>;

  LinearForm() = default;
  LinearForm(std::initializer_list<std::pair<const std::string, AffineCoef>> init);

  void add(const std::string& name, const AffineCoef& c);
  AffineCoef coef(const std::string& name) const;
  void erase(const std::string& name) { terms_.erase(name); }
  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  const Map& terms() const { return terms_; }

  LinearForm& operator+=(const LinearForm& o);
  LinearForm& operator*=(const Rational& r);
  LinearForm& operator*=(const AffineCoef& c);  // requires one side B-free
  friend LinearForm operator+(LinearForm a, const LinearForm& b) { return a += b; }
  friend LinearForm operator*(LinearForm a, const Rational& r) { return a *= r; }
  LinearForm operator-() const;
  friend bool operator==(const LinearForm&, const LinearForm&) = default;

  bool b_free() const;
  /// Numeric value; every symbol must be present in `values`.
  double evaluate(const std::map<std::string, double>& values, double B = 0.0) const;

 private:
  Map terms_;
};

enum class Sense { Less, Greater };

/// lhs (rates) sense rhs (information atoms).
struct SymbolicInequality {
  LinearForm lhs;
  Sense sense = Sense::Less;
  LinearForm rhs;
  std::string origin;  // free-form provenance inside the derivation (not printed)

  bool operator==(const SymbolicInequality& o) const {
    return lhs == o.lhs && sense == o.sense && rhs == o.rhs;
  }
};

struct SymbolicRegion {
  std::vector<std::string> variables;
  std::vector<SymbolicInequality> inequalities;
  std::map<std::string, InfoAtom> atoms;

  /// Adds every atom named in the inequalities and checks names.
  void check() const;
};

std::string format_form(const LinearForm& f, const std::vector<std::string>& order = {});
std::string format_inequality(const SymbolicInequality& q, const std::vector<std::string>& order = {});
std::string format_region(const SymbolicRegion& r);

InfoAtom parse_atom(const std::string& text);
SymbolicInequality parse_inequality(const std::string& line);
SymbolicRegion parse_region(const std::string& text);

/// Rate-variable names used by the derivation.
std::string rate_name_r0();
std::string rate_name_r1();
std::string rate_name_rk(int k);
std::string rate_name_rpk(int k);

}  // namespace nncpdf
