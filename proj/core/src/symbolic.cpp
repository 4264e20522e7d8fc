#include "nncpdf/symbolic.hpp"

#include <cctype>
#include <sstream>

namespace nncpdf {

double AffineCoef::at(double b) const {
  return c0.convert_to<double>() + c1.convert_to<double>() * b;
}

AffineCoef& AffineCoef::operator+=(const AffineCoef& o) {
  c0 += o.c0;
  c1 += o.c1;
  return *this;
}

AffineCoef& AffineCoef::operator-=(const AffineCoef& o) {
  c0 -= o.c0;
  c1 -= o.c1;
  return *this;
}

AffineCoef& AffineCoef::operator*=(const Rational& r) {
  c0 *= r;
  c1 *= r;
  return *this;
}

namespace {

std::string rat_str(const Rational& r) { return r.str(); }

std::string b_multiple(const Rational& c1) {
  if (c1 == 1) return "B";
  if (c1 == -1) return "-B";
  return rat_str(c1) + "*B";
}

}  // namespace

std::string AffineCoef::str() const {
  if (c1 == 0) return rat_str(c0);
  if (c0 == 0) return b_multiple(c1);
  std::string s = "(" + rat_str(c0);
  if (c1 > 0) s += "+";
  s += b_multiple(c1);
  return s + ")";
}

LinearForm::LinearForm(std::initializer_list<std::pair<const std::string, AffineCoef>> init) {
  for (const auto& [k, v] : init) add(k, v);
}

void LinearForm::add(const std::string& name, const AffineCoef& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(name, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

AffineCoef LinearForm::coef(const std::string& name) const {
  auto it = terms_.find(name);
  return it == terms_.end() ? AffineCoef{} : it->second;
}

LinearForm& LinearForm::operator+=(const LinearForm& o) {
  for (const auto& [k, v] : o.terms_) add(k, v);
  return *this;
}

LinearForm& LinearForm::operator*=(const Rational& r) {
  if (r == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [k, v] : terms_) v *= r;
  return *this;
}

LinearForm& LinearForm::operator*=(const AffineCoef& c) {
  Map out;
  for (const auto& [k, v] : terms_) {
    if (v.c1 != 0 && c.c1 != 0)
      throw Error(ErrorKind::NotAffineInB, "product of two B-dependent coefficients");
    AffineCoef p{v.c0 * c.c0, v.c0 * c.c1 + v.c1 * c.c0};
    if (!p.is_zero()) out.emplace(k, p);
  }
  terms_ = std::move(out);
  return *this;
}

LinearForm LinearForm::operator-() const {
  LinearForm f = *this;
  f *= Rational(-1);
  return f;
}

bool LinearForm::b_free() const {
  for (const auto& [k, v] : terms_)
    if (!v.b_free()) return false;
  return true;
}

double LinearForm::evaluate(const std::map<std::string, double>& values, double B) const {
  double s = 0.0;
  for (const auto& [k, v] : terms_) {
    auto it = values.find(k);
    if (it == values.end()) throw Error(ErrorKind::UnassignedAtom, "no value for " + k);
    s += v.at(B) * it->second;
  }
  return s;
}

void SymbolicRegion::check() const {
  for (const auto& q : inequalities) {
    for (const auto& [name, c] : q.lhs.terms())
      if (std::find(variables.begin(), variables.end(), name) == variables.end())
        throw Error(ErrorKind::UnknownVariable, "rate variable " + name + " is not declared");
    for (const auto& [name, c] : q.rhs.terms())
      if (!atoms.contains(name)) throw Error(ErrorKind::UnknownVariable, "atom " + name + " is not declared");
  }
}

std::string format_form(const LinearForm& f, const std::vector<std::string>& order) {
  if (f.empty()) return "0";
  std::vector<std::pair<std::string, AffineCoef>> terms;
  for (const auto& name : order)
    if (auto c = f.coef(name); !c.is_zero()) terms.emplace_back(name, c);
  for (const auto& [name, c] : f.terms())
    if (std::find(order.begin(), order.end(), name) == order.end()) terms.emplace_back(name, c);

  std::string out;
  bool first = true;
  for (const auto& [name, c] : terms) {
    bool negative = false;
    std::string factor;
    if (c.b_free() || c.c0 == 0) {
      const Rational& lead = c.b_free() ? c.c0 : c.c1;
      negative = lead < 0;
      const Rational mag = negative ? Rational(-lead) : lead;
      if (c.b_free())
        factor = mag == 1 ? "" : rat_str(mag) + "*";
      else
        factor = mag == 1 ? "B*" : rat_str(mag) + "*B*";
    } else {
      factor = c.str() + "*";
    }
    if (first)
      out += negative ? "-" : "";
    else
      out += negative ? " - " : " + ";
    out += factor + name;
    first = false;
  }
  return out;
}

std::string format_inequality(const SymbolicInequality& q, const std::vector<std::string>& order) {
  return format_form(q.lhs, order) + (q.sense == Sense::Less ? " < " : " > ") + format_form(q.rhs);
}

std::string format_region(const SymbolicRegion& r) {
  std::string out = "# variables:";
  for (const auto& v : r.variables) out += " " + v;
  out += "\n";
  for (const auto& q : r.inequalities) out += format_inequality(q, r.variables) + "\n";
  return out;
}

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

// Splits at top-level occurrences of any character in `seps`, keeping the
// separator at the start of each following piece.
std::vector<std::string> split_top(const std::string& s, const std::string& seps, bool keep_sep) {
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  for (char ch : s) {
    if (ch == '(' || ch == '[') ++depth;
    if (ch == ')' || ch == ']') --depth;
    if (depth == 0 && seps.find(ch) != std::string::npos) {
      out.push_back(cur);
      cur = keep_sep ? std::string(1, ch) : std::string();
      continue;
    }
    cur += ch;
  }
  if (depth != 0) throw Error(ErrorKind::ParseError, "unbalanced brackets in '" + s + "'");
  out.push_back(cur);
  return out;
}

bool is_number(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c)) && c != '/') return false;
  return true;
}

Rational parse_rational(const std::string& s) {
  try {
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rational(boost::multiprecision::cpp_int(s));
    return Rational(boost::multiprecision::cpp_int(s.substr(0, slash)),
                    boost::multiprecision::cpp_int(s.substr(slash + 1)));
  } catch (const std::exception&) {
    throw Error(ErrorKind::ParseError, "bad number '" + s + "'");
  }
}

AffineCoef multiply(const AffineCoef& a, const AffineCoef& b) {
  if (a.c1 != 0 && b.c1 != 0) throw Error(ErrorKind::NotAffineInB, "coefficient is quadratic in B");
  return {a.c0 * b.c0, a.c0 * b.c1 + a.c1 * b.c0};
}

// Parses a signed sum; each term yields a coefficient and an optional name.
std::vector<std::pair<AffineCoef, std::string>> parse_terms(const std::string& text);

AffineCoef parse_factor(const std::string& f) {
  if (f == "B") return AffineCoef::B();
  if (is_number(f)) return AffineCoef(parse_rational(f));
  if (f.size() >= 2 && f.front() == '(' && f.back() == ')') {
    AffineCoef sum;
    for (const auto& [c, name] : parse_terms(f.substr(1, f.size() - 2))) {
      if (!name.empty()) throw Error(ErrorKind::ParseError, "symbol inside coefficient '" + f + "'");
      sum += c;
    }
    return sum;
  }
  throw Error(ErrorKind::ParseError, "bad coefficient factor '" + f + "'");
}

std::vector<std::pair<AffineCoef, std::string>> parse_terms(const std::string& text) {
  std::vector<std::pair<AffineCoef, std::string>> out;
  for (auto piece : split_top(text, "+-", true)) {
    piece = trim(piece);
    if (piece.empty()) continue;
    Rational sign = 1;
    while (!piece.empty() && (piece[0] == '+' || piece[0] == '-')) {
      if (piece[0] == '-') sign = -sign;
      piece = trim(piece.substr(1));
    }
    if (piece.empty()) throw Error(ErrorKind::ParseError, "dangling sign in '" + text + "'");
    AffineCoef coef(sign);
    std::string name;
    for (auto f : split_top(piece, "*", false)) {
      f = trim(f);
      const bool coefficient = f == "B" || is_number(f) || (!f.empty() && f.front() == '(');
      if (coefficient) {
        if (!name.empty()) throw Error(ErrorKind::ParseError, "coefficient after symbol in '" + piece + "'");
        coef = multiply(coef, parse_factor(f));
      } else {
        if (!name.empty() || f.empty()) throw Error(ErrorKind::ParseError, "bad term '" + piece + "'");
        name = f;
      }
    }
    out.emplace_back(coef, name);
  }
  return out;
}

LinearForm parse_form(const std::string& text) {
  LinearForm f;
  for (const auto& [c, name] : parse_terms(text)) {
    if (name.empty()) {
      if (!c.is_zero()) throw Error(ErrorKind::ParseError, "nonzero constant in '" + text + "'");
      continue;
    }
    f.add(name, c);
  }
  return f;
}

LabelSet parse_labels(const std::string& s) {
  LabelSet out;
  if (trim(s).empty()) return out;
  for (auto item : split_top(s, ",", false)) {
    item = trim(item);
    auto br = item.find('[');
    if (br == std::string::npos) {
      out.emplace_back(item);
      continue;
    }
    if (item.back() != ']') throw Error(ErrorKind::ParseError, "bad label '" + item + "'");
    const auto block = item.substr(br + 1, item.size() - br - 2);
    if (!is_number(block) || block.find('/') != std::string::npos)
      throw Error(ErrorKind::ParseError, "bad block in '" + item + "'");
    out.emplace_back(item.substr(0, br), std::stoi(block));
  }
  return out;
}

}  // namespace

InfoAtom parse_atom(const std::string& text) {
  const auto t = trim(text);
  if (t.size() < 4 || t.rfind("I(", 0) != 0 || t.back() != ')')
    throw Error(ErrorKind::ParseError, "not an atom: '" + text + "'");
  const auto body = t.substr(2, t.size() - 3);
  const auto semi = body.find(';');
  if (semi == std::string::npos) throw Error(ErrorKind::ParseError, "atom without ';': '" + text + "'");
  const auto rest = body.substr(semi + 1);
  const auto bar = rest.find('|');
  InfoAtom a;
  a.left = parse_labels(body.substr(0, semi));
  a.right = parse_labels(bar == std::string::npos ? rest : rest.substr(0, bar));
  if (bar != std::string::npos) a.given = parse_labels(rest.substr(bar + 1));
  if (a.left.empty() || a.right.empty()) throw Error(ErrorKind::ParseError, "empty side in '" + text + "'");
  return a;
}

SymbolicInequality parse_inequality(const std::string& line) {
  std::size_t pos = std::string::npos;
  int depth = 0;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (c == '(' || c == '[') ++depth;
    if (c == ')' || c == ']') --depth;
    if (depth == 0 && (c == '<' || c == '>')) {
      if (pos != std::string::npos) throw Error(ErrorKind::ParseError, "two relations in '" + line + "'");
      pos = i;
    }
  }
  if (pos == std::string::npos) throw Error(ErrorKind::ParseError, "no relation in '" + line + "'");
  SymbolicInequality q;
  q.sense = line[pos] == '<' ? Sense::Less : Sense::Greater;
  q.lhs = parse_form(line.substr(0, pos));
  q.rhs = parse_form(line.substr(pos + 1));
  return q;
}

SymbolicRegion parse_region(const std::string& text) {
  SymbolicRegion r;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty()) continue;
    if (line[0] == '#') {
      const std::string tag = "# variables:";
      if (line.rfind(tag, 0) == 0) {
        std::istringstream vs(line.substr(tag.size()));
        std::string v;
        while (vs >> v) r.variables.push_back(v);
      }
      continue;
    }
    auto q = parse_inequality(line);
    for (const auto& [name, c] : q.rhs.terms())
      if (!r.atoms.contains(name)) r.atoms.emplace(name, parse_atom(name));
    for (const auto& [name, c] : q.lhs.terms())
      if (std::find(r.variables.begin(), r.variables.end(), name) == r.variables.end())
        r.variables.push_back(name);
    r.inequalities.push_back(std::move(q));
  }
  return r;
}

std::string rate_name_r0() { return "r0"; }
std::string rate_name_r1() { return "r1"; }
std::string rate_name_rk(int k) { return "r" + std::to_string(k); }
std::string rate_name_rpk(int k) { return "r'" + std::to_string(k); }

}  // namespace nncpdf
