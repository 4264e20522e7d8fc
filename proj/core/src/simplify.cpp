#include "nncpdf/simplify.hpp"

#include <algorithm>
#include <bit>

#include "nncpdf/network.hpp"

namespace nncpdf {

using Mask = std::uint64_t;

void BlockFactorization::add(std::string name, std::vector<std::string> parents) {
  Mask m = 0;
  for (const auto& p : parents) m |= Mask{1} << *find(p);
  auto pos = find(name);
  if (!pos) {
    names_.push_back(std::move(name));
    parents_.push_back(m);
  } else {
    parents_[*pos] = m;
  }
}

std::optional<std::size_t> BlockFactorization::find(const std::string& name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - names_.begin());
}

BlockFactorization BlockFactorization::nncpdf(int N) {
  if (N < 2 || 1 + 4 * (N - 1) + N > 64) throw Error(ErrorKind::InvalidArgument, "unsupported N for block factorization");
  BlockFactorization f;
  auto nm = [](VariableLabel l) { return l.name; };
  for (int k = 1; k <= N; ++k) f.add(nm(x_label(k)), {});
  for (int k = 2; k <= N; ++k) f.add(nm(v_label(k)), {});
  for (int k = 2; k <= N; ++k) f.add(nm(u_label(k)), {});
  for (int k = 1; k <= N; ++k) f.add(nm(y_label(k)), {});
  for (int k = 2; k <= N; ++k) f.add(nm(yhat_label(k)), {});

  // Head in superposition order V_2..V_N, X_1, U_2..U_N, no independence assumed.
  std::vector<std::string> head;
  for (int k = 2; k <= N; ++k) head.push_back(nm(v_label(k)));
  head.push_back(nm(x_label(1)));
  for (int k = 2; k <= N; ++k) head.push_back(nm(u_label(k)));
  for (std::size_t i = 0; i < head.size(); ++i)
    f.add(head[i], std::vector<std::string>(head.begin(), head.begin() + static_cast<std::ptrdiff_t>(i)));

  for (int k = 2; k <= N; ++k) f.add(nm(x_label(k)), {nm(v_label(k))});
  std::vector<std::string> ch;
  for (int k = 1; k <= N; ++k) ch.push_back(nm(x_label(k)));
  for (int j = 1; j <= N; ++j) {
    f.add(nm(y_label(j)), ch);
    ch.push_back(nm(y_label(j)));
  }
  for (int k = 2; k <= N; ++k)
    f.add(nm(yhat_label(k)), {nm(x_label(k)), nm(u_label(k)), nm(v_label(k)), nm(y_label(k))});
  return f;
}

BlockFactorization BlockFactorization::point_to_point() {
  BlockFactorization f;
  f.add("X1", {});
  f.add("Y2", {"X1"});
  return f;
}

bool BlockFactorization::separated(Mask a, Mask b, Mask c) const {
  const std::size_t n = names_.size();
  // Ancestral closure of a, b and c.
  Mask anc = a | b | c;
  for (bool grew = true; grew;) {
    grew = false;
    for (std::size_t i = 0; i < n; ++i)
      if ((anc >> i & 1U) && (parents_[i] & ~anc)) {
        anc |= parents_[i];
        grew = true;
      }
  }
  // Moral graph on the closure.
  std::vector<Mask> adj(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(anc >> i & 1U)) continue;
    const Mask p = parents_[i];
    adj[i] |= p;
    for (std::size_t j = 0; j < n; ++j)
      if (p >> j & 1U) adj[j] |= (Mask{1} << i) | (p & ~(Mask{1} << j));
  }
  Mask seen = a & ~c;
  Mask frontier = seen;
  while (frontier) {
    const auto i = static_cast<std::size_t>(std::countr_zero(frontier));
    frontier &= frontier - 1;
    const Mask next = adj[i] & anc & ~c & ~seen;
    if (next & b) return false;
    seen |= next;
    frontier |= next;
  }
  return !(seen & b);
}

Labeling Labeling::nncpdf(int N, int B) {
  return {BlockFactorization::nncpdf(N), Rational(B), true};
}

Labeling Labeling::point_to_point() { return {BlockFactorization::point_to_point(), Rational(1), false}; }

bool is_message_label(const VariableLabel& l) { return !l.block && (l.name == "M" || l.name == "U0"); }

SimplifiedTerm& SimplifiedTerm::operator+=(const SimplifiedTerm& o) {
  rate_coef += o.rate_coef;
  atoms += o.atoms;
  for (const auto& [k, v] : o.table) table.emplace(k, v);
  return *this;
}

namespace {

Mask to_mask(const LabelSet& ls, const BlockFactorization& f) {
  Mask m = 0;
  for (const auto& l : ls) {
    auto pos = f.find(l.name);
    if (!pos) throw Error(ErrorKind::UnsupportedLabeling, "variable " + l.str() + " is outside the block factorization");
    m |= Mask{1} << *pos;
  }
  return m;
}

LabelSet to_labels(Mask m, const BlockFactorization& f) {
  LabelSet out;
  for (std::size_t i = 0; i < f.names().size(); ++i)
    if (m >> i & 1U) out.emplace_back(f.names()[i]);
  return out;
}

std::vector<Mask> bits(Mask m) {
  std::vector<Mask> out;
  while (m) {
    out.push_back(m & (~m + 1));
    m &= m - 1;
  }
  return out;
}

}  // namespace

std::optional<InfoAtom> canonical_block_atom(const InfoAtom& atom, const BlockFactorization& f) {
  Mask c = to_mask(atom.given, f);
  Mask a = to_mask(atom.left, f) & ~c;
  Mask b = to_mask(atom.right, f) & ~c;
  if (a & b) throw Error(ErrorKind::UnsupportedLabeling, "entropy-like term " + atom.str());

  for (int round = 0; round < 256; ++round) {
    bool changed = false;
    for (int side = 0; side < 2; ++side) {
      Mask& mine = side == 0 ? b : a;
      const Mask other = side == 0 ? a : b;
      for (Mask x : bits(mine)) {
        const Mask rest = mine & ~x;
        if (f.separated(other, x, c | rest)) {
          mine = rest;
          changed = true;
        } else if (rest && f.separated(other, x, c)) {
          mine = rest;
          c |= x;
          changed = true;
        }
        if (!mine) return std::nullopt;
      }
    }
    for (Mask x : bits(c)) {
      const Mask rest = c & ~x;
      const bool via_a = f.separated(a, x, rest) && f.separated(a, x, rest | b);
      const bool via_b = f.separated(b, x, rest) && f.separated(b, x, rest | a);
      if (via_a || via_b) {
        c = rest;
        changed = true;
      }
    }
    if (!changed) break;
  }
  if (std::countr_zero(b) < std::countr_zero(a)) std::swap(a, b);
  return InfoAtom{to_labels(a, f), to_labels(b, f), to_labels(c, f)};
}

SimplifiedTerm simplify_info_term(const InfoAtom& atom, const Labeling& lab) {
  struct Parts {
    LabelSet left, right, given;
  };
  Parts msg;
  std::map<int, Parts> blocks;
  auto sort_into = [&](const LabelSet& ls, LabelSet Parts::*slot) {
    for (const auto& l : ls) {
      if (is_message_label(l)) {
        (msg.*slot).push_back(l);
      } else if (lab.blocked != l.block.has_value()) {
        throw Error(ErrorKind::UnsupportedLabeling, "label " + l.str() + " does not fit the labeling");
      } else {
        (blocks[l.block.value_or(0)].*slot).emplace_back(l.name);
      }
    }
  };
  sort_into(atom.left, &Parts::left);
  sort_into(atom.right, &Parts::right);
  sort_into(atom.given, &Parts::given);

  SimplifiedTerm out;
  // U0 is a copy of M and the pair is independent of every block.
  if (!msg.left.empty() && !msg.right.empty() && msg.given.empty()) out.rate_coef = lab.message_entropy;
  for (const auto& [b, p] : blocks) {
    if (p.left.empty() || p.right.empty()) {
      to_mask(p.left, lab.block);  // still reject unknown names
      to_mask(p.right, lab.block);
      to_mask(p.given, lab.block);
      continue;
    }
    auto c = canonical_block_atom({p.left, p.right, p.given}, lab.block);
    if (!c) continue;
    const auto key = c->str();
    out.atoms.add(key, 1);
    out.table.emplace(key, *c);
  }
  return out;
}

}  // namespace nncpdf
