#include "nncpdf/constraints.hpp"

#include <algorithm>
#include <set>

namespace nncpdf {

namespace {

std::vector<int> set_union(const std::vector<int>& a, const std::vector<int>& b) {
  std::set<int> s(a.begin(), a.end());
  s.insert(b.begin(), b.end());
  return {s.begin(), s.end()};
}

std::vector<int> set_minus(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  for (int x : a)
    if (std::find(b.begin(), b.end(), x) == b.end()) out.push_back(x);
  return out;
}

bool contains(const std::vector<int>& a, int x) { return std::find(a.begin(), a.end(), x) != a.end(); }

std::vector<int> normalized(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

const OmegaNode& node_at(const OmegaParameters& w, std::size_t node) {
  if (node >= w.nodes.size()) throw Error(ErrorKind::IndexOutOfRange, "node position " + std::to_string(node));
  return w.nodes[node];
}

LinearForm rate_sum(const OmegaParameters& w, const std::vector<int>& idx) {
  LinearForm f;
  for (int i : idx) {
    const auto& name = w.index_rate[static_cast<std::size_t>(i)];
    if (!name.empty()) f.add(name, 1);
  }
  return f;
}

// I(U_j ; U_{others} , observed | U_{A_j}) with overlaps removed.
InfoAtom codebook_atom(const OmegaParameters& w, int j, const std::vector<int>& others, const LabelSet& observed) {
  const auto& cb = w.codebooks[static_cast<std::size_t>(j)];
  InfoAtom a;
  a.left = {cb.label};
  a.given = w.labels_of(cb.A);
  auto skip = [&](const VariableLabel& l) {
    return l == cb.label || std::find(a.given.begin(), a.given.end(), l) != a.given.end() ||
           std::find(a.right.begin(), a.right.end(), l) != a.right.end();
  };
  for (int o : others) {
    const auto& l = w.codebooks[static_cast<std::size_t>(o)].label;
    if (!skip(l)) a.right.push_back(l);
  }
  for (const auto& l : observed)
    if (!skip(l)) a.right.push_back(l);
  return a;
}

std::vector<int> before(const std::vector<int>& set, int j) {
  std::vector<int> out;
  for (int x : set)
    if (x < j) out.push_back(x);
  return out;
}

void check_indices(const OmegaParameters& w, const std::vector<int>& idx) {
  for (int i : idx)
    if (i < 0 || static_cast<std::size_t>(i) >= w.mu())
      throw Error(ErrorKind::IndexOutOfRange, "index position " + std::to_string(i));
}

}  // namespace

std::string RawConstraint::str(const OmegaParameters& w) const {
  std::string s = "(" + std::to_string(k) + "," + std::to_string(b) + ") ";
  s += kind == ConstraintKind::Decoding ? "dec {" : "cmp {";
  for (std::size_t i = 0; i < index_set.size(); ++i)
    s += (i ? "," : "") + w.indices[static_cast<std::size_t>(index_set[i])].str();
  s += "}: " + format_form(rates) + (kind == ConstraintKind::Decoding ? " < " : " > ");
  if (atoms.empty()) s += "0";
  for (std::size_t i = 0; i < atoms.size(); ++i) s += (i ? " + " : "") + atoms[i].str();
  return s;
}

std::vector<int> decoded_indices(const OmegaParameters& w, const OmegaNode& n) { return w.gamma_of(n.D); }

std::vector<int> nonunique_indices(const OmegaParameters& w, const OmegaNode& n) {
  return set_minus(w.gamma_of(n.Bn), w.gamma_of(n.D));
}

std::vector<int> covering_indices(const OmegaParameters& w, const OmegaNode& n) {
  return set_minus(w.gamma_of(n.W), w.gamma_of(n.D));
}

std::vector<int> observed_indices(const OmegaParameters& w, const OmegaNode& n) {
  std::vector<int> cbs;
  for (std::size_t j = 0; j < w.codebooks.size(); ++j)
    if (std::find(n.observed.begin(), n.observed.end(), w.codebooks[j].label) != n.observed.end())
      cbs.push_back(static_cast<int>(j));
  return w.gamma_of(cbs);
}

std::vector<int> touched_codebooks(const OmegaParameters& w, const OmegaNode& n, const std::vector<int>& sbar) {
  std::vector<int> out;
  for (int j : set_union(n.D, n.Bn)) {
    const auto& g = w.codebooks[static_cast<std::size_t>(j)].gamma;
    if (std::any_of(g.begin(), g.end(), [&](int i) { return contains(sbar, i); })) out.push_back(j);
  }
  return out;
}

std::vector<int> determined_codebooks(const OmegaParameters& w, const OmegaNode& n,
                                      const std::vector<int>& tbar) {
  const auto known = set_union(tbar, decoded_indices(w, n));
  std::vector<int> out;
  for (int j : normalized(n.W)) {
    const auto& g = w.codebooks[static_cast<std::size_t>(j)].gamma;
    if (std::all_of(g.begin(), g.end(), [&](int i) { return contains(known, i); })) out.push_back(j);
  }
  return out;
}

RawConstraint reduce_decoding(const OmegaParameters& w, std::size_t node, std::vector<int> sbar,
                              std::vector<int> s_prime) {
  const auto& n = node_at(w, node);
  sbar = normalized(std::move(sbar));
  s_prime = normalized(std::move(s_prime));
  check_indices(w, sbar);
  const auto pool = set_union(decoded_indices(w, n), nonunique_indices(w, n));
  const auto dbar = decoded_indices(w, n);
  for (int i : sbar)
    if (!contains(pool, i)) throw Error(ErrorKind::InvalidArgument, "decoding set leaves the node's indices");
  if (std::none_of(sbar.begin(), sbar.end(), [&](int i) { return contains(dbar, i); }))
    throw Error(ErrorKind::InvalidArgument, "decoding set must meet the uniquely decoded indices");

  const auto S = touched_codebooks(w, n, sbar);
  const auto DB = set_union(n.D, n.Bn);
  const auto Sc = set_minus(DB, S);
  for (int j : s_prime)
    if (!contains(S, j))
      throw Error(ErrorKind::SideConditionViolated, w.codebooks[static_cast<std::size_t>(j)].label.str() +
                                                        " is not touched by the decoding set");
  const auto dropped = set_minus(S, s_prime);
  for (int j : dropped) {
    const auto allowed = set_union(before(dropped, j), Sc);
    for (int a : w.codebooks[static_cast<std::size_t>(j)].A)
      if (!contains(allowed, a))
        throw Error(ErrorKind::SideConditionViolated,
                    "superposition base " + w.codebooks[static_cast<std::size_t>(a)].label.str() + " of dropped " +
                        w.codebooks[static_cast<std::size_t>(j)].label.str() + " is still unknown");
  }

  RawConstraint c;
  c.k = n.k;
  c.b = n.b;
  c.kind = ConstraintKind::Decoding;
  c.index_set = sbar;
  c.codebooks = s_prime;
  c.rates = rate_sum(w, sbar);
  const auto complement = set_minus(DB, s_prime);
  for (int j : s_prime) c.atoms.push_back(codebook_atom(w, j, set_union(before(s_prime, j), complement), n.observed));
  return c;
}

RawConstraint decoding_constraint(const OmegaParameters& w, std::size_t node, std::vector<int> sbar) {
  const auto& n = node_at(w, node);
  sbar = normalized(std::move(sbar));
  check_indices(w, sbar);
  return reduce_decoding(w, node, sbar, touched_codebooks(w, n, sbar));
}

RawConstraint reduce_compression(const OmegaParameters& w, std::size_t node, std::vector<int> tbar,
                                 std::vector<int> t_prime) {
  const auto& n = node_at(w, node);
  tbar = normalized(std::move(tbar));
  t_prime = normalized(std::move(t_prime));
  check_indices(w, tbar);
  if (tbar.empty()) throw Error(ErrorKind::InvalidArgument, "compression set must be nonempty");
  const auto wbar = covering_indices(w, n);
  for (int i : tbar)
    if (!contains(wbar, i)) throw Error(ErrorKind::InvalidArgument, "compression set leaves the covering indices");
  const auto T = determined_codebooks(w, n, tbar);
  for (int j : T)
    if (!contains(t_prime, j))
      throw Error(ErrorKind::SideConditionViolated,
                  w.codebooks[static_cast<std::size_t>(j)].label.str() + " must stay in the compression sum");
  for (int j : t_prime)
    if (!contains(n.W, j))
      throw Error(ErrorKind::SideConditionViolated,
                  w.codebooks[static_cast<std::size_t>(j)].label.str() + " is not covered at this node");

  RawConstraint c;
  c.k = n.k;
  c.b = n.b;
  c.kind = ConstraintKind::Compression;
  c.index_set = tbar;
  c.codebooks = t_prime;
  c.rates = rate_sum(w, tbar);
  for (int j : t_prime) c.atoms.push_back(codebook_atom(w, j, set_union(before(t_prime, j), n.D), n.observed));
  return c;
}

RawConstraint compression_constraint(const OmegaParameters& w, std::size_t node, std::vector<int> tbar) {
  const auto& n = node_at(w, node);
  tbar = normalized(std::move(tbar));
  check_indices(w, tbar);
  return reduce_compression(w, node, tbar, determined_codebooks(w, n, tbar));
}

std::vector<RawConstraint> generate_constraints(const OmegaParameters& w, std::size_t node,
                                                const GenerateOptions& opt) {
  const auto& n = node_at(w, node);
  const auto dbar = decoded_indices(w, n);
  auto pool = set_union(dbar, nonunique_indices(w, n));
  if (opt.drop_redundant) pool = set_minus(pool, observed_indices(w, n));
  const auto wbar = covering_indices(w, n);

  auto too_many = [&](std::size_t bits) {
    return bits >= 63 || (std::size_t{1} << bits) > opt.max_subsets;
  };
  if (too_many(pool.size()) || too_many(wbar.size()))
    throw Error(ErrorKind::SearchSpaceTooLarge, "node (" + std::to_string(n.k) + "," + std::to_string(n.b) +
                                                    ") has " + std::to_string(pool.size()) + " decoding and " +
                                                    std::to_string(wbar.size()) + " covering indices");

  std::vector<RawConstraint> out;
  for (std::size_t mask = 1; mask < (std::size_t{1} << pool.size()); ++mask) {
    std::vector<int> s;
    for (std::size_t i = 0; i < pool.size(); ++i)
      if (mask >> i & 1U) s.push_back(pool[i]);
    if (std::none_of(s.begin(), s.end(), [&](int i) { return contains(dbar, i); })) continue;
    out.push_back(decoding_constraint(w, node, s));
  }
  for (std::size_t mask = 1; mask < (std::size_t{1} << wbar.size()); ++mask) {
    std::vector<int> t;
    for (std::size_t i = 0; i < wbar.size(); ++i)
      if (mask >> i & 1U) t.push_back(wbar[i]);
    out.push_back(compression_constraint(w, node, t));
  }
  return out;
}

}  // namespace nncpdf
