#include "nncpdf/pipeline.hpp"

#include <algorithm>

#include "nncpdf/rate_bound.hpp"
#include "nncpdf/unfolding.hpp"

namespace nncpdf {

namespace {

using K = IndexId::Kind;

std::vector<int> subset_of(const std::vector<int>& items, std::size_t mask) {
  std::vector<int> out;
  for (std::size_t i = 0; i < items.size(); ++i)
    if (mask >> i & 1U) out.push_back(items[i]);
  return out;
}

std::vector<int> relays(int N) {
  std::vector<int> r;
  for (int k = 2; k <= N; ++k) r.push_back(k);
  return r;
}

SymbolicInequality greater_than_zero(const std::string& rate, const std::string& origin) {
  SymbolicInequality q;
  q.lhs.add(rate, 1);
  q.sense = Sense::Greater;
  q.origin = origin;
  return q;
}

std::vector<std::string> keys_of(const std::vector<FamilyConstraint>& f) {
  std::vector<std::string> k;
  for (const auto& c : f) k.push_back(c.key);
  return k;
}

}  // namespace

SymbolicInequality to_symbolic(const RawConstraint& c, const Labeling& lab, std::map<std::string, InfoAtom>& table) {
  SimplifiedTerm sum;
  for (const auto& a : c.atoms) sum += simplify_info_term(a, lab);
  SymbolicInequality q;
  q.lhs = c.rates;
  if (sum.rate_coef != 0) q.lhs.add(kRateR, AffineCoef(Rational(-sum.rate_coef)));
  q.sense = c.sense();
  q.rhs = sum.atoms;
  for (auto& [k, v] : sum.table) table.emplace(k, v);
  q.origin = "node (" + std::to_string(c.k) + "," + std::to_string(c.b) + ")";
  return q;
}

std::vector<FamilyConstraint> nncpdf_family_constraints(const OmegaParameters& w, const Labeling& lab,
                                                        std::map<std::string, InfoAtom>& table) {
  const int N = w.N;
  const int B = w.B;
  std::vector<FamilyConstraint> out;
  auto emit = [&](std::string key, const RawConstraint& c) {
    out.push_back({std::move(key), to_symbolic(c, lab, table)});
  };
  auto idx = [&](K kind, int k, int b) { return w.index_of({kind, k, b}); };
  const auto rel = relays(N);

  // Source covering at (1,1), block-uniform index sets.
  const std::size_t src = w.node_position(1, 1);
  for (int with_l0 = 0; with_l0 <= 1; ++with_l0) {
    for (int with_l1 = 0; with_l1 <= 1; ++with_l1) {
      for (std::size_t mask = 0; mask < (std::size_t{1} << rel.size()); ++mask) {
        const auto S = subset_of(rel, mask);
        std::vector<int> tbar;
        if (with_l0) tbar.push_back(idx(K::L0, 1, 0));
        if (with_l1)
          for (int b = 1; b <= B; ++b) tbar.push_back(idx(K::Source, 1, b));
        for (int k : S)
          for (int b = 0; b <= B; ++b) tbar.push_back(idx(K::Aux, k, b));
        if (tbar.empty()) continue;
        emit("source l0=" + std::to_string(with_l0) + " l1=" + std::to_string(with_l1) + " S=" + format_set(S),
             compression_constraint(w, src, tbar));
      }
    }
  }
  {
    // All auxiliary indices without l0, summed as if every X_{1,b} were covered too.
    std::vector<int> tbar;
    for (int b = 1; b <= B; ++b) tbar.push_back(idx(K::Source, 1, b));
    for (int k : rel)
      for (int b = 0; b <= B; ++b) tbar.push_back(idx(K::Aux, k, b));
    auto tprime = determined_codebooks(w, w.nodes[src], tbar);
    for (int b = 1; b <= B; ++b) tprime.push_back(w.codebook_of({"X1", b}));
    emit("source reduced", reduce_compression(w, src, tbar, tprime));
  }

  for (int b = 2; b <= B; ++b)
    if (!generate_constraints(w, w.node_position(1, b)).empty())
      throw Error(ErrorKind::UnsupportedLabeling, "source node in block " + std::to_string(b) + " has active bounds");

  for (int k : rel) {
    const auto init = generate_constraints(w, w.node_position(k, 1));
    for (std::size_t i = 0; i < init.size(); ++i) {
      auto q = to_symbolic(init[i], lab, table);
      if (init[i].kind == ConstraintKind::Decoding || !q.rhs.empty())
        throw Error(ErrorKind::UnsupportedLabeling, "relay " + std::to_string(k) + " has an active first-block bound");
      out.push_back({"init " + std::to_string(k) + "#" + std::to_string(i), std::move(q)});
    }
    std::vector<std::string> reference;
    for (int b = 2; b <= B; ++b) {
      const auto raw = generate_constraints(w, w.node_position(k, b));
      std::vector<std::string> texts;
      for (std::size_t i = 0; i < raw.size(); ++i) {
        auto q = to_symbolic(raw[i], lab, table);
        texts.push_back(format_inequality(q));
        if (b == 2) out.push_back({"relay " + std::to_string(k) + "#" + std::to_string(i), std::move(q)});
      }
      if (b == 2) reference = texts;
      else if (texts != reference)
        throw Error(ErrorKind::UnsupportedLabeling,
                    "relay " + std::to_string(k) + " bounds in block " + std::to_string(b) + " differ from block 2");
    }
  }

  for (int d : rel) {
    const auto& dn = w.node(d, B + 1);
    if (dn.D.empty()) continue;  // not a destination
    const std::size_t pos = w.node_position(d, B + 1);
    for (const auto& cut : enumerate_cuts(N, d)) {
      std::vector<int> sbar{idx(K::L0, 1, 0)};
      for (int b = 1; b <= B - 1; ++b) sbar.push_back(idx(K::Source, 1, b));
      for (int k : cut.S)
        for (int b = 0; b <= B - 1; ++b) sbar.push_back(idx(K::Aux, k, b));
      for (int k : cut.T)
        for (int b = 0; b <= B - 1; ++b) sbar.push_back(idx(K::Cover, k, b));
      emit("destination " + cut.str(), decoding_constraint(w, pos, sbar));
    }
  }

  out.push_back({"nonneg r1", greater_than_zero(rate_name_r1(), "nonnegativity")});
  for (int k : rel) out.push_back({"nonneg r" + std::to_string(k), greater_than_zero(rate_name_rk(k), "nonnegativity")});
  for (int k : rel) out.push_back({"nonneg r'" + std::to_string(k), greater_than_zero(rate_name_rpk(k), "nonnegativity")});
  return out;
}

SymbolicRegion fit_affine(const std::vector<int>& blocks, const std::vector<std::vector<FamilyConstraint>>& families,
                          const std::vector<std::string>& variables, const std::map<std::string, InfoAtom>& table) {
  if (blocks.size() < 2 || blocks.size() != families.size())
    throw Error(ErrorKind::InvalidArgument, "affine fit needs at least two block counts");
  const auto keys = keys_of(families[0]);
  for (const auto& f : families)
    if (keys_of(f) != keys) throw Error(ErrorKind::NotAffineInB, "constraint families change with B");

  const Rational b0(blocks[0]);
  const Rational b1(blocks[1]);
  auto fit_form = [&](std::size_t i, bool left) {
    auto form_at = [&](std::size_t fam) -> const LinearForm& {
      const auto& q = families[fam][i].inequality;
      return left ? q.lhs : q.rhs;
    };
    std::vector<std::string> names;
    for (std::size_t fam = 0; fam < families.size(); ++fam)
      for (const auto& [n, c] : form_at(fam).terms()) {
        if (!c.b_free()) throw Error(ErrorKind::NotAffineInB, "concrete-B constraint already depends on B");
        names.push_back(n);
      }
    std::sort(names.begin(), names.end());
    names.erase(std::unique(names.begin(), names.end()), names.end());
    LinearForm out;
    for (const auto& n : names) {
      const Rational v0 = form_at(0).coef(n).c0;
      const Rational v1 = form_at(1).coef(n).c0;
      const Rational c1 = (v1 - v0) / (b1 - b0);
      const Rational c0 = v0 - c1 * b0;
      for (std::size_t fam = 2; fam < families.size(); ++fam)
        if (c0 + c1 * Rational(blocks[fam]) != form_at(fam).coef(n).c0)
          throw Error(ErrorKind::NotAffineInB, "coefficient of " + n + " in " + families[0][i].key +
                                                   " is not affine in B");
      out.add(n, AffineCoef(c0, c1));
    }
    return out;
  };

  SymbolicRegion r;
  r.variables = variables;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    for (const auto& f : families)
      if (f[i].inequality.sense != families[0][i].inequality.sense)
        throw Error(ErrorKind::NotAffineInB, "sense of " + keys[i] + " changes with B");
    SymbolicInequality q;
    q.sense = families[0][i].inequality.sense;
    q.lhs = fit_form(i, true);
    q.rhs = fit_form(i, false);
    q.origin = keys[i];
    for (const auto& [n, c] : q.rhs.terms()) r.atoms.emplace(n, table.at(n));
    r.inequalities.push_back(std::move(q));
  }
  r.check();
  return r;
}

SymbolicRegion asymptotic_system(const SymbolicRegion& in) {
  const std::string r0 = rate_name_r0();
  SymbolicRegion out;
  for (const auto& v : in.variables)
    if (v != r0) out.variables.push_back(v);
  if (std::find(out.variables.begin(), out.variables.end(), kRateR) == out.variables.end())
    out.variables.insert(out.variables.begin(), kRateR);

  for (const auto& q0 : in.inequalities) {
    SymbolicInequality q = q0;
    const AffineCoef a = q.lhs.coef(r0);
    if (!a.is_zero()) {
      if (!a.b_free()) throw Error(ErrorKind::NotAffineInB, "coefficient of r0 depends on B in " + q.origin);
      q.lhs.erase(r0);
      q.lhs.add(kRateR, AffineCoef(Rational(0), a.c0));
    }
    auto has_b = [](const LinearForm& f) {
      return std::any_of(f.terms().begin(), f.terms().end(), [](const auto& t) { return !t.second.b_free(); });
    };
    if (has_b(q.lhs) || has_b(q.rhs)) {
      auto leading = [](const LinearForm& f) {
        LinearForm g;
        for (const auto& [n, c] : f.terms()) g.add(n, AffineCoef(c.c1));
        return g;
      };
      q.lhs = leading(q.lhs);
      q.rhs = leading(q.rhs);
    }
    if (q.lhs.empty() && q.rhs.empty()) continue;
    for (const auto& [n, c] : q.rhs.terms()) out.atoms.emplace(n, in.atoms.at(n));
    out.inequalities.push_back(std::move(q));
  }
  out.check();
  return out;
}

std::vector<std::string> nncpdf_rate_variables(int N) {
  std::vector<std::string> v{kRateR, rate_name_r0(), rate_name_r1()};
  for (int k = 2; k <= N; ++k) v.push_back(rate_name_rk(k));
  for (int k = 2; k <= N; ++k) v.push_back(rate_name_rpk(k));
  return v;
}

std::vector<std::string> nncpdf_elimination_order(int N) {
  std::vector<std::string> v;
  for (int k = 2; k <= N; ++k) v.push_back(rate_name_rpk(k));
  v.push_back(rate_name_r1());
  for (int k = 2; k <= N; ++k) v.push_back(rate_name_rk(k));
  return v;
}

Derivation derive_nncpdf(int N, const std::vector<int>& destinations, const PipelineOptions& opt) {
  if (opt.fit_blocks.size() < 3) throw Error(ErrorKind::InvalidArgument, "need three block counts to fit and check");
  for (int d : destinations)
    if (d < 2 || d > N) throw Error(ErrorKind::IndexOutOfRange, "destination " + std::to_string(d));
  Derivation out;
  out.N = N;
  out.destinations = destinations;
  out.initialization_blocks = (N - 1) * (N - 1);

  std::map<std::string, InfoAtom> table;
  std::vector<std::vector<FamilyConstraint>> families;
  for (int B : opt.fit_blocks) {
    const auto w = build_nncpdf_omega(N, destinations, B);
    const auto violations = validate_omega(w);
    if (!violations.empty())
      throw Error(ErrorKind::InvalidArgument, "parameter set violates " + violations[0].rule + ": " + violations[0].detail);
    families.push_back(nncpdf_family_constraints(w, Labeling::nncpdf(N, B), table));
  }
  out.finite = fit_affine(opt.fit_blocks, families, nncpdf_rate_variables(N), table);
  out.asymptotic = asymptotic_system(out.finite);
  out.projected = project_to_R(out.asymptotic, nncpdf_elimination_order(N), opt.fme);
  return out;
}

Derivation derive_p2p(const PipelineOptions& opt) {
  Derivation out;
  out.N = 2;
  out.destinations = {2};
  const auto w = build_p2p_omega();
  const auto lab = Labeling::point_to_point();
  std::map<std::string, InfoAtom> table;
  SymbolicRegion r;
  r.variables = {kRateR, rate_name_r0()};
  for (std::size_t n = 0; n < w.nodes.size(); ++n)
    for (const auto& c : generate_constraints(w, n)) r.inequalities.push_back(to_symbolic(c, lab, table));
  for (const auto& q : r.inequalities)
    for (const auto& [name, c] : q.rhs.terms()) r.atoms.emplace(name, table.at(name));
  r.check();
  out.finite = r;
  out.asymptotic = r;
  out.projected = project_to_R(r, {rate_name_r0()}, opt.fme);
  return out;
}

std::map<std::string, double> atom_values(const SymbolicRegion& r, const JointDistribution& joint) {
  InfoEvaluator ev(joint);
  std::map<std::string, double> out;
  for (const auto& [name, atom] : r.atoms) out[name] = ev.mutual_information(atom);
  return out;
}

}  // namespace nncpdf
