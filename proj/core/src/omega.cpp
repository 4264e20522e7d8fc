#include "nncpdf/omega.hpp"
#include "nncpdf/unfolding.hpp"

#include <algorithm>
#include <set>

namespace nncpdf {

std::string IndexId::str() const {
  switch (kind) {
    case Kind::L0: return "l0";
    case Kind::Source: return "l1," + std::to_string(b);
    case Kind::Aux: return "l" + std::to_string(k) + "," + std::to_string(b);
    case Kind::Cover: return "l'" + std::to_string(k) + "," + std::to_string(b);
  }
  return "?";
}

int OmegaParameters::index_of(const IndexId& id) const {
  auto it = std::find(indices.begin(), indices.end(), id);
  if (it == indices.end()) throw Error(ErrorKind::IndexOutOfRange, "no index " + id.str());
  return static_cast<int>(it - indices.begin());
}

int OmegaParameters::codebook_of(const VariableLabel& label) const {
  for (std::size_t j = 0; j < codebooks.size(); ++j)
    if (codebooks[j].label == label) return static_cast<int>(j);
  throw Error(ErrorKind::IndexOutOfRange, "no codebook " + label.str());
}

std::size_t OmegaParameters::node_position(int k, int b) const {
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (nodes[i].k == k && nodes[i].b == b) return i;
  throw Error(ErrorKind::IndexOutOfRange, "no node (" + std::to_string(k) + "," + std::to_string(b) + ")");
}

const OmegaNode& OmegaParameters::node(int k, int b) const { return nodes[node_position(k, b)]; }

std::vector<int> OmegaParameters::gamma_of(const std::vector<int>& cbs) const {
  std::set<int> g;
  for (int j : cbs) g.insert(codebooks[static_cast<std::size_t>(j)].gamma.begin(),
                             codebooks[static_cast<std::size_t>(j)].gamma.end());
  return {g.begin(), g.end()};
}

LabelSet OmegaParameters::labels_of(const std::vector<int>& cbs) const {
  LabelSet out;
  for (int j : cbs) out.push_back(codebooks[static_cast<std::size_t>(j)].label);
  return out;
}

namespace {

std::vector<int> sorted_union(std::vector<int> a, const std::vector<int>& b) {
  a.insert(a.end(), b.begin(), b.end());
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  return a;
}

VariableLabel blk(const std::string& name, int k, int b) { return {name + std::to_string(k), b}; }

}  // namespace

OmegaParameters build_nncpdf_omega(int N, const std::vector<int>& destinations, int B) {
  if (N < 2) throw Error(ErrorKind::InvalidArgument, "N must be at least 2");
  if (B < 2) throw Error(ErrorKind::InvalidArgument, "the NNC-PDF parameter set needs B >= 2");
  using K = IndexId::Kind;
  OmegaParameters w;
  w.N = N;
  w.B = B;
  w.message_entropy = Rational(B);

  auto add_index = [&](IndexId id, std::string rate) {
    w.indices.push_back(id);
    w.index_rate.push_back(std::move(rate));
  };
  add_index({K::L0, 1, 0}, rate_name_r0());
  for (int b = 1; b <= B; ++b) add_index({K::Source, 1, b}, rate_name_r1());
  for (int k = 2; k <= N; ++k)
    for (int b = 0; b <= B; ++b) add_index({K::Aux, k, b}, b == B ? "" : rate_name_rk(k));
  for (int k = 2; k <= N; ++k)
    for (int b = 0; b <= B - 1; ++b) add_index({K::Cover, k, b}, rate_name_rpk(k));

  auto l0 = [&] { return w.index_of({K::L0, 1, 0}); };
  auto l1 = [&](int b) { return w.index_of({K::Source, 1, b}); };
  auto lk = [&](int k, int b) { return w.index_of({K::Aux, k, b}); };
  auto lp = [&](int k, int b) { return w.index_of({K::Cover, k, b}); };
  auto cb = [&](const VariableLabel& l) { return w.codebook_of(l); };
  auto add_cb = [&](VariableLabel label, std::vector<int> gamma, std::vector<int> A) {
    std::sort(gamma.begin(), gamma.end());
    std::sort(A.begin(), A.end());
    w.codebooks.push_back({std::move(label), std::move(gamma), std::move(A)});
    return static_cast<int>(w.codebooks.size() - 1);
  };

  add_cb(VariableLabel("U0"), {l0()}, {});
  for (int b = 1; b <= B; ++b) {
    for (int k = 2; k <= N; ++k) add_cb(blk("V", k, b), {lk(k, b - 1)}, {});
    std::vector<int> g{l0(), l1(b)}, a;
    for (int k = 2; k <= N; ++k) {
      g.push_back(lk(k, b - 1));
      a.push_back(cb(blk("V", k, b)));
    }
    add_cb(blk("X", 1, b), g, a);
    for (int k = 2; k <= N; ++k) add_cb(blk("U", k, b), {lk(k, b), lk(k, b - 1)}, {cb(blk("V", k, b))});
  }
  for (int k = 2; k <= N; ++k) add_cb(blk("X", k, 1), {lk(k, 0), lp(k, 0)}, {cb(blk("V", k, 1))});
  for (int b = 2; b <= B; ++b) {
    for (int k = 2; k <= N; ++k) {
      add_cb(blk("Yhat", k, b - 1), {lp(k, b - 1), lk(k, b - 1), lp(k, b - 2), lk(k, b - 2)},
             {cb(blk("X", k, b - 1)), cb(blk("U", k, b - 1)), cb(blk("V", k, b - 1))});
      add_cb(blk("X", k, b), {lk(k, b - 1), lp(k, b - 1)}, {cb(blk("V", k, b))});
    }
  }

  // W_k^b and D_k^b accumulated per original node while walking the blocks.
  std::vector<std::vector<int>> w_acc(static_cast<std::size_t>(N + 1)), d_acc(static_cast<std::size_t>(N + 1));
  std::vector<int> w11;
  w11.push_back(cb(VariableLabel("U0")));
  for (int b = 1; b <= B; ++b) {
    w11.push_back(cb(blk("X", 1, b)));
    for (int k = 2; k <= N; ++k) {
      w11.push_back(cb(blk("U", k, b)));
      w11.push_back(cb(blk("V", k, b)));
    }
  }
  std::sort(w11.begin(), w11.end());

  auto observed_for = [&](int k, int b) {
    const auto ku = static_cast<std::size_t>(k);
    LabelSet obs = w.labels_of(sorted_union(w_acc[ku], d_acc[ku]));
    for (int i = 1; i < b; ++i) obs.push_back(blk("Y", k, i));
    return obs;
  };

  for (int b = 1; b <= B + 1; ++b) {
    for (int k = 1; k <= N; ++k) {
      OmegaNode n;
      n.k = k;
      n.b = b;
      const auto ku = static_cast<std::size_t>(k);
      if (b == 1 && k == 1) {
        n.W = w11;
        n.observed = {kMessage};
      } else if (b == 1) {
        n.D = {cb(blk("V", k, 1))};
        n.W = {cb(blk("X", k, 1))};
        n.observed = {blk("V", k, 1)};
      } else if (b <= B && k == 1) {
        n.D = w11;
        n.observed = observed_for(k, b);
      } else if (b <= B) {
        n.D = sorted_union(sorted_union(w_acc[ku], d_acc[ku]), {cb(blk("U", k, b - 1)), cb(blk("V", k, b))});
        n.W = {cb(blk("Yhat", k, b - 1)), cb(blk("X", k, b))};
        std::sort(n.W.begin(), n.W.end());
        n.observed = observed_for(k, b);
      } else if (std::find(destinations.begin(), destinations.end(), k) != destinations.end()) {
        n.D = sorted_union(sorted_union(w_acc[ku], d_acc[ku]), {cb(VariableLabel("U0"))});
        for (int bb = 1; bb <= B - 1; ++bb) {
          n.Bn.push_back(cb(blk("X", 1, bb)));
          for (int j = 2; j <= N; ++j) {
            if (j == k) continue;
            for (const char* name : {"U", "V", "X", "Yhat"}) n.Bn.push_back(cb(blk(name, j, bb)));
          }
        }
        std::sort(n.Bn.begin(), n.Bn.end());
        n.observed = observed_for(k, b);
      }
      w_acc[ku] = sorted_union(w_acc[ku], n.W);
      d_acc[ku] = sorted_union(d_acc[ku], n.D);
      w.nodes.push_back(std::move(n));
    }
  }
  return w;
}

OmegaParameters build_nncpdf_omega(const Network& net, int B) {
  return build_nncpdf_omega(net.N, net.destinations, B);
}

OmegaParameters build_p2p_omega() {
  OmegaParameters w;
  w.N = 2;
  w.B = 1;
  w.message_entropy = 1;
  w.indices.push_back({IndexId::Kind::L0, 1, 0});
  w.index_rate.push_back(rate_name_r0());
  w.codebooks.push_back({VariableLabel("U0"), {0}, {}});
  w.codebooks.push_back({VariableLabel("X1"), {0}, {0}});
  OmegaNode src;
  src.k = 1;
  src.b = 1;
  src.W = {0, 1};
  src.observed = {kMessage};
  OmegaNode dst;
  dst.k = 2;
  dst.b = 1;
  dst.D = {0, 1};
  dst.observed = {VariableLabel("Y2")};
  w.nodes = {src, dst};
  return w;
}

std::vector<OmegaViolation> validate_omega(const OmegaParameters& w) {
  std::vector<OmegaViolation> out;
  const int mu = static_cast<int>(w.mu());
  const int nu = static_cast<int>(w.nu());
  auto name = [&](int j) { return w.codebooks[static_cast<std::size_t>(j)].label.str(); };
  auto node_name = [](const OmegaNode& n) {
    return "node (" + std::to_string(n.k) + "," + std::to_string(n.b) + ")";
  };
  auto subset = [](const std::vector<int>& a, const std::vector<int>& b) {
    return std::all_of(a.begin(), a.end(), [&](int x) { return std::find(b.begin(), b.end(), x) != b.end(); });
  };

  for (int j = 0; j < nu; ++j) {
    const auto& c = w.codebooks[static_cast<std::size_t>(j)];
    for (int g : c.gamma)
      if (g < 0 || g >= mu) out.push_back({"range", name(j) + " refers to index " + std::to_string(g)});
    for (int a : c.A) {
      if (a < 0 || a >= nu) {
        out.push_back({"range", name(j) + " is superposed on unknown codebook " + std::to_string(a)});
        continue;
      }
      if (a >= j) out.push_back({"A-2", name(j) + " is superposed on later codebook " + name(a)});
      if (!subset(w.codebooks[static_cast<std::size_t>(a)].gamma, c.gamma))
        out.push_back({"A-2", "indices of " + name(a) + " are not indices of " + name(j)});
    }
  }

  std::vector<int> covered;  // W^{k-1}
  std::vector<std::vector<int>> fresh;  // Γ_{W_k} \ Γ_{D_k} per node
  for (const auto& n : w.nodes) {
    for (const auto* set : {&n.W, &n.D, &n.Bn})
      for (int j : *set)
        if (j < 0 || j >= nu) out.push_back({"range", node_name(n) + " lists unknown codebook"});
    for (int j : n.W)
      if (std::find(covered.begin(), covered.end(), j) != covered.end())
        out.push_back({"W", node_name(n) + " covers " + name(j) + " again"});
    for (int j : n.D)
      if (std::find(covered.begin(), covered.end(), j) == covered.end())
        out.push_back({"D", node_name(n) + " decodes " + name(j) + " before it is covered"});
    for (int j : n.Bn) {
      if (std::find(covered.begin(), covered.end(), j) == covered.end())
        out.push_back({"B", node_name(n) + " nonuniquely decodes uncovered " + name(j)});
      if (std::find(n.D.begin(), n.D.end(), j) != n.D.end())
        out.push_back({"B", node_name(n) + " lists " + name(j) + " in both D and B"});
    }
    auto WD = sorted_union(n.W, n.D);
    auto DB = sorted_union(n.D, n.Bn);
    for (int j : n.W)
      if (!subset(w.codebooks[static_cast<std::size_t>(j)].A, WD))
        out.push_back({"A-3", node_name(n) + ": superposition base of " + name(j) + " outside W and D"});
    for (int j : n.Bn)
      if (!subset(w.codebooks[static_cast<std::size_t>(j)].A, DB))
        out.push_back({"A-3", node_name(n) + ": superposition base of " + name(j) + " outside D and B"});
    for (int j : n.D)
      if (!subset(w.codebooks[static_cast<std::size_t>(j)].A, n.D))
        out.push_back({"A-3", node_name(n) + ": superposition base of " + name(j) + " outside D"});

    std::vector<int> f;
    const auto gd = w.gamma_of(n.D);
    for (int g : w.gamma_of(n.W))
      if (!std::binary_search(gd.begin(), gd.end(), g)) f.push_back(g);
    for (std::size_t p = 0; p < fresh.size(); ++p) {
      std::vector<int> common;
      std::set_intersection(f.begin(), f.end(), fresh[p].begin(), fresh[p].end(), std::back_inserter(common));
      if (!common.empty())
        out.push_back({"A-1", node_name(n) + " shares fresh index " +
                                  w.indices[static_cast<std::size_t>(common[0])].str() + " with " +
                                  node_name(w.nodes[p])});
    }
    fresh.push_back(std::move(f));
    covered = sorted_union(covered, n.W);
  }
  return out;
}

}  // namespace nncpdf
