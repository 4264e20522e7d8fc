#include "nncpdf/rate_bound.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>

namespace nncpdf {

namespace {

double clamp_small(double v) { return (v < 0.0 && v > -kNonNegativityClamp) ? 0.0 : v; }

std::vector<int> relay_nodes(int N) {
  std::vector<int> r;
  for (int k = 2; k <= N; ++k) r.push_back(k);
  return r;
}

// pos[k] = rank of node k in the configured order.
std::vector<int> positions(int N, const std::vector<int>& order) {
  std::vector<int> pos(static_cast<std::size_t>(N + 1), 0);
  if (order.empty()) {
    for (int k = 2; k <= N; ++k) pos[static_cast<std::size_t>(k)] = k;
    return pos;
  }
  auto sorted = order;
  std::sort(sorted.begin(), sorted.end());
  if (sorted != relay_nodes(N))
    throw Error(ErrorKind::InvalidArgument, "order must be a permutation of [2:N]");
  for (std::size_t i = 0; i < order.size(); ++i) pos[static_cast<std::size_t>(order[i])] = static_cast<int>(i);
  return pos;
}

std::vector<int> earlier(const std::vector<int>& set, int k, const std::vector<int>& pos) {
  std::vector<int> out;
  for (int j : set)
    if (pos[static_cast<std::size_t>(j)] < pos[static_cast<std::size_t>(k)]) out.push_back(j);
  return out;
}

std::vector<int> minus(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  for (int x : a)
    if (std::find(b.begin(), b.end(), x) == b.end()) out.push_back(x);
  return out;
}

std::vector<int> complement_of(int N, int d, const std::vector<int>& S, Complement c) {
  auto universe = relay_nodes(N);
  if (c == Complement::Relays) universe = minus(universe, {d});
  return minus(universe, S);
}

template <class F>
LabelSet labels(const std::vector<int>& nodes, F make) {
  LabelSet out;
  for (int k : nodes) out.push_back(make(k));
  return out;
}

LabelSet operator+(LabelSet a, const LabelSet& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

LabelSet without(const LabelSet& a, const LabelSet& drop) {
  LabelSet out;
  for (const auto& l : a)
    if (std::find(drop.begin(), drop.end(), l) == drop.end() &&
        std::find(out.begin(), out.end(), l) == out.end())
      out.push_back(l);
  return out;
}

// I(A;B|C) after removing conditioning variables from A and B.
double info(InfoEvaluator& ev, const LabelSet& a, const LabelSet& b, const LabelSet& c) {
  InfoAtom atom{without(a, c), without(without(b, c), a), without(c, {})};
  if (atom.left.empty() || atom.right.empty()) return 0.0;
  return ev.mutual_information(atom);
}

std::vector<int> active_destinations(const Network& net, const BoundOptions& opt) {
  if (opt.destinations.empty()) return net.destinations;
  for (int d : opt.destinations)
    if (std::find(net.destinations.begin(), net.destinations.end(), d) == net.destinations.end())
      throw Error(ErrorKind::IndexOutOfRange, "node " + std::to_string(d) + " is not a destination");
  return opt.destinations;
}

LabelSet all_x(int N) {
  LabelSet out;
  for (int k = 1; k <= N; ++k) out.push_back(x_label(k));
  return out;
}

}  // namespace

std::string format_set(const std::vector<int>& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ";";
    out += std::to_string(s[i]);
  }
  return out + "}";
}

std::string CutSpec::str() const {
  return "d=" + std::to_string(d) + " S=" + format_set(S) + " T=" + format_set(T);
}

std::vector<CutSpec> enumerate_cuts(int N, int d) {
  const auto others = minus(relay_nodes(N), {d});
  const std::size_t n = others.size();
  std::vector<CutSpec> cuts;
  for (std::size_t tmask = 0; tmask < (std::size_t{1} << n); ++tmask) {
    for (std::size_t smask = tmask;; smask = (smask - 1) & tmask) {
      CutSpec c;
      c.d = d;
      for (std::size_t i = 0; i < n; ++i) {
        if (smask >> i & 1) c.S.push_back(others[i]);
        if (tmask >> i & 1) c.T.push_back(others[i]);
      }
      cuts.push_back(std::move(c));
      if (smask == 0) break;
    }
  }
  std::sort(cuts.begin(), cuts.end(), [](const CutSpec& a, const CutSpec& b) {
    return std::tie(a.S, a.T) < std::tie(b.S, b.T);
  });
  return cuts;
}

void check_cut(int N, const CutSpec& c) {
  if (c.d < 2 || c.d > N) throw Error(ErrorKind::InvalidCut, "destination outside [2:N]");
  std::set<int> t(c.T.begin(), c.T.end());
  if (t.size() != c.T.size()) throw Error(ErrorKind::InvalidCut, "T has repeated nodes");
  for (int k : c.T)
    if (k < 2 || k > N || k == c.d) throw Error(ErrorKind::InvalidCut, "T must lie in [2:N] \\ {d}");
  std::set<int> s(c.S.begin(), c.S.end());
  if (s.size() != c.S.size()) throw Error(ErrorKind::InvalidCut, "S has repeated nodes");
  for (int k : c.S)
    if (!t.contains(k)) throw Error(ErrorKind::InvalidCut, "S must be a subset of T");
}

TermValues term_values(InfoEvaluator& ev, int N, const CutSpec& c, const BoundOptions& opt) {
  check_cut(N, c);
  const auto pos = positions(N, opt.order);
  const auto Sc = complement_of(N, c.d, c.S, opt.complement);
  const auto Tc = complement_of(N, c.d, c.T, opt.complement);
  const auto relays = relay_nodes(N);
  const LabelSet X = all_x(N);
  const LabelSet V = labels(relays, v_label);
  const LabelSet U = labels(relays, u_label);
  const LabelSet Yd{y_label(c.d)};

  TermValues t;
  t.term1 = info(ev, LabelSet{x_label(1)} + labels(c.S, v_label),
                 labels(Sc, u_label) + labels(Tc, x_label) + labels(Tc, yhat_label) + Yd,
                 labels(Sc, v_label));
  t.term2 = info(ev, labels(c.T, x_label) + labels(c.S, u_label), labels(Tc, yhat_label) + Yd,
                 LabelSet{x_label(1)} + labels(Tc, x_label) + V + labels(Sc, u_label));
  t.term3 = info(ev, labels(c.T, yhat_label), labels(c.T, y_label),
                 labels(Tc, yhat_label) + X + V + U + Yd);
  for (int k : Sc) {
    const auto prior = earlier(Sc, k, pos);
    t.term4 += info(ev, {u_label(k)}, X + V + labels(prior, u_label),
                    {v_label(k), x_label(k), y_label(k)});
    t.term4 += info(ev, {v_label(k)}, labels(prior, v_label), {});
  }
  t.term1 = clamp_small(t.term1);
  t.term2 = clamp_small(t.term2);
  t.term3 = clamp_small(t.term3);
  t.term4 = clamp_small(t.term4);
  return t;
}

TermValues term_values(const JointDistribution& j, int N, const CutSpec& c, const BoundOptions& opt) {
  InfoEvaluator ev(j);
  return term_values(ev, N, c, opt);
}

bool degenerate_node(const JointDistribution& j, int k) {
  const auto m = marginalize(j, {u_label(k), v_label(k)});
  std::size_t support = 0;
  for (double p : m.mass)
    if (p > 1e-12) ++support;
  return support <= 1;
}

namespace {

std::vector<FeasibilityEntry> feasibility_impl(InfoEvaluator& ev, int N, const BoundOptions& opt) {
  const auto& j = ev.joint();
  const auto pos = positions(N, opt.order);
  const auto relays = relay_nodes(N);
  std::vector<bool> active(static_cast<std::size_t>(N + 1), false);
  for (int k : relays) active[static_cast<std::size_t>(k)] = !degenerate_node(j, k);

  std::vector<FeasibilityEntry> out;
  const std::size_t n = relays.size();
  for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
    std::vector<int> sp;
    bool any = false;
    for (std::size_t i = 0; i < n; ++i)
      if (mask >> i & 1) {
        sp.push_back(relays[i]);
        any = any || active[static_cast<std::size_t>(relays[i])];
      }
    if (!any) continue;
    FeasibilityEntry e;
    e.subset = sp;
    for (int k : sp) {
      const auto prior = earlier(sp, k, pos);
      e.lhs += info(ev, {u_label(k)}, {y_label(k)}, {x_label(k), v_label(k)});
      e.rhs += info(ev, {v_label(k)}, labels(prior, v_label), {});
      e.rhs += info(ev, {u_label(k)}, labels(prior, u_label) + labels(minus(sp, {k}), v_label),
                    {v_label(k)});
    }
    e.margin = e.lhs - e.rhs;
    out.push_back(std::move(e));
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.subset.size() != b.subset.size() ? a.subset.size() < b.subset.size() : a.subset < b.subset;
  });
  return out;
}

}  // namespace

std::vector<FeasibilityEntry> feasibility_check(const JointDistribution& j, int N,
                                                const BoundOptions& opt) {
  InfoEvaluator ev(j);
  return feasibility_impl(ev, N, opt);
}

std::vector<FeasibilityEntry> feasibility_check(const Network& net, const SchemeDistribution& s,
                                                const BoundOptions& opt) {
  return feasibility_check(assemble_joint(net, s), net.N, opt);
}

BoundReport nncpdf_bound(const Network& net, const JointDistribution& j, const BoundOptions& opt) {
  InfoEvaluator ev(j);
  BoundReport rep;
  auto dests = active_destinations(net, opt);
  std::sort(dests.begin(), dests.end());
  for (int d : dests) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& c : enumerate_cuts(net.N, d)) {
      CutResult r{c, term_values(ev, net.N, c, opt), 0.0};
      r.total = r.terms.total();
      best = std::min(best, r.total);
      rep.cuts.push_back(std::move(r));
    }
    rep.per_destination[d] = best;
    rep.bound = std::min(rep.bound, best);
  }
  rep.feasibility = feasibility_impl(ev, net.N, opt);
  for (const auto& f : rep.feasibility)
    if (!(f.margin > opt.eps_feas)) rep.feasible = false;
  return rep;
}

BoundReport nncpdf_bound(const Network& net, const SchemeDistribution& s, const BoundOptions& opt) {
  return nncpdf_bound(net, assemble_joint(net, s), opt);
}

double scheme_rate(const Network& net, const SchemeDistribution& s, const BoundOptions& opt) {
  const auto rep = nncpdf_bound(net, s, opt);
  return rep.feasible ? rep.bound : -std::numeric_limits<double>::infinity();
}

double nnc_bound(const Network& net, const SchemeDistribution& s, const BoundOptions& opt) {
  for (const auto& r : s.relays)
    if (r.u != 1 || r.v != 1) throw Error(ErrorKind::WrongForm, "NNC form needs |U_k| = |V_k| = 1");
  const auto j = assemble_joint(net, s);
  InfoEvaluator ev(j);
  const LabelSet X = all_x(net.N);
  double bound = std::numeric_limits<double>::infinity();
  for (int d : active_destinations(net, opt)) {
    const auto others = minus(relay_nodes(net.N), {d});
    for (std::size_t mask = 0; mask < (std::size_t{1} << others.size()); ++mask) {
      std::vector<int> T;
      for (std::size_t i = 0; i < others.size(); ++i)
        if (mask >> i & 1) T.push_back(others[i]);
      const auto Tc = complement_of(net.N, d, T, opt.complement);
      const double a = info(ev, LabelSet{x_label(1)} + labels(T, x_label),
                            labels(Tc, yhat_label) + LabelSet{y_label(d)}, labels(Tc, x_label));
      const double b = info(ev, labels(T, y_label), labels(T, yhat_label),
                            X + labels(Tc, yhat_label) + LabelSet{y_label(d)});
      bound = std::min(bound, clamp_small(a) - clamp_small(b));
    }
  }
  return bound;
}

double ddf_bound(const Network& net, const SchemeDistribution& s, const BoundOptions& opt) {
  for (int k = 2; k <= s.N; ++k) {
    const auto& r = s.relay(k);
    if (r.yhat != 1) throw Error(ErrorKind::WrongForm, "DDF form needs |Yhat_k| = 1");
    if (r.v != r.x) throw Error(ErrorKind::WrongForm, "DDF form needs |V_k| = |X_k|");
    for (std::size_t a = 0; a < r.v; ++a)
      for (std::size_t b = 0; b < r.x; ++b)
        if (std::abs(r.input_kernel[a * r.x + b] - (a == b ? 1.0 : 0.0)) > 1e-12)
          throw Error(ErrorKind::WrongForm, "DDF form needs the identity kernel p(x_k|v_k)");
  }
  const auto j = assemble_joint(net, s);
  {
    LabelSet vs;
    for (int k = 2; k <= s.N; ++k) vs.push_back(v_label(k));
    const auto pv = marginalize(j, vs);
    std::vector<std::vector<double>> singles;
    for (int k = 2; k <= s.N; ++k) singles.push_back(marginalize(j, {v_label(k)}).mass);
    for (std::size_t i = 0; i < pv.mass.size(); ++i) {
      std::size_t rem = i;
      double prod = 1.0;
      for (std::size_t a = singles.size(); a-- > 0;) {
        prod *= singles[a][rem % singles[a].size()];
        rem /= singles[a].size();
      }
      if (std::abs(prod - pv.mass[i]) > 1e-9)
        throw Error(ErrorKind::WrongForm, "DDF form needs independent V_2..V_N");
    }
  }
  InfoEvaluator ev(j);
  const auto pos = positions(net.N, opt.order);
  const LabelSet X = all_x(net.N);
  double bound = std::numeric_limits<double>::infinity();
  for (int d : active_destinations(net, opt)) {
    const auto others = minus(relay_nodes(net.N), {d});
    for (std::size_t mask = 0; mask < (std::size_t{1} << others.size()); ++mask) {
      std::vector<int> S;
      for (std::size_t i = 0; i < others.size(); ++i)
        if (mask >> i & 1) S.push_back(others[i]);
      const auto Sc = complement_of(net.N, d, S, opt.complement);
      double val = info(ev, LabelSet{x_label(1)} + labels(S, x_label),
                        labels(Sc, u_label) + LabelSet{y_label(d)}, labels(Sc, x_label));
      for (int k : Sc) {
        val -= clamp_small(info(ev, {u_label(k)},
                                without(X, {x_label(k)}) + labels(earlier(Sc, k, pos), u_label),
                                {x_label(k), y_label(k)}));
      }
      bound = std::min(bound, val);
    }
  }
  return bound;
}

double theorem7_bound(const Network& net, const SchemeDistribution& s, const BoundOptions& opt) {
  if (net.N != 3) throw Error(ErrorKind::WrongN, "the three-node specialization needs N = 3");
  const auto j = assemble_joint(net, s);
  InfoEvaluator ev(j);
  const auto pos = positions(3, opt.order);
  double bound = std::numeric_limits<double>::infinity();

  for (int d : active_destinations(net, opt)) {
    const int r = 5 - d;
    const VariableLabel X1 = x_label(1), Xr = x_label(r), Xd = x_label(d);
    const VariableLabel Vr = v_label(r), Vd = v_label(d), Ur = u_label(r), Ud = u_label(d);
    const VariableLabel Yr = y_label(r), Yd = y_label(d), Hr = yhat_label(r);
    auto I = [&](LabelSet a, LabelSet b, LabelSet c) {
      return clamp_small(ev.mutual_information({std::move(a), std::move(b), std::move(c)}));
    };
    const bool r_first = pos[static_cast<std::size_t>(r)] < pos[static_cast<std::size_t>(d)];
    const double t3 = I({Hr}, {Yr}, {X1, Xr, Xd, Vr, Vd, Ur, Ud, Yd});
    double cuts[3];

    if (opt.complement == Complement::Relays) {
      // S^c, T^c range over {r} only.
      const double t4 = I({Ur}, {X1, Xd, Vd}, {Vr, Xr, Yr});
      cuts[0] = I({X1}, {Ur, Xr, Hr, Yd}, {Vr}) - t4;
      cuts[1] = I({X1}, {Ur, Yd}, {Vr}) + I({Xr}, {Yd}, {X1, Vr, Vd, Ur}) - t3 - t4;
      cuts[2] = I({X1, Vr}, {Yd}, {}) + I({Xr, Ur}, {Yd}, {X1, Vr, Vd}) - t3;
    } else {
      // Yhat_d is independent of everything else given (X_d, U_d, V_d, Y_d),
      // which every atom below conditions on or includes, so it is left out.
      double t4_both = 0.0;
      if (r_first) {
        t4_both += I({Ur}, {X1, Xd, Vd}, {Vr, Xr, Yr});
        t4_both += I({Ud}, {X1, Xr, Vr, Ur}, {Vd, Xd, Yd}) + I({Vd}, {Vr}, {});
      } else {
        t4_both += I({Ud}, {X1, Xr, Vr}, {Vd, Xd, Yd});
        t4_both += I({Ur}, {X1, Xd, Vd, Ud}, {Vr, Xr, Yr}) + I({Vr}, {Vd}, {});
      }
      const double t4_d = I({Ud}, {X1, Xr, Vr}, {Vd, Xd, Yd});
      cuts[0] = I({X1}, {Ur, Ud, Xr, Xd, Hr, Yd}, {Vr, Vd}) - t4_both;
      cuts[1] = I({X1}, {Ur, Ud, Xd, Yd}, {Vr, Vd}) + I({Xr}, {Yd}, {X1, Xd, Vr, Vd, Ur, Ud}) - t3 -
                t4_both;
      cuts[2] = I({X1, Vr}, {Ud, Xd, Yd}, {Vd}) + I({Xr, Ur}, {Yd}, {X1, Xd, Vr, Vd, Ud}) - t3 - t4_d;
    }
    for (double c : cuts) bound = std::min(bound, c);
  }
  return bound;
}

namespace {

JointDistribution input_channel_joint(const Network& net, const std::vector<double>& input_pmf) {
  Factor in;
  for (int k = 1; k <= net.N; ++k) in.outputs.push_back({x_label(k), net.x_size(k)});
  in.kernel = input_pmf;
  Factor ch;
  for (int k = 1; k <= net.N; ++k) {
    ch.inputs.push_back(x_label(k));
    ch.outputs.push_back({y_label(k), net.y_size(k)});
  }
  ch.kernel = net.channel;
  return product_compose({in, ch});
}

// Every (d, S) with 1 in S and d outside S, S as a subset of [1:N].
template <class F>
void for_each_cutset_cut(const Network& net, const std::vector<int>& dests, F f) {
  for (int d : dests) {
    for (std::size_t mask = 0; mask < (std::size_t{1} << net.N); ++mask) {
      if (!(mask & 1) || (mask >> (d - 1) & 1)) continue;
      std::vector<int> S, Sc;
      for (int k = 1; k <= net.N; ++k) (mask >> (k - 1) & 1 ? S : Sc).push_back(k);
      f(S, Sc);
    }
  }
}

double fannes(double t, double alphabet) {
  if (alphabet <= 1.0 || t <= 0.0) return 0.0;
  if (t >= 1.0 - 1.0 / alphabet) return std::log2(alphabet);
  const double h2 = -t * std::log2(t) - (1.0 - t) * std::log2(1.0 - t);
  return t * std::log2(alphabet - 1.0) + h2;
}

}  // namespace

double cutset_value(const Network& net, const std::vector<double>& input_pmf,
                    const std::vector<int>& destinations) {
  const auto j = input_channel_joint(net, input_pmf);
  InfoEvaluator ev(j);
  const auto dests = destinations.empty() ? net.destinations : destinations;
  double best = std::numeric_limits<double>::infinity();
  for_each_cutset_cut(net, dests, [&](const std::vector<int>& S, const std::vector<int>& Sc) {
    best = std::min(best, clamp_small(info(ev, labels(S, x_label), labels(Sc, y_label),
                                           labels(Sc, x_label))));
  });
  return best;
}

CutsetGridResult cutset_grid_max(const Network& net, int resolution,
                                 const std::vector<int>& destinations, std::size_t max_points) {
  if (resolution < 2) throw Error(ErrorKind::InvalidArgument, "grid resolution must be at least 2");
  const std::size_t K = net.input_states();
  const auto m = static_cast<std::size_t>(resolution - 1);

  // Number of compositions of m into K parts, C(m+K-1, K-1), with overflow guard.
  double count = 1.0;
  for (std::size_t i = 1; i < K; ++i) count = count * static_cast<double>(m + i) / static_cast<double>(i);
  if (count > static_cast<double>(max_points))
    throw Error(ErrorKind::SearchSpaceTooLarge,
                "cut-set grid would need " + std::to_string(static_cast<long long>(count)) + " points");

  CutsetGridResult res;
  res.value = -std::numeric_limits<double>::infinity();
  std::vector<std::size_t> parts(K, 0);
  std::vector<double> pmf(K, 0.0);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t left) {
    if (i + 1 == K) {
      parts[i] = left;
      for (std::size_t a = 0; a < K; ++a) pmf[a] = static_cast<double>(parts[a]) / static_cast<double>(m);
      ++res.points;
      const double v = cutset_value(net, pmf, destinations);
      if (v > res.value) {
        res.value = v;
        res.argmax = pmf;
      }
      return;
    }
    for (std::size_t c = 0; c <= left; ++c) {
      parts[i] = c;
      rec(i + 1, left - c);
    }
  };
  rec(0, m);

  // Any pmf lies within total variation floor(K/2)/m of some grid point, and
  // each cut value is a signed sum of four entropies of linear images of the
  // input pmf; bound each change with the Fannes-Audenaert inequality.
  const double tv = static_cast<double>(K / 2) / static_cast<double>(m);
  const auto dests = destinations.empty() ? net.destinations : destinations;
  for_each_cutset_cut(net, dests, [&](const std::vector<int>&, const std::vector<int>& Sc) {
    double xsc = 1.0, ysc = 1.0;
    for (int k : Sc) {
      xsc *= static_cast<double>(net.x_size(k));
      ysc *= static_cast<double>(net.y_size(k));
    }
    const double kx = static_cast<double>(K);
    const double a = fannes(tv, kx) + fannes(tv, xsc * ysc) + fannes(tv, xsc) + fannes(tv, kx * ysc);
    res.allowance = std::max(res.allowance, a);
  });
  return res;
}

}  // namespace nncpdf
