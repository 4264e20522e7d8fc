// Command-line front end: evaluates bounds, compares schemes, optimizes and
// runs the symbolic derivation.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nncpdf/instantiate.hpp"
#include "nncpdf/network.hpp"
#include "nncpdf/optimizer.hpp"
#include "nncpdf/pipeline.hpp"
#include "nncpdf/rate_bound.hpp"

namespace {

using namespace nncpdf;

struct Options {
  std::string network;
  std::string scheme;
  std::vector<int> dest;
  std::string complement = "all";
  std::string perm;
  std::string format = "table";
  std::string out;
  std::uint64_t seed = 0;
  int grid_res = 0;
  std::string aux_sizes = "1,1,1";
  double eps_feas = 1e-9;
  // optimize
  std::string method = "ascent";
  int restarts = 1;
  int iterations = 50;
  // derive
  std::string preset = "nncpdf";
  int N = 3;
  int B = 2;
};

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::vector<int> parse_int_list(const std::string& text, const std::string& flag) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorKind::InvalidArgument, "--" + flag + ": '" + item + "' is not an integer");
    }
  }
  return out;
}

BoundOptions bound_options(const Options& o) {
  BoundOptions b;
  b.complement = o.complement == "relays" ? Complement::Relays : Complement::All;
  if (!o.perm.empty()) b.order = parse_int_list(o.perm, "perm");
  b.eps_feas = o.eps_feas;
  b.destinations = o.dest;
  return b;
}

std::vector<AuxSizes> aux_sizes(const Options& o) {
  const auto v = parse_int_list(o.aux_sizes, "aux-sizes");
  if (v.size() % 3 != 0 || v.empty() || std::any_of(v.begin(), v.end(), [](int x) { return x < 1; }))
    throw Error(ErrorKind::InvalidArgument, "--aux-sizes expects positive triples v,u,yhat");
  std::vector<AuxSizes> out;
  for (std::size_t i = 0; i < v.size(); i += 3)
    out.push_back({static_cast<std::size_t>(v[i]), static_cast<std::size_t>(v[i + 1]), static_cast<std::size_t>(v[i + 2])});
  return out;
}

// Rows of strings printed either as aligned columns or as CSV.
class Report {
 public:
  explicit Report(std::vector<std::string> header) : header_(std::move(header)) {}
  void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }

  std::string render(const std::string& format) const {
    std::ostringstream os;
    if (format == "csv") {
      auto line = [&](const std::vector<std::string>& r) {
        for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
        os << "\n";
      };
      line(header_);
      for (const auto& r : rows_) line(r);
      return os.str();
    }
    std::vector<std::size_t> width(header_.size(), 0);
    for (std::size_t i = 0; i < header_.size(); ++i) width[i] = header_[i].size();
    for (const auto& r : rows_)
      for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());
    auto line = [&](const std::vector<std::string>& r) {
      for (std::size_t i = 0; i < r.size(); ++i) {
        os << r[i];
        if (i + 1 < r.size()) os << std::string(width[i] - r[i].size() + 2, ' ');
      }
      os << "\n";
    };
    line(header_);
    for (const auto& r : rows_) line(r);
    return os.str();
  }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

// Sets print as {2;3} so that CSV cells never contain commas.
std::string set_cell(const std::vector<int>& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? ";" : "") + std::to_string(s[i]);
  return out + "}";
}

void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out);
  if (!f) throw Error(ErrorKind::InvalidArgument, "cannot write " + o.out);
  f << text;
}

Network need_network(const Options& o) {
  if (o.network.empty()) throw Error(ErrorKind::InvalidArgument, "--network is required");
  return load_network_file(o.network);
}

SchemeDistribution need_scheme(const Options& o) {
  if (o.scheme.empty()) throw Error(ErrorKind::InvalidArgument, "--scheme is required");
  return load_scheme_file(o.scheme);
}

int cmd_eval(const Options& o) {
  const auto net = need_network(o);
  const auto s = need_scheme(o);
  auto rep = nncpdf_bound(net, s, bound_options(o));
  std::sort(rep.cuts.begin(), rep.cuts.end(), [](const CutResult& a, const CutResult& b) {
    return std::tie(a.cut.d, a.cut.S, a.cut.T) < std::tie(b.cut.d, b.cut.S, b.cut.T);
  });
  Report r({"d", "S", "T", "term1", "term2", "term3", "term4", "total"});
  for (const auto& c : rep.cuts)
    r.add({std::to_string(c.cut.d), set_cell(c.cut.S), set_cell(c.cut.T), num(c.terms.term1), num(c.terms.term2),
           num(c.terms.term3), num(c.terms.term4), num(c.total)});
  std::string text = r.render(o.format);
  if (o.format != "csv") {
    text += "\nbound: " + num(rep.bound) + "\nfeasible: " + (rep.feasible ? "yes" : "no") + "\n";
  }
  emit(o, text);
  return 0;
}

int cmd_feasibility(const Options& o) {
  const auto net = need_network(o);
  const auto s = need_scheme(o);
  const auto entries = feasibility_check(net, s, bound_options(o));
  Report r({"subset", "lhs", "rhs", "margin"});
  bool ok = true;
  for (const auto& e : entries) {
    r.add({set_cell(e.subset), num(e.lhs), num(e.rhs), num(e.margin)});
    ok = ok && e.margin > o.eps_feas;
  }
  std::string text = r.render(o.format);
  if (o.format != "csv") text += "\nfeasible: " + std::string(ok ? "yes" : "no") + "\n";
  emit(o, text);
  return 0;
}

int cmd_compare(const Options& o) {
  const auto net = need_network(o);
  const auto s = need_scheme(o);
  const auto opt = bound_options(o);
  Report r({"scheme", "value"});
  const auto rep = nncpdf_bound(net, s, opt);
  r.add({"nncpdf", rep.feasible ? num(rep.bound) : "infeasible"});
  r.add({"nnc", num(nnc_bound(net, make_nnc_scheme(s), opt))});
  r.add({"ddf", num(ddf_bound(net, make_ddf_scheme(s), opt))});
  if (net.N == 3) r.add({"theorem7", num(theorem7_bound(net, s, opt))});
  r.add({"cutset", num(cutset_value(net, input_marginal(s), o.dest))});
  if (o.grid_res >= 2) {
    const auto g = cutset_grid_max(net, o.grid_res, o.dest);
    r.add({"cutset-grid", num(g.value)});
    r.add({"cutset-grid-allowance", num(g.allowance)});
  }
  emit(o, r.render(o.format));
  return 0;
}

int cmd_optimize(const Options& o) {
  const auto net = need_network(o);
  SearchConfig cfg;
  cfg.aux = aux_sizes(o);
  cfg.method = o.method == "grid" ? SearchMethod::Grid : SearchMethod::CoordinateAscent;
  if (o.grid_res >= 2) cfg.resolution = o.grid_res;
  cfg.restarts = o.restarts;
  cfg.max_iterations = o.iterations;
  cfg.seed = o.seed;
  cfg.bound = bound_options(o);
  std::vector<SchemeDistribution> seeds;
  if (!o.scheme.empty()) seeds.push_back(embed_scheme(load_scheme_file(o.scheme), cfg.aux));
  const auto res = optimize(net, cfg, seeds);
  Report r({"step", "rate"});
  for (std::size_t i = 0; i < res.trace.size(); ++i) r.add({std::to_string(i), num(res.trace[i])});
  std::string text = r.render(o.format);
  if (o.format != "csv") text += "\nrate: " + num(res.rate) + "\nevaluations: " + std::to_string(res.evaluations) + "\n";
  if (!o.out.empty()) {
    std::ofstream f(o.out);
    if (!f) throw Error(ErrorKind::InvalidArgument, "cannot write " + o.out);
    f << scheme_to_json(res.scheme) << "\n";
    std::cout << text;
  } else {
    std::cout << text << "\n" << scheme_to_json(res.scheme) << "\n";
  }
  return 0;
}

int cmd_derive(const Options& o) {
  Derivation d;
  if (o.preset == "p2p") {
    d = derive_p2p();
  } else {
    std::vector<int> dests = o.dest;
    int N = o.N;
    if (!o.network.empty()) {
      const auto net = load_network_file(o.network);
      N = net.N;
      if (dests.empty()) dests = net.destinations;
    }
    if (dests.empty())
      for (int k = 2; k <= N; ++k) dests.push_back(k);
    d = derive_nncpdf(N, dests);
  }
  std::ostringstream os;
  os << "## constraints (affine in B)\n" << format_region(d.finite) << "\n";
  os << "## limit B -> infinity\n" << format_region(d.asymptotic) << "\n";
  os << "## projection onto R\n" << format_region(d.projected);
  if (d.initialization_blocks > 0)
    os << "\ninitialization blocks: " << d.initialization_blocks << "\n";
  if (!o.network.empty() && !o.scheme.empty()) {
    const auto net = load_network_file(o.network);
    const auto s = load_scheme_file(o.scheme);
    const auto joint = assemble_joint(net, s);
    const double region = evaluate_region(d.projected, atom_values(d.projected, joint));
    os << "\nregion value: " << num(region) << "\n";
    if (o.preset != "p2p") {
      const auto rep = nncpdf_bound(net, s, bound_options(o));
      os << "direct bound: " << num(rep.bound) << (rep.feasible ? "" : " (infeasible)") << "\n";
    }
  }
  emit(o, os.str());
  return 0;
}

int cmd_simplify_check(const Options& o) {
  const auto net = need_network(o);
  const auto s = need_scheme(o);
  const auto w = build_nncpdf_omega(net, o.B);
  const auto lab = Labeling::nncpdf(net.N, o.B);
  const auto single = assemble_joint(net, s);
  InfoEvaluator ev(single);
  Report r({"node", "atom", "symbolic", "instantiated", "delta"});
  double worst = 0.0;
  GenerateOptions gen;
  gen.max_subsets = std::size_t{1} << 20;
  for (std::size_t p = 0; p < w.nodes.size(); ++p) {
    for (const auto& c : generate_constraints(w, p, gen)) {
      for (const auto& a : c.atoms) {
        const auto t = simplify_info_term(a, lab);
        double sym = t.rate_coef.convert_to<double>() / o.B;  // H(M) = 1 bit = B*R
        for (const auto& [key, coef] : t.atoms.terms()) sym += coef.c0.convert_to<double>() * ev.mutual_information(t.table.at(key));
        LabelSet all = a.left;
        all.insert(all.end(), a.right.begin(), a.right.end());
        all.insert(all.end(), a.given.begin(), a.given.end());
        const double direct = mutual_information(instantiate_unfolded_joint(net, s, o.B, all), a);
        worst = std::max(worst, std::abs(sym - direct));
        r.add({"(" + std::to_string(c.k) + ";" + std::to_string(c.b) + ")", a.str(), num(sym), num(direct),
               num(sym - direct)});
      }
    }
  }
  std::string text = r.render(o.format);
  if (o.format != "csv") text += "\nmax |delta|: " + num(worst) + "\n";
  emit(o, text);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Achievable-rate evaluation for relay networks with partial decode and compress forwarding"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub, bool scheme) {
    sub->add_option("--network", o.network, "network JSON file")->check(CLI::ExistingFile);
    if (scheme) sub->add_option("--scheme", o.scheme, "scheme JSON file")->check(CLI::ExistingFile);
    sub->add_option("--dest", o.dest, "restrict to destination K (repeatable)");
    sub->add_option("--complement", o.complement, "complement set for S^c, T^c")
        ->check(CLI::IsMember({"relays", "all"}));
    sub->add_option("--perm", o.perm, "relay order for S[k], e.g. \"3,2\"");
    sub->add_option("--format", o.format, "output format")->check(CLI::IsMember({"table", "csv"}));
    sub->add_option("--out", o.out, "write the report here instead of stdout");
    sub->add_option("--eps-feas", o.eps_feas, "feasibility margin");
  };

  auto* eval = app.add_subcommand("eval", "per-cut terms and the overall bound");
  common(eval, true);
  auto* feas = app.add_subcommand("feasibility", "per-subset feasibility margins");
  common(feas, true);
  auto* cmp = app.add_subcommand("compare", "NNC-PDF against NNC, DDF, the three-node bound and cut-set");
  common(cmp, true);
  cmp->add_option("--grid-res", o.grid_res, "also maximize cut-set on this input grid");
  auto* opt = app.add_subcommand("optimize", "search scheme parameters");
  common(opt, true);
  opt->add_option("--aux-sizes", o.aux_sizes, "v,u,yhat (one triple, or one per relay)");
  opt->add_option("--grid-res", o.grid_res, "grid resolution");
  opt->add_option("--seed", o.seed, "random seed");
  opt->add_option("--method", o.method, "search method")->check(CLI::IsMember({"grid", "ascent"}));
  opt->add_option("--restarts", o.restarts, "random restarts")->check(CLI::PositiveNumber);
  opt->add_option("--iterations", o.iterations, "sweep cap")->check(CLI::NonNegativeNumber);
  auto* der = app.add_subcommand("derive", "symbolic derivation and Fourier-Motzkin projection");
  common(der, true);
  der->add_option("--preset", o.preset, "parameter-set family")->check(CLI::IsMember({"nncpdf", "p2p"}));
  der->add_option("--N", o.N, "node count when no network is given")->check(CLI::Range(2, 5));
  auto* sc = app.add_subcommand("simplify-check", "symbolic atoms against the instantiated unfolded joint");
  common(sc, true);
  sc->add_option("--B", o.B, "block count")->check(CLI::Range(2, 3));

  CLI11_PARSE(app, argc, argv);

  try {
    if (*eval) return cmd_eval(o);
    if (*feas) return cmd_feasibility(o);
    if (*cmp) return cmd_compare(o);
    if (*opt) return cmd_optimize(o);
    if (*der) return cmd_derive(o);
    if (*sc) return cmd_simplify_check(o);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
