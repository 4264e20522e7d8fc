#include "nncpdf/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <random>

namespace nncpdf {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

AuxSizes aux_for(const std::vector<AuxSizes>& aux, int N, int k) {
  if (aux.size() == 1) return aux[0];
  if (aux.size() == static_cast<std::size_t>(N - 1)) return aux[static_cast<std::size_t>(k - 2)];
  throw Error(ErrorKind::InvalidArgument, "expected 1 or " + std::to_string(N - 1) + " auxiliary size entries, got " +
                                              std::to_string(aux.size()));
}

void check_config(const SearchConfig& cfg) {
  if (cfg.resolution < 2) throw Error(ErrorKind::InvalidArgument, "grid resolution must be at least 2");
  if (cfg.restarts < 1) throw Error(ErrorKind::InvalidArgument, "restarts must be at least 1");
  if (cfg.max_iterations < 0) throw Error(ErrorKind::InvalidArgument, "iteration cap must be nonnegative");
  for (const auto& a : cfg.aux)
    if (a.v == 0 || a.u == 0 || a.yhat == 0) throw Error(ErrorKind::InvalidArgument, "alphabet sizes must be positive");
}

std::vector<double> flatten(const SchemeDistribution& s) {
  std::vector<double> f = s.head;
  for (const auto& r : s.relays) {
    f.insert(f.end(), r.input_kernel.begin(), r.input_kernel.end());
    f.insert(f.end(), r.compressor.begin(), r.compressor.end());
  }
  return f;
}

// (rate, parameters) ordering used to merge runs deterministically.
bool better(double ra, const SchemeDistribution& a, double rb, const SchemeDistribution& b) {
  if (ra != rb) return ra > rb;
  return flatten(a) < flatten(b);
}

double rate_of(const Network& net, const SchemeDistribution& s, const SearchConfig& cfg, std::size_t& evals) {
  ++evals;
  return scheme_rate(net, s, cfg.bound);
}

std::vector<double> random_row(std::mt19937_64& rng, std::size_t k) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> r(k);
  double sum = 0.0;
  for (auto& x : r) sum += (x = e(rng));
  for (auto& x : r) x /= sum;
  return r;
}

// Head drawn as prod_k p(v_k) p(u_k|v_k) times p(x_1|v,u), which keeps the
// feasibility condition satisfied whenever some relay is non-degenerate.
SchemeDistribution random_start(const Network& net, const SearchConfig& cfg, std::mt19937_64& rng) {
  SchemeDistribution s = uniform_scheme(net, cfg);
  const int N = net.N;
  std::vector<std::vector<double>> pv, pu;
  std::size_t vu_states = 1;
  for (int k = 2; k <= N; ++k) {
    const auto& r = s.relay(k);
    pv.push_back(random_row(rng, r.v));
    std::vector<double> cond;
    for (std::size_t v = 0; v < r.v; ++v) {
      auto row = random_row(rng, r.u);
      cond.insert(cond.end(), row.begin(), row.end());
    }
    pu.push_back(std::move(cond));
    vu_states *= r.v * r.u;
  }
  std::vector<double> px;
  for (std::size_t i = 0; i < vu_states; ++i) {
    auto row = random_row(rng, s.x1);
    px.insert(px.end(), row.begin(), row.end());
  }

  const std::size_t R = static_cast<std::size_t>(N - 1);
  std::vector<std::size_t> v(R, 0), u(R, 0);
  for (std::size_t x = 0; x < s.x1; ++x) {
    std::function<void(std::size_t, std::size_t, double)> walk_u;
    std::function<void(std::size_t, std::size_t, double)> walk_v = [&](std::size_t i, std::size_t idx, double m) {
      if (i == R) return walk_u(0, idx, m);
      for (std::size_t a = 0; a < s.relays[i].v; ++a) {
        v[i] = a;
        walk_v(i + 1, idx * s.relays[i].v + a, m * pv[i][a]);
      }
    };
    walk_u = [&](std::size_t i, std::size_t idx, double m) {
      if (i == R) {
        // idx enumerates (v..., u...) row-major; px is indexed the same way.
        s.head[x * vu_states + idx] = m * px[idx * s.x1 + x];
        return;
      }
      for (std::size_t a = 0; a < s.relays[i].u; ++a) {
        u[i] = a;
        walk_u(i + 1, idx * s.relays[i].u + a, m * pu[i][v[i] * s.relays[i].u + a]);
      }
    };
    walk_v(0, 0, 1.0);
  }
  for (auto& r : s.relays) {
    for (std::size_t v0 = 0; v0 < r.v; ++v0) {
      auto row = random_row(rng, r.x);
      std::copy(row.begin(), row.end(), r.input_kernel.begin() + static_cast<std::ptrdiff_t>(v0 * r.x));
    }
    const std::size_t rows = r.compressor.size() / r.yhat;
    for (std::size_t i = 0; i < rows; ++i) {
      auto row = random_row(rng, r.yhat);
      std::copy(row.begin(), row.end(), r.compressor.begin() + static_cast<std::ptrdiff_t>(i * r.yhat));
    }
  }
  return s;
}

void compositions(std::size_t k, int m, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (cur.size() + 1 == k) {
    cur.push_back(m);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (int a = 0; a <= m; ++a) {
    cur.push_back(a);
    compositions(k, m - a, cur, out);
    cur.pop_back();
  }
}

double grid_count(std::size_t k, int m) {
  // C(m + k - 1, k - 1)
  double c = 1.0;
  for (std::size_t i = 1; i < k; ++i) c = c * static_cast<double>(static_cast<std::size_t>(m) + i) / static_cast<double>(i);
  return std::round(c);
}

}  // namespace

std::vector<std::vector<double>> simplex_grid(std::size_t k, int resolution) {
  if (k == 0) throw Error(ErrorKind::InvalidArgument, "simplex dimension must be positive");
  if (resolution < 2) throw Error(ErrorKind::InvalidArgument, "grid resolution must be at least 2");
  const int m = resolution - 1;
  std::vector<std::vector<int>> comps;
  std::vector<int> cur;
  compositions(k, m, cur, comps);
  std::vector<std::vector<double>> out;
  out.reserve(comps.size());
  for (const auto& c : comps) {
    std::vector<double> p;
    for (int a : c) p.push_back(static_cast<double>(a) / m);
    out.push_back(std::move(p));
  }
  return out;
}

SchemeDistribution uniform_scheme(const Network& net, const SearchConfig& cfg) {
  validate_network(net);
  SchemeDistribution s;
  s.N = net.N;
  s.x1 = net.x_size(1);
  std::size_t head = s.x1;
  for (int k = 2; k <= net.N; ++k) {
    const auto a = aux_for(cfg.aux, net.N, k);
    RelayScheme r;
    r.v = a.v;
    r.u = a.u;
    r.yhat = a.yhat;
    r.x = net.x_size(k);
    r.y = net.y_size(k);
    r.input_kernel.assign(r.v * r.x, 1.0 / static_cast<double>(r.x));
    r.compressor.assign(r.x * r.u * r.v * r.y * r.yhat, 1.0 / static_cast<double>(r.yhat));
    head *= r.v * r.u;
    s.relays.push_back(std::move(r));
  }
  s.head.assign(head, 1.0 / static_cast<double>(head));
  return s;
}

std::vector<ParamRow> parameter_rows(SchemeDistribution& s) {
  std::vector<ParamRow> rows{{&s.head, 0, s.head.size()}};
  for (auto& r : s.relays)
    for (std::size_t v = 0; v < r.v; ++v) rows.push_back({&r.input_kernel, v * r.x, r.x});
  for (auto& r : s.relays)
    for (std::size_t i = 0; i * r.yhat < r.compressor.size(); ++i) rows.push_back({&r.compressor, i * r.yhat, r.yhat});
  return rows;
}

SearchResult grid_search(const Network& net, const SearchConfig& cfg) {
  check_config(cfg);
  SchemeDistribution s = uniform_scheme(net, cfg);
  auto rows = parameter_rows(s);
  const int m = cfg.resolution - 1;
  double total = 1.0;
  for (const auto& r : rows) total *= grid_count(r.size, m);
  if (total > static_cast<double>(cfg.max_points))
    throw Error(ErrorKind::SearchSpaceTooLarge, "grid has " + std::to_string(total) + " points, cap is " +
                                                    std::to_string(cfg.max_points));

  std::map<std::size_t, std::vector<std::vector<double>>> grids;
  for (const auto& r : rows)
    if (!grids.count(r.size)) grids[r.size] = simplex_grid(r.size, cfg.resolution);

  SearchResult best;
  best.scheme = s;
  std::vector<std::size_t> pos(rows.size(), 0);
  auto place = [&](std::size_t i) {
    const auto& p = grids[rows[i].size][pos[i]];
    std::copy(p.begin(), p.end(), rows[i].data->begin() + static_cast<std::ptrdiff_t>(rows[i].offset));
  };
  for (std::size_t i = 0; i < rows.size(); ++i) place(i);
  while (true) {
    const double r = rate_of(net, s, cfg, best.evaluations);
    if (r > best.rate) {
      best.rate = r;
      best.scheme = s;
      best.trace.push_back(r);
    }
    std::size_t i = rows.size();
    while (i > 0) {
      --i;
      if (++pos[i] < grids[rows[i].size].size()) {
        place(i);
        break;
      }
      pos[i] = 0;
      place(i);
      if (i == 0) return best;
    }
    if (rows.empty()) return best;
  }
}

SearchResult coordinate_ascent(const Network& net, const SearchConfig& cfg, const SchemeDistribution& init) {
  check_config(cfg);
  SearchResult res;
  SchemeDistribution s = init;
  double f = rate_of(net, s, cfg, res.evaluations);
  if (f == kNegInf) throw Error(ErrorKind::NoFeasibleStart, "starting scheme violates the feasibility condition");
  res.trace.push_back(f);
  auto rows = parameter_rows(s);

  for (int it = 0; it < cfg.max_iterations; ++it) {
    const double start = f;
    for (const auto& row : rows) {
      if (row.size < 2) continue;
      auto first = row.data->begin() + static_cast<std::ptrdiff_t>(row.offset);
      std::vector<double> base(first, first + static_cast<std::ptrdiff_t>(row.size));
      for (std::size_t vtx = 0; vtx < row.size; ++vtx) {
        auto at = [&](double t) {
          for (std::size_t i = 0; i < row.size; ++i) first[static_cast<std::ptrdiff_t>(i)] = (1.0 - t) * base[i] + (i == vtx ? t : 0.0);
          return rate_of(net, s, cfg, res.evaluations);
        };
        double best_t = 0.0, best_f = f;
        for (double t : {1.0, 0.5, 0.25, 0.1, 0.03, 0.01}) {
          const double v = at(t);
          if (v > best_f) {
            best_f = v;
            best_t = t;
          }
        }
        if (best_t > 0.0) {
          // Golden-section refinement around the best coarse step.
          const double g = (std::sqrt(5.0) - 1.0) / 2.0;
          double lo = best_t / 2.0, hi = std::min(1.0, best_t * 2.0);
          double a = hi - g * (hi - lo), b = lo + g * (hi - lo);
          double fa = at(a), fb = at(b);
          for (int k = 0; k < 14; ++k) {
            if (fa >= fb) {
              hi = b;
              b = a;
              fb = fa;
              a = hi - g * (hi - lo);
              fa = at(a);
            } else {
              lo = a;
              a = b;
              fa = fb;
              b = lo + g * (hi - lo);
              fb = at(b);
            }
          }
          if (std::max(fa, fb) > best_f) {
            best_f = std::max(fa, fb);
            best_t = fa >= fb ? a : b;
          }
          if (best_f > f) {
            for (std::size_t i = 0; i < row.size; ++i) base[i] = (1.0 - best_t) * base[i] + (i == vtx ? best_t : 0.0);
            f = best_f;
          }
        }
        std::copy(base.begin(), base.end(), first);
      }
    }
    if (f - start < cfg.min_improvement) break;
    res.trace.push_back(f);
  }
  res.scheme = s;
  res.rate = f;
  return res;
}

SearchResult optimize(const Network& net, const SearchConfig& cfg, const std::vector<SchemeDistribution>& seeds) {
  check_config(cfg);
  if (cfg.method == SearchMethod::Grid) return grid_search(net, cfg);

  std::vector<SchemeDistribution> starts;
  std::size_t evaluations = 0;
  for (const auto& sd : seeds)
    if (rate_of(net, sd, cfg, evaluations) != kNegInf) starts.push_back(sd);
  std::mt19937_64 rng(cfg.seed);
  for (int r = 0; r < cfg.restarts; ++r) {
    for (int attempt = 0; attempt < 50; ++attempt) {
      auto s = random_start(net, cfg, rng);
      if (rate_of(net, s, cfg, evaluations) != kNegInf) {
        starts.push_back(std::move(s));
        break;
      }
    }
  }
  if (starts.empty()) throw Error(ErrorKind::NoFeasibleStart, "no feasible starting scheme found");

  SearchResult best;
  bool have = false;
  for (const auto& st : starts) {
    auto run = coordinate_ascent(net, cfg, st);
    evaluations += run.evaluations;
    if (!have || better(run.rate, run.scheme, best.rate, best.scheme)) {
      best = std::move(run);
      have = true;
    }
  }
  best.evaluations = evaluations;
  return best;
}

SchemeDistribution embed_scheme(const SchemeDistribution& s, const std::vector<AuxSizes>& sizes) {
  validate_scheme(s);
  SchemeDistribution out = s;
  const int N = s.N;
  for (int k = 2; k <= N; ++k) {
    const auto a = aux_for(sizes, N, k);
    const auto& r = s.relay(k);
    if (a.v < r.v || a.u < r.u || a.yhat < r.yhat)
      throw Error(ErrorKind::InvalidArgument, "embedding cannot shrink the alphabets of relay " + std::to_string(k));
    auto& o = out.relay(k);
    o.v = a.v;
    o.u = a.u;
    o.yhat = a.yhat;
    o.input_kernel.assign(o.v * o.x, 0.0);
    for (std::size_t v = 0; v < o.v; ++v)
      for (std::size_t x = 0; x < o.x; ++x) o.input_kernel[v * o.x + x] = r.input_kernel[(v < r.v ? v : 0) * r.x + x];
    o.compressor.assign(o.x * o.u * o.v * o.y * o.yhat, 0.0);
    for (std::size_t x = 0; x < o.x; ++x)
      for (std::size_t u = 0; u < o.u; ++u)
        for (std::size_t v = 0; v < o.v; ++v)
          for (std::size_t y = 0; y < o.y; ++y) {
            const std::size_t src = ((x * r.u + (u < r.u ? u : 0)) * r.v + (v < r.v ? v : 0)) * r.y + y;
            const std::size_t dst = ((x * o.u + u) * o.v + v) * o.y + y;
            for (std::size_t h = 0; h < r.yhat; ++h) o.compressor[dst * o.yhat + h] = r.compressor[src * r.yhat + h];
          }
  }

  // Head over x1, v_2..v_N, u_2..u_N: copy every old state to the same coordinates.
  std::vector<std::size_t> old_dims{s.x1}, new_dims{s.x1};
  for (int k = 2; k <= N; ++k) {
    old_dims.push_back(s.relay(k).v);
    new_dims.push_back(out.relay(k).v);
  }
  for (int k = 2; k <= N; ++k) {
    old_dims.push_back(s.relay(k).u);
    new_dims.push_back(out.relay(k).u);
  }
  std::size_t new_total = 1;
  for (auto d : new_dims) new_total *= d;
  out.head.assign(new_total, 0.0);
  std::vector<std::size_t> idx(old_dims.size(), 0);
  for (std::size_t i = 0; i < s.head.size(); ++i) {
    std::size_t rem = i;
    for (std::size_t a = old_dims.size(); a-- > 0;) {
      idx[a] = rem % old_dims[a];
      rem /= old_dims[a];
    }
    std::size_t j = 0;
    for (std::size_t a = 0; a < new_dims.size(); ++a) j = j * new_dims[a] + idx[a];
    out.head[j] = s.head[i];
  }
  return out;
}

}  // namespace nncpdf
