#pragma once

// Random instances shared by the unit tests and the acceptance binary.

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "nncpdf/network.hpp"
#include "nncpdf/probability.hpp"

namespace testing_support {

using Rng = std::mt19937_64;

inline std::vector<double> random_rows(Rng& rng, std::size_t rows, std::size_t cols, double shape = 1.0) {
  std::gamma_distribution<double> g(shape, 1.0);
  std::vector<double> out(rows * cols);
  for (std::size_t r = 0; r < rows; ++r) {
    double s = 0.0;
    for (std::size_t c = 0; c < cols; ++c) s += (out[r * cols + c] = g(rng) + 1e-300);
    for (std::size_t c = 0; c < cols; ++c) out[r * cols + c] /= s;
  }
  return out;
}

inline nncpdf::JointDistribution random_joint(Rng& rng, std::size_t nvars, std::size_t max_alphabet) {
  std::uniform_int_distribution<std::size_t> size(1, max_alphabet);
  nncpdf::JointDistribution d;
  std::size_t states = 1;
  for (std::size_t i = 0; i < nvars; ++i) {
    d.variables.push_back({nncpdf::VariableLabel("A" + std::to_string(i)), size(rng)});
    states *= d.variables.back().size;
  }
  // Sparse entries now and then so that zero-probability states are exercised.
  std::bernoulli_distribution zero(0.15);
  d.mass = random_rows(rng, 1, states, 0.6);
  for (auto& m : d.mass)
    if (zero(rng)) m = 0.0;
  double s = 0.0;
  for (double m : d.mass) s += m;
  if (s == 0.0) {
    d.mass[0] = 1.0;
    s = 1.0;
  }
  for (auto& m : d.mass) m /= s;
  return d;
}

inline nncpdf::Network random_network(Rng& rng, int N, std::vector<int> destinations, std::size_t alphabet = 2) {
  nncpdf::Network net;
  net.N = N;
  net.x_sizes.assign(static_cast<std::size_t>(N), alphabet);
  net.y_sizes.assign(static_cast<std::size_t>(N), alphabet);
  net.destinations = std::move(destinations);
  net.channel = random_rows(rng, net.input_states(), net.output_states(), 0.7);
  return net;
}

struct Aux {
  std::size_t v = 2, u = 2, yhat = 2;
};

// With independent_head the head factors as prod_k p(v_k) p(u_k|v_k) times
// p(x_1|v,u), which keeps the feasibility condition slack.
inline nncpdf::SchemeDistribution random_scheme(Rng& rng, const nncpdf::Network& net, Aux aux,
                                                bool independent_head) {
  nncpdf::SchemeDistribution s;
  s.N = net.N;
  s.x1 = net.x_size(1);
  const std::size_t R = static_cast<std::size_t>(net.N - 1);
  for (int k = 2; k <= net.N; ++k) {
    nncpdf::RelayScheme r;
    r.v = aux.v;
    r.u = aux.u;
    r.yhat = aux.yhat;
    r.x = net.x_size(k);
    r.y = net.y_size(k);
    r.input_kernel = random_rows(rng, r.v, r.x);
    r.compressor = random_rows(rng, r.x * r.u * r.v * r.y, r.yhat);
    s.relays.push_back(std::move(r));
  }
  std::size_t vu = 1;
  for (std::size_t i = 0; i < R; ++i) vu *= aux.v * aux.u;
  if (!independent_head) {
    s.head = random_rows(rng, 1, s.x1 * vu);
    return s;
  }
  std::vector<std::vector<double>> pv, pu;
  for (std::size_t i = 0; i < R; ++i) {
    pv.push_back(random_rows(rng, 1, aux.v));
    pu.push_back(random_rows(rng, aux.v, aux.u));
  }
  const auto px = random_rows(rng, vu, s.x1);
  s.head.assign(s.x1 * vu, 0.0);
  for (std::size_t idx = 0; idx < vu; ++idx) {
    // idx = (v_2..v_N, u_2..u_N) row-major.
    std::vector<std::size_t> digits(2 * R);
    std::size_t rem = idx;
    for (std::size_t a = 2 * R; a-- > 0;) {
      const std::size_t base = a < R ? aux.v : aux.u;
      digits[a] = rem % base;
      rem /= base;
    }
    double m = 1.0;
    for (std::size_t i = 0; i < R; ++i) m *= pv[i][digits[i]] * pu[i][digits[i] * aux.u + digits[R + i]];
    for (std::size_t x = 0; x < s.x1; ++x) s.head[x * vu + idx] = m * px[idx * s.x1 + x];
  }
  return s;
}

inline std::string fixture(const std::string& name) { return std::string(NNCPDF_FIXTURE_DIR) + "/" + name; }

}  // namespace testing_support
