#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "nncpdf/probability.hpp"

namespace nncpdf {

/// Single-source multicast discrete memoryless network. Node 1 is the source;
/// nodes are numbered 1..N throughout the public API.
struct Network {
  int N = 2;
  std::vector<std::size_t> x_sizes;  // |X_k|, index k-1
  std::vector<std::size_t> y_sizes;  // |Y_k|, index k-1
  /// p(y_1..y_N | x_1..x_N), row-major over x_1..x_N then y_1..y_N.
  std::vector<double> channel;
  std::vector<int> destinations;

  std::size_t x_size(int k) const { return x_sizes.at(static_cast<std::size_t>(k - 1)); }
  std::size_t y_size(int k) const { return y_sizes.at(static_cast<std::size_t>(k - 1)); }
  std::size_t input_states() const;
  std::size_t output_states() const;
};

/// Auxiliary quantities of one relay k in [2:N].
struct RelayScheme {
  std::size_t v = 1;
  std::size_t u = 1;
  std::size_t yhat = 1;
  std::size_t x = 1;  // inferred from input_kernel
  std::size_t y = 1;  // inferred from compressor
  /// p(x_k | v_k), rows indexed by v_k.
  std::vector<double> input_kernel;
  /// p(yhat_k | x_k, u_k, v_k, y_k), rows indexed by (x_k, u_k, v_k, y_k).
  std::vector<double> compressor;
};

/// p(x_1, v_2..v_N, u_2..u_N) prod_k p(x_k|v_k) p(yhat_k|x_k,u_k,v_k,y_k).
struct SchemeDistribution {
  int N = 2;
  std::size_t x1 = 1;
  std::vector<RelayScheme> relays;  // relays[k-2] describes node k
  /// Row-major over x_1, v_2..v_N, u_2..u_N.
  std::vector<double> head;

  RelayScheme& relay(int k) { return relays.at(static_cast<std::size_t>(k - 2)); }
  const RelayScheme& relay(int k) const { return relays.at(static_cast<std::size_t>(k - 2)); }
};

Network load_network(const std::string& json_text);
SchemeDistribution load_scheme(const std::string& json_text);
Network load_network_file(const std::string& path);
SchemeDistribution load_scheme_file(const std::string& path);

std::string network_to_json(const Network& net);
std::string scheme_to_json(const SchemeDistribution& s);

/// Throws on malformed kernels or inconsistent sizes.
void validate_network(const Network& net);
void validate_scheme(const SchemeDistribution& s);

// Canonical labels used inside single-block joints.
VariableLabel x_label(int k);
VariableLabel y_label(int k);
VariableLabel v_label(int k);
VariableLabel u_label(int k);
VariableLabel yhat_label(int k);

/// Joint over X_1..X_N, V, U, Y_1..Y_N, Yhat built from the scheme factors and
/// the channel.
JointDistribution assemble_joint(const Network& net, const SchemeDistribution& s);

/// Marginal of the scheme over (X_1..X_N), row-major.
std::vector<double> input_marginal(const SchemeDistribution& s);

SchemeDistribution make_nnc_scheme(const SchemeDistribution& s);
SchemeDistribution make_ddf_scheme(const SchemeDistribution& s);

/// Uniform independent inputs, every auxiliary alphabet of size one.
SchemeDistribution trivial_scheme(const Network& net);

}  // namespace nncpdf
