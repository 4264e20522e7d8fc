#pragma once

#include <compare>
#include <string>
#include <vector>

#include "nncpdf/network.hpp"
#include "nncpdf/symbolic.hpp"

namespace nncpdf {

/// Name of one index set: l0, l_{1,b}, l_{k,b} or l'_{k,b}.
struct IndexId {
  enum class Kind { L0, Source, Aux, Cover };
  Kind kind = Kind::L0;
  int k = 0;
  int b = 0;

  std::string str() const;
  friend auto operator<=>(const IndexId&, const IndexId&) = default;
};

struct Codebook {
  VariableLabel label;
  std::vector<int> gamma;  // positions in OmegaParameters::indices
  std::vector<int> A;      // positions of the codebooks it is superposed on
};

/// Coding parameters of one unfolded node. `observed` lists what its channel
/// output Y^unf carries: codeword labels, block outputs Y_k[b] and M.
struct OmegaNode {
  int k = 1;
  int b = 1;
  std::vector<int> W;
  std::vector<int> D;
  std::vector<int> Bn;
  LabelSet observed;
};

struct OmegaParameters {
  int N = 2;
  int B = 1;
  std::vector<IndexId> indices;
  /// Rate symbol of each index ("" for an index whose rate is fixed to 0).
  std::vector<std::string> index_rate;
  std::vector<Codebook> codebooks;  // superposition order
  std::vector<OmegaNode> nodes;     // processing order
  /// H(M) as a multiple of R.
  Rational message_entropy = 1;

  std::size_t mu() const { return indices.size(); }
  std::size_t nu() const { return codebooks.size(); }
  int index_of(const IndexId& id) const;
  int codebook_of(const VariableLabel& label) const;
  const OmegaNode& node(int k, int b) const;
  std::size_t node_position(int k, int b) const;

  std::vector<int> gamma_of(const std::vector<int>& codebooks) const;
  LabelSet labels_of(const std::vector<int>& codebooks) const;
};

struct OmegaViolation {
  std::string rule;  // "A-1", "A-2", "A-3", "W", "D", "B"
  std::string detail;
};

/// Symmetric-rate NNC-PDF parameter set over B transmission blocks (B >= 2).
OmegaParameters build_nncpdf_omega(int N, const std::vector<int>& destinations, int B);
OmegaParameters build_nncpdf_omega(const Network& net, int B);

/// Point-to-point channel as a two-node acyclic network: node 1 observes the
/// message and covers U0 and X1, node 2 observes Y2 and decodes both.
OmegaParameters build_p2p_omega();

std::vector<OmegaViolation> validate_omega(const OmegaParameters& w);

}  // namespace nncpdf
