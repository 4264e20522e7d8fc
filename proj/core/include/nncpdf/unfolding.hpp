#pragma once

#include <vector>

#include "nncpdf/network.hpp"
#include "nncpdf/probability.hpp"

namespace nncpdf {

/// Node (k, b) of the unfolded acyclic network. Inputs and outputs are lists
/// of block-tagged labels; Z_k[b] stands for the orthogonal link to (k, b+1)
/// and is never given an alphabet.
struct UnfoldedNode {
  int k = 1;
  int b = 1;
  LabelSet y_unf;
  LabelSet x_unf;
};

struct UnfoldedNetwork {
  int N = 2;
  int B = 1;
  std::vector<UnfoldedNode> nodes;  // row-major in (b, k)

  const UnfoldedNode& node(int k, int b) const;
  std::size_t node_count() const { return nodes.size(); }

  /// Channel parents of Y_k[b]: Y_1..Y_{k-1} and X_1..X_N of the same block.
  LabelSet channel_parents(int k, int b) const;

  /// Blocks spent before transmission to hand each l_{k,0} to relay k.
  int initialization_blocks() const { return (N - 1) * (N - 1); }
  /// Effective rate factor B / (B + (N-1)^2).
  double rate_factor() const;
};

inline const VariableLabel kMessage{"M"};
inline const VariableLabel kMessageEstimate{"Mhat"};

UnfoldedNetwork unfold_network(const Network& net, int B);

}  // namespace nncpdf
