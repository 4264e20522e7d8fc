#include "nncpdf/unfolding.hpp"

#include <algorithm>

namespace nncpdf {

const UnfoldedNode& UnfoldedNetwork::node(int k, int b) const {
  if (k < 1 || k > N || b < 1 || b > B + 1)
    throw Error(ErrorKind::IndexOutOfRange, "no unfolded node (" + std::to_string(k) + "," + std::to_string(b) + ")");
  return nodes[static_cast<std::size_t>((b - 1) * N + (k - 1))];
}

LabelSet UnfoldedNetwork::channel_parents(int k, int b) const {
  LabelSet out;
  for (int i = 1; i < k; ++i) out.emplace_back("Y" + std::to_string(i), b);
  for (int i = 1; i <= N; ++i) out.emplace_back("X" + std::to_string(i), b);
  return out;
}

double UnfoldedNetwork::rate_factor() const {
  return static_cast<double>(B) / static_cast<double>(B + initialization_blocks());
}

UnfoldedNetwork unfold_network(const Network& net, int B) {
  if (B < 1) throw Error(ErrorKind::InvalidArgument, "block count must be at least 1");
  UnfoldedNetwork u;
  u.N = net.N;
  u.B = B;
  for (int b = 1; b <= B + 1; ++b) {
    for (int k = 1; k <= net.N; ++k) {
      UnfoldedNode n;
      n.k = k;
      n.b = b;
      if (b == 1) {
        if (k == 1) n.y_unf = {kMessage};
      } else {
        // Y^unf_{k,b} = (X^unf_{k,b-1}, Y_{k,b-1}).
        const auto& prev = u.nodes[static_cast<std::size_t>((b - 2) * net.N + (k - 1))];
        n.y_unf = prev.x_unf;
        n.y_unf.emplace_back("Y" + std::to_string(k), b - 1);
      }
      if (b <= B) {
        n.x_unf = {VariableLabel("X" + std::to_string(k), b), VariableLabel("Z" + std::to_string(k), b)};
      } else if (std::find(net.destinations.begin(), net.destinations.end(), k) != net.destinations.end()) {
        n.x_unf = {kMessageEstimate};
      }
      u.nodes.push_back(std::move(n));
    }
  }
  return u;
}

}  // namespace nncpdf
