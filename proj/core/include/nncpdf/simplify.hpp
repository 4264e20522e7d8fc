#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nncpdf/probability.hpp"
#include "nncpdf/symbolic.hpp"

namespace nncpdf {

/// Dependency structure of one transmission block, used to decide which
/// information terms vanish. Variables outside the DAG either belong to the
/// message group {M, U0} or are rejected.
class BlockFactorization {
 public:
  /// Head (X1, V, U) fully dependent; X_k <- V_k; Y_j <- X_all, Y_i (i<j);
  /// Yhat_k <- X_k, U_k, V_k, Y_k.
  static BlockFactorization nncpdf(int N);
  /// X1 -> Y2.
  static BlockFactorization point_to_point();

  std::optional<std::size_t> find(const std::string& name) const;
  const std::vector<std::string>& names() const { return names_; }

  /// True when a and b are d-separated by c (bit masks over names()).
  bool separated(std::uint64_t a, std::uint64_t b, std::uint64_t c) const;

 private:
  std::vector<std::string> names_;          // printing order
  std::vector<std::uint64_t> parents_;      // bit mask per node
  void add(std::string name, std::vector<std::string> parents);
};

struct Labeling {
  BlockFactorization block;
  /// H(M) as a multiple of R.
  Rational message_entropy = 1;
  bool blocked = true;  // labels carry a block tag

  static Labeling nncpdf(int N, int B);
  static Labeling point_to_point();
};

bool is_message_label(const VariableLabel& l);

/// Result of rewriting one atom: rate_coef * R + sum of canonical atoms.
struct SimplifiedTerm {
  Rational rate_coef = 0;
  LinearForm atoms;                       // keyed by InfoAtom::str()
  std::map<std::string, InfoAtom> table;  // key -> single-block atom

  SimplifiedTerm& operator+=(const SimplifiedTerm& o);
};

/// Drops and moves variables that the factorization makes irrelevant; the
/// atom is identically zero when nullopt is returned.
std::optional<InfoAtom> canonical_block_atom(const InfoAtom& atom, const BlockFactorization& f);

SimplifiedTerm simplify_info_term(const InfoAtom& atom, const Labeling& lab);

}  // namespace nncpdf
