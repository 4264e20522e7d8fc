#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "nncpdf/omega.hpp"
#include "nncpdf/symbolic.hpp"

namespace nncpdf {

enum class ConstraintKind { Decoding, Compression };

/// One decoding or compression bound at a node, before any simplification:
///   sum of rates over index_set  (< or >)  sum of atoms.
/// Atoms are over unfolded labels and all carry coefficient one.
struct RawConstraint {
  int k = 1;
  int b = 1;
  ConstraintKind kind = ConstraintKind::Decoding;
  std::vector<int> index_set;  // positions in omega.indices
  std::vector<int> codebooks;  // the codebooks whose terms appear on the right
  LinearForm rates;
  std::vector<InfoAtom> atoms;

  Sense sense() const { return kind == ConstraintKind::Decoding ? Sense::Less : Sense::Greater; }
  std::string str(const OmegaParameters& w) const;
};

struct GenerateOptions {
  /// Skip decoding index sets that meet indices whose codewords the node
  /// already observes on its input.
  bool drop_redundant = true;
  std::size_t max_subsets = std::size_t{1} << 16;
};

/// Γ_D, Γ_B \ Γ_D, Γ_W \ Γ_D of a node.
std::vector<int> decoded_indices(const OmegaParameters& w, const OmegaNode& n);
std::vector<int> nonunique_indices(const OmegaParameters& w, const OmegaNode& n);
std::vector<int> covering_indices(const OmegaParameters& w, const OmegaNode& n);
/// Indices of every codebook label the node observes directly.
std::vector<int> observed_indices(const OmegaParameters& w, const OmegaNode& n);

/// Codebooks touched by a decoding index set, and codebooks fully determined by
/// a covering index set together with the decoded indices.
std::vector<int> touched_codebooks(const OmegaParameters& w, const OmegaNode& n, const std::vector<int>& sbar);
std::vector<int> determined_codebooks(const OmegaParameters& w, const OmegaNode& n,
                                      const std::vector<int>& tbar);

RawConstraint decoding_constraint(const OmegaParameters& w, std::size_t node, std::vector<int> sbar);
RawConstraint compression_constraint(const OmegaParameters& w, std::size_t node, std::vector<int> tbar);

/// Every decoding bound (S̄ within Γ_D ∪ Γ_B meeting Γ_D) and every compression
/// bound (nonempty T̄ within Γ_W \ Γ_D) of one node.
std::vector<RawConstraint> generate_constraints(const OmegaParameters& w, std::size_t node,
                                                const GenerateOptions& opt = {});

/// Sufficient versions: the right side sums over s_prime (a subset of the
/// touched codebooks meeting the superposition side condition) or over
/// t_prime (a superset of the determined codebooks inside W).
RawConstraint reduce_decoding(const OmegaParameters& w, std::size_t node, std::vector<int> sbar,
                              std::vector<int> s_prime);
RawConstraint reduce_compression(const OmegaParameters& w, std::size_t node, std::vector<int> tbar,
                                 std::vector<int> t_prime);

}  // namespace nncpdf
