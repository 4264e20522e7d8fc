#pragma once

#include <map>
#include <string>
#include <vector>

#include "nncpdf/constraints.hpp"
#include "nncpdf/fme.hpp"
#include "nncpdf/omega.hpp"
#include "nncpdf/simplify.hpp"

namespace nncpdf {

/// A constraint tagged with a key that names the same bound for every B.
struct FamilyConstraint {
  std::string key;
  SymbolicInequality inequality;
};

/// Rewrites a raw constraint over single-block atoms; the message part moves
/// to the left as a multiple of R. New atoms are added to `table`.
SymbolicInequality to_symbolic(const RawConstraint& c, const Labeling& lab,
                               std::map<std::string, InfoAtom>& table);

/// The constraints of the symmetric-rate NNC-PDF family at one concrete B:
/// source covering, relay decoding and covering, destination decoding and
/// rate nonnegativity.
std::vector<FamilyConstraint> nncpdf_family_constraints(const OmegaParameters& w, const Labeling& lab,
                                                        std::map<std::string, InfoAtom>& table);

/// Fits every keyed coefficient as c0 + c1*B from the first two block counts
/// and checks the fit on the remaining ones. Throws NotAffineInB.
SymbolicRegion fit_affine(const std::vector<int>& blocks,
                          const std::vector<std::vector<FamilyConstraint>>& families,
                          const std::vector<std::string>& variables,
                          const std::map<std::string, InfoAtom>& table);

/// Substitutes r0 = B*R, keeps the leading order in B of every inequality and
/// drops the ones that become 0 < 0.
SymbolicRegion asymptotic_system(const SymbolicRegion& r);

std::vector<std::string> nncpdf_rate_variables(int N);  // R, r0, r1, r2.., r'2..
std::vector<std::string> nncpdf_elimination_order(int N);  // r'.., r1, r2..

struct PipelineOptions {
  std::vector<int> fit_blocks{2, 3, 4};
  FmeOptions fme;
};

struct Derivation {
  int N = 2;
  std::vector<int> destinations;
  SymbolicRegion finite;      // affine in B, includes r0
  SymbolicRegion asymptotic;  // B-free, without r0
  SymbolicRegion projected;   // R only
  int initialization_blocks = 0;
};

Derivation derive_nncpdf(int N, const std::vector<int>& destinations, const PipelineOptions& opt = {});
Derivation derive_p2p(const PipelineOptions& opt = {});

/// Value of every atom of the region on a single-block joint.
std::map<std::string, double> atom_values(const SymbolicRegion& r, const JointDistribution& joint);

}  // namespace nncpdf
