#pragma once

#include <limits>
#include <map>
#include <string>
#include <vector>

#include "nncpdf/network.hpp"
#include "nncpdf/probability.hpp"

namespace nncpdf {

/// Which relays the complements S^c, T^c range over for destination d.
///   All:    [2:N] \ S, so d itself sits on the complement side.
///   Relays: ([2:N] \ {d}) \ S.
enum class Complement { All, Relays };

struct BoundOptions {
  Complement complement = Complement::All;
  /// Node order used for S[k] = {j in S : j before k}; empty means 2,3,...,N.
  std::vector<int> order;
  double eps_feas = 1e-9;
  /// Restrict the multicast minimum to these destinations (empty = all).
  std::vector<int> destinations;
};

struct CutSpec {
  int d = 2;
  std::vector<int> S;
  std::vector<int> T;

  std::string str() const;
  friend bool operator==(const CutSpec&, const CutSpec&) = default;
};

struct TermValues {
  double term1 = 0.0;
  double term2 = 0.0;
  double term3 = 0.0;
  double term4 = 0.0;
  double total() const { return term1 + term2 - term3 - term4; }
};

struct CutResult {
  CutSpec cut;
  TermValues terms;
  double total = 0.0;
};

struct FeasibilityEntry {
  std::vector<int> subset;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
};

struct BoundReport {
  std::vector<CutResult> cuts;           // sorted by (d, S, T)
  std::map<int, double> per_destination;
  double bound = std::numeric_limits<double>::infinity();
  std::vector<FeasibilityEntry> feasibility;
  bool feasible = true;
};

std::string format_set(const std::vector<int>& s);

/// All S ⊆ T ⊆ [2:N] \ {d}, sorted lexicographically by (S, T).
std::vector<CutSpec> enumerate_cuts(int N, int d);

/// Validates d, S, T against N. Throws InvalidCut.
void check_cut(int N, const CutSpec& c);

TermValues term_values(InfoEvaluator& ev, int N, const CutSpec& c, const BoundOptions& opt = {});
TermValues term_values(const JointDistribution& j, int N, const CutSpec& c,
                       const BoundOptions& opt = {});

/// True when (U_k, V_k) has a single support point.
bool degenerate_node(const JointDistribution& j, int k);

std::vector<FeasibilityEntry> feasibility_check(const JointDistribution& j, int N,
                                                const BoundOptions& opt = {});
std::vector<FeasibilityEntry> feasibility_check(const Network& net, const SchemeDistribution& s,
                                                const BoundOptions& opt = {});

BoundReport nncpdf_bound(const Network& net, const JointDistribution& j, const BoundOptions& opt = {});
BoundReport nncpdf_bound(const Network& net, const SchemeDistribution& s, const BoundOptions& opt = {});

/// Rate of the scheme, or -inf when the feasibility condition fails.
double scheme_rate(const Network& net, const SchemeDistribution& s, const BoundOptions& opt = {});

double nnc_bound(const Network& net, const SchemeDistribution& s, const BoundOptions& opt = {});
double ddf_bound(const Network& net, const SchemeDistribution& s, const BoundOptions& opt = {});
double theorem7_bound(const Network& net, const SchemeDistribution& s, const BoundOptions& opt = {});

/// min_d min_{S: 1 in S, d not in S} I(X_S; Y_{S^c} | X_{S^c}) for the given
/// input pmf over X_1..X_N (row-major).
double cutset_value(const Network& net, const std::vector<double>& input_pmf,
                    const std::vector<int>& destinations = {});

struct CutsetGridResult {
  double value = 0.0;             // best grid value
  std::vector<double> argmax;     // input pmf attaining it
  double allowance = 0.0;         // upper bound on (true max - grid max)
  std::size_t points = 0;
};

/// Maximizes cutset_value over input pmfs whose entries are multiples of
/// 1/(resolution-1). Throws SearchSpaceTooLarge past max_points.
CutsetGridResult cutset_grid_max(const Network& net, int resolution,
                                 const std::vector<int>& destinations = {},
                                 std::size_t max_points = 2'000'000);

}  // namespace nncpdf
