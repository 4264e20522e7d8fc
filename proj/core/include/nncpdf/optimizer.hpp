#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "nncpdf/network.hpp"
#include "nncpdf/rate_bound.hpp"

namespace nncpdf {

enum class SearchMethod { Grid, CoordinateAscent };

struct AuxSizes {
  std::size_t v = 1;
  std::size_t u = 1;
  std::size_t yhat = 1;
};

struct SearchConfig {
  /// One entry per relay 2..N, or a single entry used for every relay.
  std::vector<AuxSizes> aux{AuxSizes{}};
  SearchMethod method = SearchMethod::CoordinateAscent;
  int resolution = 3;  // grid points per simplex edge
  int restarts = 1;
  int max_iterations = 50;
  std::uint64_t seed = 0;
  double min_improvement = 1e-7;
  std::size_t max_points = 1'000'000;
  BoundOptions bound;
};

struct SearchResult {
  SchemeDistribution scheme;
  double rate = -std::numeric_limits<double>::infinity();
  std::vector<double> trace;
  std::size_t evaluations = 0;
};

/// Every probability vector of length k whose entries are multiples of
/// 1/(resolution-1), in lexicographic order of the integer compositions.
std::vector<std::vector<double>> simplex_grid(std::size_t k, int resolution);

/// Scheme with the configured alphabets and uniform kernels.
SchemeDistribution uniform_scheme(const Network& net, const SearchConfig& cfg);

/// Views of every row the search moves: the head pmf, each p(x_k|v_k) row and
/// each compressor row.
struct ParamRow {
  std::vector<double>* data;
  std::size_t offset;
  std::size_t size;
};
std::vector<ParamRow> parameter_rows(SchemeDistribution& s);

SearchResult grid_search(const Network& net, const SearchConfig& cfg);

/// Throws NoFeasibleStart when init is infeasible.
SearchResult coordinate_ascent(const Network& net, const SearchConfig& cfg, const SchemeDistribution& init);

/// Runs cfg.method; coordinate ascent starts from every seed and from
/// cfg.restarts random feasible points, keeping the best.
SearchResult optimize(const Network& net, const SearchConfig& cfg, const std::vector<SchemeDistribution>& seeds = {});

/// Same distribution on larger auxiliary alphabets: the extra symbols get no
/// mass and copy an existing kernel row.
SchemeDistribution embed_scheme(const SchemeDistribution& s, const std::vector<AuxSizes>& sizes);

}  // namespace nncpdf
