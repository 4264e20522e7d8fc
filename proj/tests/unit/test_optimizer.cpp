#include <algorithm>

#include "doctest.h"
#include "nncpdf/optimizer.hpp"
#include "support.hpp"

using namespace nncpdf;
namespace ts = testing_support;

TEST_SUITE("optimizer") {
  TEST_CASE("simplex grid") {
    const auto g = simplex_grid(3, 3);
    CHECK(g.size() == 6);
    for (const auto& p : g) {
      double s = 0;
      for (double x : p) s += x;
      CHECK(s == doctest::Approx(1.0));
    }
    const auto v = simplex_grid(4, 2);
    CHECK(v.size() == 4);
    for (const auto& p : v) CHECK(std::count(p.begin(), p.end(), 1.0) == 1);
    CHECK(simplex_grid(1, 5).size() == 1);
  }

  TEST_CASE("noiseless bit reaches one bit") {
    const auto net = load_network_file(ts::fixture("n2_noiseless_bit.network.json"));
    SearchConfig cfg;
    cfg.method = SearchMethod::Grid;
    cfg.resolution = 3;
    const auto g = optimize(net, cfg);
    CHECK(g.rate == doctest::Approx(1.0));
    cfg.method = SearchMethod::CoordinateAscent;
    const auto a = optimize(net, cfg);
    CHECK(a.rate == doctest::Approx(1.0).epsilon(1e-6));
  }

  TEST_CASE("search is deterministic for a seed") {
    const auto net = load_network_file(ts::fixture("n3_binary_relay.network.json"));
    SearchConfig cfg;
    cfg.aux = {AuxSizes{1, 1, 2}};
    cfg.max_iterations = 3;
    cfg.restarts = 2;
    cfg.seed = 5;
    const auto a = optimize(net, cfg);
    const auto b = optimize(net, cfg);
    CHECK(a.rate == b.rate);
    CHECK(a.scheme.head == b.scheme.head);
    CHECK(a.trace == b.trace);
  }

  TEST_CASE("ascent trace is monotone and ends at the rate") {
    const auto net = load_network_file(ts::fixture("n3_random_single.network.json"));
    SearchConfig cfg;
    cfg.aux = {AuxSizes{1, 1, 2}};
    cfg.max_iterations = 4;
    const auto r = coordinate_ascent(net, cfg, uniform_scheme(net, cfg));
    REQUIRE_FALSE(r.trace.empty());
    for (std::size_t i = 1; i < r.trace.size(); ++i) CHECK(r.trace[i] >= r.trace[i - 1]);
    CHECK(r.trace.back() == doctest::Approx(r.rate));
    CHECK(scheme_rate(net, r.scheme) == doctest::Approx(r.rate));
  }

  TEST_CASE("grid search covers the uniform point") {
    // At resolution 3 every binary row can be uniform, so the uniform scheme is on the grid.
    const auto net = load_network_file(ts::fixture("n2_noiseless_bit.network.json"));
    SearchConfig cfg;
    cfg.aux = {AuxSizes{1, 1, 2}};
    cfg.method = SearchMethod::Grid;
    cfg.resolution = 3;
    const auto r = grid_search(net, cfg);
    CHECK(r.evaluations == 27);
    CHECK(scheme_rate(net, r.scheme) == doctest::Approx(r.rate));
    CHECK(r.rate >= scheme_rate(net, uniform_scheme(net, cfg)) - 1e-12);
  }

  TEST_CASE("grid budget") {
    const auto net = load_network_file(ts::fixture("n3_binary_relay.network.json"));
    SearchConfig cfg;
    cfg.aux = {AuxSizes{1, 1, 2}};
    cfg.method = SearchMethod::Grid;
    cfg.resolution = 2;
    CHECK(grid_search(net, cfg).evaluations > 0);
    cfg.max_points = 3;
    CHECK_THROWS_AS(grid_search(net, cfg), Error);
  }

  TEST_CASE("embedding preserves the rate") {
    ts::Rng rng(89);
    const auto net = ts::random_network(rng, 3, {3});
    const auto s = make_nnc_scheme(ts::random_scheme(rng, net, {2, 2, 2}, true));
    const auto e = embed_scheme(s, {AuxSizes{3, 2, 3}});
    CHECK(e.relay(2).v == 3);
    CHECK(e.relay(3).yhat == 3);
    validate_scheme(e);
    CHECK(nncpdf_bound(net, e).bound == doctest::Approx(nncpdf_bound(net, s).bound).epsilon(1e-12));
    CHECK_THROWS_AS(embed_scheme(e, {AuxSizes{1, 1, 1}}), Error);
  }

  TEST_CASE("configuration errors") {
    const auto net = load_network_file(ts::fixture("n3_binary_relay.network.json"));
    SearchConfig cfg;
    cfg.restarts = 0;
    CHECK_THROWS_AS(optimize(net, cfg), Error);
    cfg.restarts = 1;
    cfg.resolution = 1;
    CHECK_THROWS_AS(optimize(net, cfg), Error);
    SearchConfig full;
    full.aux = {AuxSizes{2, 2, 2}};
    const auto bad = load_scheme_file(ts::fixture("n3_infeasible.scheme.json"));
    CHECK_THROWS_AS(coordinate_ascent(net, full, embed_scheme(bad, full.aux)), Error);
  }
}
