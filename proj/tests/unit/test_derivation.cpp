#include <algorithm>

#include "doctest.h"
#include "nncpdf/constraints.hpp"
#include "nncpdf/omega.hpp"
#include "nncpdf/unfolding.hpp"
#include "support.hpp"

using namespace nncpdf;

namespace {

std::vector<std::string> index_names(const OmegaParameters& w, const std::vector<int>& ids) {
  std::vector<std::string> out;
  for (int i : ids) out.push_back(w.indices[static_cast<std::size_t>(i)].str());
  return out;
}

std::vector<std::string> codebook_names(const OmegaParameters& w, const std::vector<int>& ids) {
  std::vector<std::string> out;
  for (int i : ids) out.push_back(w.codebooks[static_cast<std::size_t>(i)].label.str());
  return out;
}

bool has_rule(const std::vector<OmegaViolation>& v, const std::string& rule) {
  return std::any_of(v.begin(), v.end(), [&](const OmegaViolation& x) { return x.rule == rule; });
}

int cb(const OmegaParameters& w, const std::string& name, int block) {
  return w.codebook_of(VariableLabel(name, block));
}

}  // namespace

TEST_SUITE("unfolding") {
  TEST_CASE("node grid and effective rate") {
    testing_support::Rng rng(1);
    const auto net = testing_support::random_network(rng, 3, {3});
    const auto u = unfold_network(net, 4);
    CHECK(u.node_count() == 15);  // N (B + 1)
    CHECK(u.initialization_blocks() == 4);
    CHECK(u.rate_factor() == doctest::Approx(0.5));
    const auto& n = u.node(2, 3);
    CHECK(n.k == 2);
    CHECK(n.b == 3);
    const auto parents = u.channel_parents(3, 2);
    CHECK(std::count(parents.begin(), parents.end(), VariableLabel("Y2", 2)) == 1);
    CHECK(std::count(parents.begin(), parents.end(), VariableLabel("X3", 2)) == 1);
    CHECK(std::count(parents.begin(), parents.end(), VariableLabel("Y3", 2)) == 0);
  }
}

TEST_SUITE("omega") {
  TEST_CASE("index and codebook counts") {
    CHECK(build_nncpdf_omega(3, {2, 3}, 4).mu() == 23);
    CHECK(build_nncpdf_omega(3, {2, 3}, 4).nu() == 35);
    CHECK(build_nncpdf_omega(3, {3}, 2).mu() == 13);
    CHECK(build_nncpdf_omega(3, {3}, 2).nu() == 17);
    CHECK(build_nncpdf_omega(2, {2}, 3).mu() == 11);
    CHECK(build_nncpdf_omega(2, {2}, 3).nu() == 15);
    CHECK_THROWS_AS(build_nncpdf_omega(3, {3}, 1), Error);
  }

  TEST_CASE("source codeword of block b") {
    const auto w = build_nncpdf_omega(3, {3}, 3);
    const auto& x = w.codebooks[static_cast<std::size_t>(cb(w, "X1", 2))];
    CHECK(index_names(w, x.gamma) == std::vector<std::string>{"l0", "l1,2", "l2,1", "l3,1"});
    CHECK(codebook_names(w, x.A) == std::vector<std::string>{"V2[2]", "V3[2]"});
    const auto& u = w.codebooks[static_cast<std::size_t>(cb(w, "U3", 3))];
    CHECK(index_names(w, u.gamma) == std::vector<std::string>{"l3,2", "l3,3"});
    CHECK(codebook_names(w, u.A) == std::vector<std::string>{"V3[3]"});
  }

  TEST_CASE("relay codewords") {
    const auto w = build_nncpdf_omega(3, {3}, 3);
    const auto& q = w.codebooks[static_cast<std::size_t>(cb(w, "Yhat2", 2))];
    CHECK(index_names(w, q.gamma) == std::vector<std::string>{"l2,1", "l2,2", "l'2,1", "l'2,2"});
    CHECK(codebook_names(w, q.A) == std::vector<std::string>{"V2[2]", "U2[2]", "X2[2]"});
    const auto& x = w.codebooks[static_cast<std::size_t>(cb(w, "X2", 1))];
    CHECK(index_names(w, x.gamma) == std::vector<std::string>{"l2,0", "l'2,0"});
    // The last block has no compression index and a zero auxiliary rate.
    CHECK_THROWS_AS(w.index_of({IndexId::Kind::Cover, 2, 3}), Error);
    CHECK(w.index_rate[static_cast<std::size_t>(w.index_of({IndexId::Kind::Aux, 2, 3}))].empty());
  }

  TEST_CASE("destination node sets") {
    const auto w = build_nncpdf_omega(3, {2, 3}, 2);
    const auto& d = w.node(2, 3);
    CHECK(d.D.size() == 7);
    CHECK(codebook_names(w, d.Bn) == std::vector<std::string>{"V3[1]", "X1[1]", "U3[1]", "X3[1]", "Yhat3[1]"});
    CHECK(w.node(2, 1).observed == LabelSet{VariableLabel("V2", 1)});
    CHECK(w.node(1, 1).observed == LabelSet{kMessage});
  }

  TEST_CASE("well-formed sets validate for every size") {
    for (int N = 2; N <= 5; ++N)
      for (int B = 2; B <= 6; ++B) {
        std::vector<int> dests;
        for (int k = 2; k <= N; ++k) dests.push_back(k);
        CHECK(validate_omega(build_nncpdf_omega(N, dests, B)).empty());
      }
    CHECK(validate_omega(build_p2p_omega()).empty());
  }

  TEST_CASE("broken sets are reported") {
    const auto good = build_nncpdf_omega(3, {3}, 2);
    {
      auto w = good;
      w.codebooks[static_cast<std::size_t>(cb(w, "V2", 1))].A.push_back(cb(w, "X1", 2));
      CHECK(has_rule(validate_omega(w), "A-2"));
    }
    {
      auto w = good;
      const auto p = w.node_position(2, 2);
      w.nodes[p].W.push_back(cb(w, "X1", 1));
      CHECK(has_rule(validate_omega(w), "W"));
    }
    {
      auto w = good;
      w.nodes[w.node_position(2, 1)].D.push_back(cb(w, "Yhat3", 1));
      CHECK(has_rule(validate_omega(w), "D"));
    }
    {
      auto w = good;
      auto& B = w.nodes[w.node_position(3, 3)].Bn;
      B.push_back(w.nodes[w.node_position(3, 3)].D.front());
      CHECK(has_rule(validate_omega(w), "B"));
    }
  }

  TEST_CASE("point-to-point set") {
    const auto w = build_p2p_omega();
    CHECK(w.mu() == 1);
    CHECK(w.nu() == 2);
    CHECK(w.node(2, 1).observed == LabelSet{VariableLabel("Y2")});
  }
}

TEST_SUITE("constraints") {
  TEST_CASE("point-to-point decoding bound") {
    const auto w = build_p2p_omega();
    const auto node = w.node_position(2, 1);
    const auto all = generate_constraints(w, node);
    REQUIRE(all.size() == 1);
    const auto& c = all[0];
    CHECK(c.kind == ConstraintKind::Decoding);
    CHECK(c.sense() == Sense::Less);
    CHECK(c.rates.coef("r0").c0 == 1);
    CHECK(c.codebooks.size() == 2);
    // Dropping U0 is allowed, dropping X1's base is not.
    CHECK(reduce_decoding(w, node, {0}, {w.codebook_of(VariableLabel("X1"))}).atoms.size() == 1);
    CHECK_THROWS_AS(reduce_decoding(w, node, {0}, {w.codebook_of(VariableLabel("U0"))}), Error);
  }

  TEST_CASE("point-to-point covering bound") {
    const auto w = build_p2p_omega();
    const auto all = generate_constraints(w, w.node_position(1, 1));
    REQUIRE(all.size() == 1);
    CHECK(all[0].kind == ConstraintKind::Compression);
    CHECK(all[0].sense() == Sense::Greater);
    CHECK_THROWS_AS(reduce_compression(w, w.node_position(1, 1), {0}, {}), Error);
  }

  TEST_CASE("relay decodes its auxiliary index and covers its output") {
    const auto w = build_nncpdf_omega(3, {3}, 2);
    const auto p = w.node_position(2, 2);
    const auto& n = w.nodes[p];
    CHECK(index_names(w, decoded_indices(w, n)) == std::vector<std::string>{"l2,0", "l2,1", "l'2,0"});
    CHECK(index_names(w, covering_indices(w, n)) == std::vector<std::string>{"l'2,1"});
    const auto all = generate_constraints(w, p);
    int dec = 0, comp = 0;
    for (const auto& c : all) (c.kind == ConstraintKind::Decoding ? dec : comp)++;
    CHECK(comp == 1);
    CHECK(dec == 1);
    for (const auto& c : all)
      if (c.kind == ConstraintKind::Decoding) {
        CHECK(index_names(w, c.index_set) == std::vector<std::string>{"l2,1"});
        CHECK(codebook_names(w, c.codebooks) == std::vector<std::string>{"U2[1]", "V2[2]"});
      }
  }

  TEST_CASE("every generated bound respects its index pools") {
    const auto w = build_nncpdf_omega(3, {2, 3}, 2);
    for (std::size_t p = 0; p < w.nodes.size(); ++p) {
      const auto& n = w.nodes[p];
      const auto dbar = decoded_indices(w, n);
      const auto wbar = covering_indices(w, n);
      for (const auto& c : generate_constraints(w, p)) {
        REQUIRE_FALSE(c.index_set.empty());
        if (c.kind == ConstraintKind::Decoding) {
          CHECK(std::any_of(c.index_set.begin(), c.index_set.end(),
                            [&](int i) { return std::count(dbar.begin(), dbar.end(), i) > 0; }));
        } else {
          for (int i : c.index_set) CHECK(std::count(wbar.begin(), wbar.end(), i) == 1);
        }
        CHECK(c.atoms.size() == c.codebooks.size());
      }
    }
  }

  TEST_CASE("subset budget") {
    const auto w = build_nncpdf_omega(3, {3}, 4);
    GenerateOptions tight;
    tight.max_subsets = 8;
    CHECK_THROWS_AS(generate_constraints(w, w.node_position(1, 1), tight), Error);
  }
}
