#include "doctest.h"
#include "nncpdf/instantiate.hpp"
#include "nncpdf/network.hpp"
#include "nncpdf/simplify.hpp"
#include "nncpdf/unfolding.hpp"
#include "support.hpp"

using namespace nncpdf;
namespace ts = testing_support;

namespace {

std::uint64_t mask(const BlockFactorization& f, std::initializer_list<const char*> names) {
  std::uint64_t m = 0;
  for (const char* n : names) m |= std::uint64_t{1} << *f.find(n);
  return m;
}

}  // namespace

TEST_SUITE("simplify") {
  TEST_CASE("single-block separation") {
    const auto f = BlockFactorization::nncpdf(3);
    CHECK(f.separated(mask(f, {"X2"}), mask(f, {"X1", "U2", "V3"}), mask(f, {"V2"})));
    CHECK_FALSE(f.separated(mask(f, {"X2"}), mask(f, {"V3"}), 0));
    CHECK(f.separated(mask(f, {"Yhat2"}), mask(f, {"X1", "Y3"}), mask(f, {"X2", "U2", "V2", "Y2"})));
    CHECK_FALSE(f.separated(mask(f, {"X1"}), mask(f, {"Y2"}), mask(f, {"X2", "X3"})));
    // Conditioning on a common child couples its parents.
    CHECK(f.separated(mask(f, {"X2"}), mask(f, {"X3"}), mask(f, {"V2", "V3"})));
    CHECK_FALSE(f.separated(mask(f, {"X2"}), mask(f, {"X3"}), mask(f, {"V2", "V3", "Y2"})));
  }

  TEST_CASE("terms that vanish or move") {
    const auto f = BlockFactorization::nncpdf(3);
    CHECK_FALSE(canonical_block_atom({{"Yhat2"}, {"X1", "Y3"}, {"X2", "U2", "V2", "Y2"}}, f).has_value());
    const auto a = canonical_block_atom({{"X1"}, {"Y2"}, {"X2", "X3"}}, f);
    REQUIRE(a.has_value());
    CHECK(a->str() == "I(X1;Y2|X2,X3)");
    CHECK_THROWS_AS(canonical_block_atom({{"Q9"}, {"Y2"}, {}}, f), Error);
  }

  TEST_CASE("blocks factor out") {
    const auto lab = Labeling::nncpdf(3, 2);
    // Different blocks of the head are independent.
    const auto t = simplify_info_term({{VariableLabel("X1", 1)}, {VariableLabel("V2", 2)}, {}}, lab);
    CHECK(t.rate_coef == 0);
    CHECK(t.atoms.empty());
    // A same-block term keeps its single-block form.
    const auto s = simplify_info_term(
        {{VariableLabel("X1", 2)}, {VariableLabel("Y3", 2)}, {VariableLabel("X3", 2), VariableLabel("V2", 2)}}, lab);
    REQUIRE(s.atoms.size() == 1);
    CHECK(s.table.begin()->second.str() == "I(X1;Y3|X3,V2)");
    CHECK(s.atoms.terms().begin()->second.c0 == 1);
  }

  TEST_CASE("the message contributes a multiple of R") {
    const auto lab = Labeling::nncpdf(3, 2);
    // The message spans both blocks, so H(M) = 2R.
    const auto t = simplify_info_term({{VariableLabel("U0")}, {kMessage}, {}}, lab);
    CHECK(t.rate_coef == 2);
    CHECK(t.atoms.empty());
    const auto z = simplify_info_term({{VariableLabel("U0")}, {VariableLabel("X1", 1)}, {}}, lab);
    CHECK(z.rate_coef == 0);
  }

  TEST_CASE("unknown labels are rejected") {
    CHECK_THROWS_AS(simplify_info_term({{VariableLabel("Z2", 1)}, {VariableLabel("X1", 1)}, {}}, Labeling::nncpdf(3, 2)),
                    Error);
  }

  TEST_CASE("canonical atoms match the instantiated joint") {
    ts::Rng rng(61);
    const auto net = ts::random_network(rng, 3, {3});
    const auto s = ts::random_scheme(rng, net, {2, 2, 2}, false);
    const auto joint = assemble_joint(net, s);
    InfoEvaluator single(joint);
    const auto lab = Labeling::nncpdf(3, 2);
    const std::vector<InfoAtom> atoms{
        {{VariableLabel("Yhat2", 1)}, {VariableLabel("Y2", 1), VariableLabel("X1", 2)}, {VariableLabel("X2", 1)}},
        {{VariableLabel("X1", 1), VariableLabel("U3", 1)}, {VariableLabel("Y3", 1)}, {VariableLabel("V3", 1)}},
        {{VariableLabel("U2", 1)}, {VariableLabel("V2", 2), VariableLabel("Y2", 1)}, {VariableLabel("V2", 1)}},
    };
    for (const auto& a : atoms) {
      const auto t = simplify_info_term(a, lab);
      double sym = t.rate_coef.convert_to<double>() / 2;
      for (const auto& [key, coef] : t.atoms.terms()) sym += coef.c0.convert_to<double>() * single.mutual_information(t.table.at(key));
      LabelSet all = a.left;
      all.insert(all.end(), a.right.begin(), a.right.end());
      all.insert(all.end(), a.given.begin(), a.given.end());
      CHECK(sym == doctest::Approx(mutual_information(instantiate_unfolded_joint(net, s, 2, all), a)).epsilon(1e-10));
    }
  }
}

TEST_SUITE("instantiate") {
  TEST_CASE("block marginals equal the single-block joint") {
    ts::Rng rng(67);
    const auto net = ts::random_network(rng, 3, {2, 3});
    const auto s = ts::random_scheme(rng, net, {2, 2, 2}, true);
    const LabelSet single_labels{x_label(1), v_label(2), y_label(3), yhat_label(2)};
    const auto single = assemble_joint(net, s);
    for (int b = 1; b <= 2; ++b) {
      LabelSet tagged;
      for (const auto& l : single_labels) tagged.emplace_back(l.name, b);
      const auto j = instantiate_unfolded_joint(net, s, 3, tagged);
      // Every sub-collection has the same entropy in both joints.
      for (unsigned m = 1; m < 16; ++m) {
        LabelSet a, ta;
        for (unsigned i = 0; i < 4; ++i)
          if (m >> i & 1) {
            a.push_back(single_labels[i]);
            ta.push_back(tagged[i]);
          }
        CHECK(entropy(j, ta) == doctest::Approx(entropy(single, a)).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("message is uniform and carried by U0") {
    ts::Rng rng(71);
    const auto net = ts::random_network(rng, 3, {3});
    const auto s = ts::random_scheme(rng, net, {2, 2, 2}, true);
    const auto j = instantiate_unfolded_joint(net, s, 2, {kMessage, VariableLabel("U0")}, 4);
    CHECK(entropy(j, {kMessage}) == doctest::Approx(2.0));
    CHECK(entropy(j, {VariableLabel("U0")}, {kMessage}) == doctest::Approx(0.0));
  }

  TEST_CASE("rejects unknown labels") {
    ts::Rng rng(73);
    const auto net = ts::random_network(rng, 3, {3});
    const auto s = ts::random_scheme(rng, net, {2, 2, 2}, true);
    CHECK_THROWS_AS(instantiate_unfolded_joint(net, s, 2, {VariableLabel("X9", 1)}), Error);
  }
}
