#include "doctest.h"
#include "nncpdf/pipeline.hpp"
#include "nncpdf/rate_bound.hpp"
#include "support.hpp"

using namespace nncpdf;
namespace ts = testing_support;

namespace {

FamilyConstraint family(const std::string& key, const std::string& line) { return {key, parse_inequality(line)}; }

}  // namespace

TEST_SUITE("pipeline") {
  TEST_CASE("rate variables and elimination order") {
    CHECK(nncpdf_rate_variables(3) == std::vector<std::string>{"R", "r0", "r1", "r2", "r3", "r'2", "r'3"});
    CHECK(nncpdf_elimination_order(3) == std::vector<std::string>{"r'2", "r'3", "r1", "r2", "r3"});
  }

  TEST_CASE("affine fit recovers the slope in B") {
    // At B = 2, 3, 4 the coefficient of r1 is B and the atom weight is B - 1.
    std::vector<std::vector<FamilyConstraint>> fams;
    for (int B : {2, 3, 4})
      fams.push_back({family("src", std::to_string(B) + "*r1 < " + std::to_string(B - 1) + "*I(A;B)")});
    std::map<std::string, InfoAtom> table{{"I(A;B)", parse_atom("I(A;B)")}};
    const auto r = fit_affine({2, 3, 4}, fams, {"R", "r1"}, table);
    REQUIRE(r.inequalities.size() == 1);
    CHECK(r.inequalities[0].lhs.coef("r1") == AffineCoef(0, 1));
    CHECK(r.inequalities[0].rhs.coef("I(A;B)") == AffineCoef(-1, 1));
  }

  TEST_CASE("non-affine families are rejected") {
    std::vector<std::vector<FamilyConstraint>> fams;
    for (int B : {2, 3, 4}) fams.push_back({family("src", std::to_string(B * B) + "*r1 < I(A;B)")});
    std::map<std::string, InfoAtom> table{{"I(A;B)", parse_atom("I(A;B)")}};
    CHECK_THROWS_AS(fit_affine({2, 3, 4}, fams, {"R", "r1"}, table), Error);
    fams[2] = {family("other", "r1 < I(A;B)")};
    CHECK_THROWS_AS(fit_affine({2, 3, 4}, fams, {"R", "r1"}, table), Error);
  }

  TEST_CASE("leading order in B") {
    SymbolicRegion r;
    r.variables = {"R", "r0", "r1"};
    SymbolicInequality q;
    // (B - 1) r1 + r0 < B I(A;B) + I(C;D)  becomes  r1 + R < I(A;B)  with r0 = B R.
    q.lhs.add("r1", AffineCoef(-1, 1));
    q.lhs.add("r0", AffineCoef(1));
    q.rhs.add("I(A;B)", AffineCoef::B());
    q.rhs.add("I(C;D)", AffineCoef(1));
    r.inequalities.push_back(q);
    r.atoms = {{"I(A;B)", parse_atom("I(A;B)")}, {"I(C;D)", parse_atom("I(C;D)")}};
    const auto a = asymptotic_system(r);
    REQUIRE(a.inequalities.size() == 1);
    CHECK(a.inequalities[0] == parse_inequality("R + r1 < I(A;B)"));
    CHECK(std::find(a.variables.begin(), a.variables.end(), "r0") == a.variables.end());
  }

  TEST_CASE("point-to-point projection") {
    const auto d = derive_p2p();
    REQUIRE(d.projected.inequalities.size() == 1);
    CHECK(format_inequality(d.projected.inequalities[0]) == "R < I(X1;Y2)");
    CHECK(d.initialization_blocks == 0);
  }

  TEST_CASE("two-node network reduces to the direct bound") {
    ts::Rng rng(79);
    const auto d = derive_nncpdf(2, {2});
    CHECK(d.initialization_blocks == 1);
    for (int t = 0; t < 5; ++t) {
      const auto net = ts::random_network(rng, 2, {2});
      const auto s = ts::random_scheme(rng, net, {2, 2, 2}, true);
      const auto rep = nncpdf_bound(net, s);
      const double v = evaluate_region(d.projected, atom_values(d.projected, assemble_joint(net, s)));
      CHECK(v == doctest::Approx(rep.bound).epsilon(1e-10));
    }
  }

  TEST_CASE("derived three-node region agrees with the direct bound") {
    ts::Rng rng(83);
    const auto d = derive_nncpdf(3, {3});
    for (const auto& q : d.asymptotic.inequalities) CHECK(q.lhs.b_free());
    int checked = 0;
    for (int t = 0; t < 40 && checked < 5; ++t) {
      const auto net = ts::random_network(rng, 3, {3});
      const auto s = ts::random_scheme(rng, net, {2, 2, 2}, true);
      const auto rep = nncpdf_bound(net, s);
      if (!rep.feasible) continue;
      ++checked;
      const double v = evaluate_region(d.projected, atom_values(d.projected, assemble_joint(net, s)));
      CHECK(v == doctest::Approx(rep.bound).epsilon(1e-10));
    }
    CHECK(checked == 5);
  }
}
