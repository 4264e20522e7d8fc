#include <cmath>

#include "doctest.h"
#include "nncpdf/fme.hpp"
#include "nncpdf/symbolic.hpp"

using namespace nncpdf;

TEST_SUITE("symbolic") {
  TEST_CASE("affine coefficients are exact") {
    AffineCoef a(Rational(1, 3), Rational(2));
    AffineCoef b(Rational(2, 3));
    const auto c = a + b;
    CHECK(c.c0 == 1);
    CHECK(c.c1 == 2);
    CHECK(c.at(Rational(3)) == 7);
    CHECK((a - a).is_zero());
    CHECK(AffineCoef::B().at(5.0) == doctest::Approx(5.0));
    CHECK(b.b_free());
    CHECK_FALSE(a.b_free());
  }

  TEST_CASE("linear forms drop zero coefficients") {
    LinearForm f{{"r1", AffineCoef(1)}, {"r2", AffineCoef(2)}};
    f.add("r1", AffineCoef(-1));
    CHECK(f.size() == 1);
    CHECK(f.coef("r1").is_zero());
    CHECK(f.evaluate({{"r2", 0.5}}) == doctest::Approx(1.0));
  }

  TEST_CASE("inequalities round-trip through text") {
    const std::string line = "R - 1/2*r1 < 1/4*I(X1;Y2|X2) - I(V2;V3)";
    const auto q = parse_inequality(line);
    CHECK(q.sense == Sense::Less);
    CHECK(q.lhs.coef("r1").c0 == Rational(-1, 2));
    CHECK(parse_inequality(format_inequality(q)) == q);
    const auto atom = parse_atom("I(X1,V2;Y3|X3,U2)");
    CHECK(atom.left.size() == 2);
    CHECK(atom.given.size() == 2);
    CHECK_THROWS_AS(parse_inequality("R << I(X;Y)"), Error);
    CHECK_THROWS_AS(parse_atom("I(X;Y"), Error);
  }

  TEST_CASE("regions round-trip through text") {
    const std::string text = "# variables: R r1\nR - r1 < 0\nr1 < I(X1;Y2)\n";
    const auto r = parse_region(text);
    CHECK(r.variables == std::vector<std::string>{"R", "r1"});
    CHECK(r.inequalities.size() == 2);
    CHECK(r.atoms.size() == 1);
    const auto again = parse_region(format_region(r));
    CHECK(again.inequalities.size() == 2);
    CHECK(again.inequalities[1] == r.inequalities[1]);
  }
}

TEST_SUITE("fme") {
  TEST_CASE("splitting a rate across two links") {
    // R <= r1 + r2, r1 < a, r2 < b projects to R < a + b.
    const auto r = parse_region(
        "# variables: R r1 r2\n"
        "R - r1 - r2 < 0\n"
        "r1 < I(A;Y)\n"
        "r2 < I(B;Y)\n"
        "-r1 < 0\n"
        "-r2 < 0\n");
    const auto p = project_to_R(r);
    CHECK(p.variables == std::vector<std::string>{"R"});
    REQUIRE(p.inequalities.size() == 1);
    CHECK(p.inequalities[0] == parse_inequality("R < I(A;Y) + I(B;Y)"));
    const std::map<std::string, double> v{{"I(A;Y)", 0.3}, {"I(B;Y)", 0.45}};
    CHECK(evaluate_region(r, v) == doctest::Approx(0.75));
    CHECK(contains_point(r, {{"R", 0.7}, {"r1", 0.3}, {"r2", 0.4}}, v));
    CHECK_FALSE(contains_point(r, {{"R", 0.8}, {"r1", 0.3}, {"r2", 0.45}}, v));
  }

  TEST_CASE("compression rates bounded from both sides") {
    // r' above a threshold but below what the destination can absorb.
    const auto r = parse_region(
        "# variables: R rp\n"
        "-rp < -I(Y;Q|X)\n"
        "R + rp < I(X,Q;Z)\n"
        "R < I(X;Z,Q)\n");
    const std::map<std::string, double> v{{"I(Y;Q|X)", 0.2}, {"I(X,Q;Z)", 0.9}, {"I(X;Z,Q)", 0.6}};
    CHECK(evaluate_region(r, v) == doctest::Approx(0.6));
    const std::map<std::string, double> w{{"I(Y;Q|X)", 0.5}, {"I(X,Q;Z)", 0.9}, {"I(X;Z,Q)", 0.6}};
    CHECK(evaluate_region(r, w) == doctest::Approx(0.4));
    const auto iv = variable_interval(r, "rp", {{"R", 0.3}}, w);
    CHECK(iv.lo == doctest::Approx(0.5));
    CHECK(iv.hi == doctest::Approx(0.6));
    CHECK(iv.nonempty());
  }

  TEST_CASE("empty and unbounded regions") {
    const auto empty = parse_region("# variables: R\n0 < -I(A;B)\nR < I(A;B)\n");
    CHECK(evaluate_region(empty, {{"I(A;B)", 0.5}}) == -INFINITY);
    const auto open = parse_region("# variables: R r1\n-R < 0\nr1 < I(A;B)\n");
    CHECK(evaluate_region(open, {{"I(A;B)", 0.5}}) == INFINITY);
  }

  TEST_CASE("canonical form scales the leading rate") {
    const auto q = canonical(parse_inequality("-2*R + 4*r1 < 2*I(A;B)"), {"R", "r1"});
    CHECK(q.sense == Sense::Greater);
    CHECK(q.lhs.coef("R").c0 == 1);
    CHECK(q.lhs.coef("r1").c0 == -2);
  }

  TEST_CASE("pruning removes dominated rows") {
    const auto r = parse_region(
        "# variables: R\n"
        "R < I(A;B) + I(C;D)\n"
        "R < I(A;B)\n"
        "R < I(A;B)\n"
        "0 < I(A;B)\n");
    const auto p = prune_region(r);
    REQUIRE(p.inequalities.size() == 1);
    CHECK(p.inequalities[0] == parse_inequality("R < I(A;B)"));
  }

  TEST_CASE("inequality budget is enforced") {
    std::string text = "# variables: R a b\n";
    for (int i = 0; i < 6; ++i) text += "R - a < I(X" + std::to_string(i) + ";Y)\n";
    for (int i = 0; i < 6; ++i) text += "a - b < I(Z" + std::to_string(i) + ";Y)\n";
    for (int i = 0; i < 6; ++i) text += "b < I(W" + std::to_string(i) + ";Y)\n";
    FmeOptions opt;
    opt.max_inequalities = 10;
    opt.prune = false;
    CHECK_THROWS_AS(project_to_R(parse_region(text), {"a", "b"}, opt), Error);
  }
}
