#include <cmath>

#include "doctest.h"
#include "nncpdf/probability.hpp"
#include "support.hpp"

using namespace nncpdf;

namespace {

JointDistribution pair(std::vector<double> mass, std::size_t a = 2, std::size_t b = 2) {
  JointDistribution d;
  d.variables = {{"A", a}, {"B", b}};
  d.mass = std::move(mass);
  return d;
}

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error raised");
  return ErrorKind::InvalidArgument;
}

}  // namespace

TEST_SUITE("probability") {
  TEST_CASE("validation rejects malformed pmfs") {
    CHECK(kind_of([] { validate_pmf(pair({0.5, 0.5, 0.5, 0.5})); }) == ErrorKind::NotNormalized);
    CHECK(kind_of([] { validate_pmf(pair({1.5, -0.5, 0, 0})); }) == ErrorKind::NegativeMass);
    CHECK(kind_of([] { validate_pmf(pair({1.0, 0, 0})); }) == ErrorKind::ShapeMismatch);
    auto dup = pair({0.25, 0.25, 0.25, 0.25});
    dup.variables[1].label = "A";
    CHECK_THROWS_AS(validate_pmf(dup), Error);
  }

  TEST_CASE("tiny negative entries are clamped") {
    const auto d = validate_pmf(pair({0.5, -1e-17, 0.5, 0.0}));
    CHECK(d.mass[1] == 0.0);
  }

  TEST_CASE("entropy of closed-form distributions") {
    const auto u = validate_pmf(pair({0.25, 0.25, 0.25, 0.25}));
    CHECK(entropy(u, {"A", "B"}) == doctest::Approx(2.0));
    CHECK(entropy(u, {"A"}, {"B"}) == doctest::Approx(1.0));
    CHECK(mutual_information(u, {{"A"}, {"B"}, {}}) == doctest::Approx(0.0));
    // A = B: the mutual information is the entropy of A.
    const auto copy = validate_pmf(pair({0.3, 0.0, 0.0, 0.7}));
    const double h = -(0.3 * std::log2(0.3) + 0.7 * std::log2(0.7));
    CHECK(mutual_information(copy, {{"A"}, {"B"}, {}}) == doctest::Approx(h).epsilon(1e-12));
    CHECK(entropy(copy, {"A"}, {"B"}) == doctest::Approx(0.0));
  }

  TEST_CASE("marginalize keeps the original axis order") {
    testing_support::Rng rng(3);
    const auto d = validate_pmf(testing_support::random_joint(rng, 4, 3));
    const auto m = marginalize(d, {"A3", "A1"});
    REQUIRE(m.variables.size() == 2);
    CHECK(m.variables[0].label == VariableLabel("A1"));
    CHECK(m.variables[1].label == VariableLabel("A3"));
    double s = 0;
    for (double x : m.mass) s += x;
    CHECK(s == doctest::Approx(1.0));
    CHECK(kind_of([&] { marginalize(d, {"nope"}); }) == ErrorKind::UnknownVariable);
  }

  TEST_CASE("overlapping arguments are rejected") {
    const auto u = validate_pmf(pair({0.25, 0.25, 0.25, 0.25}));
    CHECK(kind_of([&] { mutual_information(u, {{"A"}, {"A"}, {}}); }) == ErrorKind::OverlappingSets);
  }

  TEST_CASE("product_compose chains factors") {
    Factor px{{{"X", 2}}, {}, {0.2, 0.8}};
    Factor py{{{"Y", 2}}, {"X"}, {0.9, 0.1, 0.3, 0.7}};
    const auto j = product_compose({px, py});
    REQUIRE(j.mass.size() == 4);
    CHECK(j.mass[0] == doctest::Approx(0.18));
    CHECK(j.mass[1] == doctest::Approx(0.02));
    CHECK(j.mass[2] == doctest::Approx(0.24));
    CHECK(j.mass[3] == doctest::Approx(0.56));
    CHECK(kind_of([&] { product_compose({py, px}); }) == ErrorKind::CyclicFactorization);
    Factor bad{{{"Y", 2}}, {"X"}, {0.9, 0.2, 0.3, 0.7}};
    CHECK(kind_of([&] { product_compose({px, bad}); }) == ErrorKind::RowNotNormalized);
  }

  TEST_CASE("evaluator cache agrees with the free functions") {
    testing_support::Rng rng(5);
    const auto d = validate_pmf(testing_support::random_joint(rng, 5, 3));
    InfoEvaluator ev(d);
    const InfoAtom a{{"A0", "A4"}, {"A2"}, {"A1", "A3"}};
    CHECK(ev.mutual_information(a) == doctest::Approx(mutual_information(d, a)).epsilon(1e-13));
    CHECK(ev.mutual_information(a) == doctest::Approx(ev.mutual_information(a)));
  }

  TEST_CASE("labels print with their block") {
    CHECK(VariableLabel("X1", 3).str() == "X1[3]");
    CHECK(VariableLabel("Y2").str() == "Y2");
    CHECK(InfoAtom{{"X1"}, {"Y2", "Y3"}, {"X2"}}.str() == "I(X1;Y2,Y3|X2)");
  }
}
