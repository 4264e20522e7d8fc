#include "doctest.h"
#include "nncpdf/network.hpp"
#include "nncpdf/rate_bound.hpp"
#include "support.hpp"

using namespace nncpdf;
namespace ts = testing_support;

namespace {

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::InvalidArgument;
}

}  // namespace

TEST_SUITE("network") {
  TEST_CASE("fixtures load and round-trip through JSON") {
    const auto net = load_network_file(ts::fixture("n3_random_multicast.network.json"));
    const auto s = load_scheme_file(ts::fixture("n3_full.scheme.json"));
    CHECK(net.N == 3);
    CHECK(net.destinations == std::vector<int>{2, 3});
    CHECK(s.N == 3);
    CHECK(s.relay(2).v == 2);
    const auto net2 = load_network(network_to_json(net));
    const auto s2 = load_scheme(scheme_to_json(s));
    CHECK(net2.channel == net.channel);
    CHECK(net2.destinations == net.destinations);
    CHECK(s2.head == s.head);
    CHECK(s2.relay(3).compressor == s.relay(3).compressor);
  }

  TEST_CASE("schema and shape errors carry their kind") {
    CHECK(kind_of([] { load_network("{\"N\": 2}"); }) == ErrorKind::SchemaError);
    CHECK(kind_of([] { load_network("not json"); }) == ErrorKind::SchemaError);
    CHECK(kind_of([] {
            load_network(R"({"N":2,"x_alphabets":[2,1],"y_alphabets":[1,2],"channel":[1,0,0],"destinations":[2]})");
          }) == ErrorKind::ShapeMismatch);
    CHECK(kind_of([] {
            load_network(R"({"N":2,"x_alphabets":[2,1],"y_alphabets":[1,2],"channel":[1,0,0,1],"destinations":[3]})");
          }) == ErrorKind::IndexOutOfRange);
    CHECK(kind_of([] {
            load_network(R"({"N":2,"x_alphabets":[2,1],"y_alphabets":[1,2],"channel":[0.5,0,0,1],"destinations":[2]})");
          }) == ErrorKind::NotNormalized);
    CHECK(kind_of([] { load_network_file("/nonexistent/net.json"); }) == ErrorKind::InvalidArgument);
  }

  TEST_CASE("assembled joint of the noiseless bit") {
    const auto net = load_network_file(ts::fixture("n2_noiseless_bit.network.json"));
    const auto s = load_scheme_file(ts::fixture("n2_uniform.scheme.json"));
    const auto j = assemble_joint(net, s);
    CHECK(mutual_information(j, {{x_label(1)}, {y_label(2)}, {}}) == doctest::Approx(1.0));
    CHECK(entropy(j, {y_label(2)}, {x_label(1)}) == doctest::Approx(0.0));
    CHECK(j.contains(yhat_label(2)));
    CHECK(j.contains(v_label(2)));
  }

  TEST_CASE("input marginal factors through the kernels") {
    ts::Rng rng(17);
    const auto net = ts::random_network(rng, 3, {3});
    const auto s = ts::random_scheme(rng, net, {2, 2, 2}, false);
    const auto pm = input_marginal(s);
    const auto j = assemble_joint(net, s);
    const auto m = marginalize(j, {x_label(1), x_label(2), x_label(3)});
    REQUIRE(pm.size() == m.mass.size());
    for (std::size_t i = 0; i < pm.size(); ++i) CHECK(pm[i] == doctest::Approx(m.mass[i]).epsilon(1e-12));
  }

  TEST_CASE("reduced forms") {
    ts::Rng rng(19);
    const auto net = ts::random_network(rng, 3, {3});
    const auto s = ts::random_scheme(rng, net, {2, 2, 2}, true);
    const auto nnc = make_nnc_scheme(s);
    for (const auto& r : nnc.relays) {
      CHECK(r.u == 1);
      CHECK(r.v == 1);
      CHECK(r.yhat == 2);
    }
    const auto ddf = make_ddf_scheme(s);
    for (const auto& r : ddf.relays) {
      CHECK(r.yhat == 1);
      CHECK(r.v == r.x);
    }
    // X1 keeps its marginal in both forms.
    const auto x1 = [&](const SchemeDistribution& t) {
      return marginalize(assemble_joint(net, t), {x_label(1)}).mass;
    };
    CHECK(x1(nnc)[0] == doctest::Approx(x1(s)[0]));
    CHECK(nnc_bound(net, nnc) == doctest::Approx(nncpdf_bound(net, nnc).bound).epsilon(1e-12));
    CHECK(kind_of([&] { nnc_bound(net, s); }) == ErrorKind::WrongForm);
    CHECK(kind_of([&] { ddf_bound(net, s); }) == ErrorKind::WrongForm);
  }

  TEST_CASE("trivial scheme has unit auxiliary alphabets") {
    ts::Rng rng(23);
    const auto net = ts::random_network(rng, 4, {4});
    const auto t = trivial_scheme(net);
    CHECK(t.relays.size() == 3);
    for (const auto& r : t.relays) CHECK(r.v * r.u * r.yhat == 1);
    validate_scheme(t);
  }
}
