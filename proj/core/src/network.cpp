#include "nncpdf/network.hpp"

#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "json.hpp"

namespace nncpdf {

using nlohmann::json;

namespace {

std::size_t product(const std::vector<std::size_t>& v) {
  return std::accumulate(v.begin(), v.end(), std::size_t{1}, std::multiplies<>());
}

// Row-major strides for the given shape (last index fastest).
std::vector<std::size_t> strides_of(const std::vector<std::size_t>& shape) {
  std::vector<std::size_t> s(shape.size(), 1);
  for (std::size_t i = shape.size(); i-- > 1;) s[i - 1] = s[i] * shape[i];
  return s;
}

void check_rows(const std::vector<double>& kernel, std::size_t cols, const std::string& what) {
  if (cols == 0 || kernel.size() % cols != 0)
    throw Error(ErrorKind::ShapeMismatch, what + ": length not a multiple of the row width");
  for (std::size_t r = 0; r < kernel.size() / cols; ++r) {
    double s = 0.0;
    for (std::size_t c = 0; c < cols; ++c) {
      double p = kernel[r * cols + c];
      if (!(p >= -kNegativeMassTol))
        throw Error(ErrorKind::NegativeMass, what + ": negative entry in row " + std::to_string(r));
      s += p;
    }
    if (std::abs(s - 1.0) > kNormalizationTol)
      throw Error(ErrorKind::NotNormalized,
                  what + ": row " + std::to_string(r) + " sums to " + std::to_string(s));
  }
}

std::vector<double> read_reals(const json& j, const std::string& field) {
  if (!j.is_array()) throw Error(ErrorKind::SchemaError, "field '" + field + "' must be an array");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& e : j) {
    if (!e.is_number())
      throw Error(ErrorKind::SchemaError, "field '" + field + "' must contain numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

std::vector<std::size_t> read_sizes(const json& j, const std::string& field) {
  if (!j.is_array()) throw Error(ErrorKind::SchemaError, "field '" + field + "' must be an array");
  std::vector<std::size_t> out;
  for (const auto& e : j) {
    if (!e.is_number_integer() || e.get<long long>() < 1)
      throw Error(ErrorKind::SchemaError, "field '" + field + "' must hold integers >= 1");
    out.push_back(e.get<std::size_t>());
  }
  return out;
}

const json& require(const json& doc, const char* field) {
  if (!doc.is_object() || !doc.contains(field))
    throw Error(ErrorKind::SchemaError, std::string("missing field '") + field + "'");
  return doc.at(field);
}

json parse_document(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::SchemaError, std::string("malformed document: ") + e.what());
  }
}

// Re-raise with the path in front, without repeating the kind prefix.
[[noreturn]] void rethrow_with_path(const Error& e, const std::string& path) {
  std::string msg = e.what();
  const std::string prefix = std::string(to_string(e.kind())) + ": ";
  if (msg.rfind(prefix, 0) == 0) msg.erase(0, prefix.size());
  throw Error(e.kind(), path + ": " + msg);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidArgument, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::size_t Network::input_states() const { return product(x_sizes); }
std::size_t Network::output_states() const { return product(y_sizes); }

VariableLabel x_label(int k) { return {"X" + std::to_string(k)}; }
VariableLabel y_label(int k) { return {"Y" + std::to_string(k)}; }
VariableLabel v_label(int k) { return {"V" + std::to_string(k)}; }
VariableLabel u_label(int k) { return {"U" + std::to_string(k)}; }
VariableLabel yhat_label(int k) { return {"Yhat" + std::to_string(k)}; }

void validate_network(const Network& net) {
  if (net.N < 2) throw Error(ErrorKind::SchemaError, "N must be at least 2");
  const auto n = static_cast<std::size_t>(net.N);
  if (net.x_sizes.size() != n || net.y_sizes.size() != n)
    throw Error(ErrorKind::ShapeMismatch, "alphabet lists must have N entries");
  for (auto s : net.x_sizes)
    if (s == 0) throw Error(ErrorKind::ShapeMismatch, "empty input alphabet");
  for (auto s : net.y_sizes)
    if (s == 0) throw Error(ErrorKind::ShapeMismatch, "empty output alphabet");
  if (net.channel.size() != net.input_states() * net.output_states())
    throw Error(ErrorKind::ShapeMismatch, "channel has " + std::to_string(net.channel.size()) +
                                              " entries, expected " +
                                              std::to_string(net.input_states() * net.output_states()));
  check_rows(net.channel, net.output_states(), "channel");
  if (net.destinations.empty()) throw Error(ErrorKind::SchemaError, "no destinations");
  std::set<int> seen;
  for (int d : net.destinations) {
    if (d < 2 || d > net.N)
      throw Error(ErrorKind::IndexOutOfRange, "destination " + std::to_string(d) + " not in [2:N]");
    if (!seen.insert(d).second)
      throw Error(ErrorKind::SchemaError, "destination " + std::to_string(d) + " listed twice");
  }
}

void validate_scheme(const SchemeDistribution& s) {
  if (s.N < 2) throw Error(ErrorKind::SchemaError, "N must be at least 2");
  if (s.relays.size() != static_cast<std::size_t>(s.N - 1))
    throw Error(ErrorKind::ShapeMismatch, "scheme must describe N-1 relays");
  std::size_t head_states = s.x1;
  for (const auto& r : s.relays) head_states *= r.v;
  for (const auto& r : s.relays) head_states *= r.u;
  if (s.head.size() != head_states)
    throw Error(ErrorKind::ShapeMismatch, "head has wrong length");
  check_rows(s.head, head_states, "head");
  for (int k = 2; k <= s.N; ++k) {
    const auto& r = s.relay(k);
    const std::string tag = "node " + std::to_string(k);
    if (r.v == 0 || r.u == 0 || r.yhat == 0 || r.x == 0 || r.y == 0)
      throw Error(ErrorKind::ShapeMismatch, tag + ": empty alphabet");
    if (r.input_kernel.size() != r.v * r.x)
      throw Error(ErrorKind::ShapeMismatch, tag + ": input kernel has wrong length");
    check_rows(r.input_kernel, r.x, tag + " input kernel");
    if (r.compressor.size() != r.x * r.u * r.v * r.y * r.yhat)
      throw Error(ErrorKind::ShapeMismatch, tag + ": compressor has wrong length");
    check_rows(r.compressor, r.yhat, tag + " compressor");
  }
}

Network load_network(const std::string& json_text) {
  const json doc = parse_document(json_text);
  Network net;
  const auto& jn = require(doc, "N");
  if (!jn.is_number_integer()) throw Error(ErrorKind::SchemaError, "field 'N' must be an integer");
  net.N = jn.get<int>();
  net.x_sizes = read_sizes(require(doc, "x_alphabets"), "x_alphabets");
  net.y_sizes = read_sizes(require(doc, "y_alphabets"), "y_alphabets");
  net.channel = read_reals(require(doc, "channel"), "channel");
  const auto& jd = require(doc, "destinations");
  if (!jd.is_array()) throw Error(ErrorKind::SchemaError, "field 'destinations' must be an array");
  for (const auto& d : jd) {
    if (!d.is_number_integer())
      throw Error(ErrorKind::SchemaError, "destinations must be integers");
    net.destinations.push_back(d.get<int>());
  }
  if (net.x_sizes.size() != static_cast<std::size_t>(net.N) ||
      net.y_sizes.size() != static_cast<std::size_t>(net.N))
    throw Error(ErrorKind::SchemaError, "alphabet lists must have N entries");
  validate_network(net);
  return net;
}

SchemeDistribution load_scheme(const std::string& json_text) {
  const json doc = parse_document(json_text);
  const auto v = read_sizes(require(doc, "v_alphabets"), "v_alphabets");
  const auto u = read_sizes(require(doc, "u_alphabets"), "u_alphabets");
  const auto yh = read_sizes(require(doc, "yhat_alphabets"), "yhat_alphabets");
  if (u.size() != v.size() || yh.size() != v.size())
    throw Error(ErrorKind::SchemaError, "auxiliary alphabet lists differ in length");
  SchemeDistribution s;
  s.N = static_cast<int>(v.size()) + 1;
  s.head = read_reals(require(doc, "head"), "head");
  const std::size_t aux = product(v) * product(u);
  if (s.head.empty() || s.head.size() % aux != 0)
    throw Error(ErrorKind::SchemaError, "head length is not a multiple of the auxiliary state count");
  s.x1 = s.head.size() / aux;

  const auto& ji = require(doc, "input_kernels");
  const auto& jc = require(doc, "compressors");
  if (!ji.is_array() || ji.size() != v.size() || !jc.is_array() || jc.size() != v.size())
    throw Error(ErrorKind::SchemaError, "input_kernels and compressors need one entry per relay");
  for (std::size_t i = 0; i < v.size(); ++i) {
    RelayScheme r;
    r.v = v[i];
    r.u = u[i];
    r.yhat = yh[i];
    r.input_kernel = read_reals(ji[i], "input_kernels");
    if (r.input_kernel.empty() || r.input_kernel.size() % r.v != 0)
      throw Error(ErrorKind::SchemaError, "input kernel " + std::to_string(i + 2) + " has bad length");
    r.x = r.input_kernel.size() / r.v;
    r.compressor = read_reals(jc[i], "compressors");
    const std::size_t per_y = r.x * r.u * r.v * r.yhat;
    if (r.compressor.empty() || r.compressor.size() % per_y != 0)
      throw Error(ErrorKind::SchemaError, "compressor " + std::to_string(i + 2) + " has bad length");
    r.y = r.compressor.size() / per_y;
    s.relays.push_back(std::move(r));
  }
  validate_scheme(s);
  return s;
}

Network load_network_file(const std::string& path) {
  try {
    return load_network(read_file(path));
  } catch (const Error& e) {
    rethrow_with_path(e, path);
  }
}

SchemeDistribution load_scheme_file(const std::string& path) {
  try {
    return load_scheme(read_file(path));
  } catch (const Error& e) {
    rethrow_with_path(e, path);
  }
}

std::string network_to_json(const Network& net) {
  json doc;
  doc["N"] = net.N;
  doc["x_alphabets"] = net.x_sizes;
  doc["y_alphabets"] = net.y_sizes;
  doc["channel"] = net.channel;
  doc["destinations"] = net.destinations;
  return doc.dump(2);
}

std::string scheme_to_json(const SchemeDistribution& s) {
  json doc;
  std::vector<std::size_t> v, u, yh;
  json kernels = json::array(), comps = json::array();
  for (const auto& r : s.relays) {
    v.push_back(r.v);
    u.push_back(r.u);
    yh.push_back(r.yhat);
    kernels.push_back(r.input_kernel);
    comps.push_back(r.compressor);
  }
  doc["v_alphabets"] = v;
  doc["u_alphabets"] = u;
  doc["yhat_alphabets"] = yh;
  doc["head"] = s.head;
  doc["input_kernels"] = kernels;
  doc["compressors"] = comps;
  return doc.dump(2);
}

JointDistribution assemble_joint(const Network& net, const SchemeDistribution& s) {
  if (s.N != net.N) throw Error(ErrorKind::ShapeMismatch, "scheme and network disagree on N");
  if (s.x1 != net.x_size(1)) throw Error(ErrorKind::ShapeMismatch, "|X1| differs between network and scheme");
  for (int k = 2; k <= net.N; ++k) {
    if (s.relay(k).x != net.x_size(k))
      throw Error(ErrorKind::ShapeMismatch, "|X" + std::to_string(k) + "| differs between network and scheme");
    if (s.relay(k).y != net.y_size(k))
      throw Error(ErrorKind::ShapeMismatch, "|Y" + std::to_string(k) + "| differs between network and scheme");
  }

  std::vector<Factor> factors;
  Factor head;
  head.outputs.push_back({x_label(1), s.x1});
  for (int k = 2; k <= net.N; ++k) head.outputs.push_back({v_label(k), s.relay(k).v});
  for (int k = 2; k <= net.N; ++k) head.outputs.push_back({u_label(k), s.relay(k).u});
  head.kernel = s.head;
  factors.push_back(std::move(head));

  for (int k = 2; k <= net.N; ++k)
    factors.push_back({{{x_label(k), s.relay(k).x}}, {v_label(k)}, s.relay(k).input_kernel});

  Factor ch;
  for (int k = 1; k <= net.N; ++k) {
    ch.inputs.push_back(x_label(k));
    ch.outputs.push_back({y_label(k), net.y_size(k)});
  }
  ch.kernel = net.channel;
  factors.push_back(std::move(ch));

  for (int k = 2; k <= net.N; ++k) {
    const auto& r = s.relay(k);
    factors.push_back({{{yhat_label(k), r.yhat}},
                       {x_label(k), u_label(k), v_label(k), y_label(k)},
                       r.compressor});
  }
  return product_compose(factors);
}

std::vector<double> input_marginal(const SchemeDistribution& s) {
  std::vector<Factor> factors;
  Factor head;
  head.outputs.push_back({x_label(1), s.x1});
  for (int k = 2; k <= s.N; ++k) head.outputs.push_back({v_label(k), s.relay(k).v});
  for (int k = 2; k <= s.N; ++k) head.outputs.push_back({u_label(k), s.relay(k).u});
  head.kernel = s.head;
  factors.push_back(std::move(head));
  LabelSet xs{x_label(1)};
  for (int k = 2; k <= s.N; ++k) {
    factors.push_back({{{x_label(k), s.relay(k).x}}, {v_label(k)}, s.relay(k).input_kernel});
    xs.push_back(x_label(k));
  }
  return marginalize(product_compose(factors), xs).mass;
}

namespace {

// Joint p(x_1, v_2..v_N, u_2..u_N, x_2..x_N) as a dense array in that order.
JointDistribution head_with_inputs(const SchemeDistribution& s) {
  std::vector<Factor> factors;
  Factor head;
  head.outputs.push_back({x_label(1), s.x1});
  for (int k = 2; k <= s.N; ++k) head.outputs.push_back({v_label(k), s.relay(k).v});
  for (int k = 2; k <= s.N; ++k) head.outputs.push_back({u_label(k), s.relay(k).u});
  head.kernel = s.head;
  factors.push_back(std::move(head));
  for (int k = 2; k <= s.N; ++k)
    factors.push_back({{{x_label(k), s.relay(k).x}}, {v_label(k)}, s.relay(k).input_kernel});
  return product_compose(factors);
}

}  // namespace

SchemeDistribution make_nnc_scheme(const SchemeDistribution& s) {
  const JointDistribution joint = head_with_inputs(s);
  SchemeDistribution out;
  out.N = s.N;
  out.x1 = s.x1;
  out.head = marginalize(joint, {x_label(1)}).mass;
  for (int k = 2; k <= s.N; ++k) {
    const auto& r = s.relay(k);
    // p(v_k, u_k, x_k) with x_k fastest.
    const auto vux = marginalize(joint, {v_label(k), u_label(k), x_label(k)}).mass;
    std::vector<double> px(r.x, 0.0);
    for (std::size_t i = 0; i < vux.size(); ++i) px[i % r.x] += vux[i];

    RelayScheme nr;
    nr.x = r.x;
    nr.y = r.y;
    nr.yhat = r.yhat;
    nr.input_kernel = px;
    nr.compressor.assign(r.x * r.y * r.yhat, 0.0);
    for (std::size_t x = 0; x < r.x; ++x) {
      for (std::size_t v = 0; v < r.v; ++v) {
        for (std::size_t u = 0; u < r.u; ++u) {
          // p(u, v | x); uniform over (u, v) where x has no mass.
          const double w = px[x] > 0.0 ? vux[(v * r.u + u) * r.x + x] / px[x]
                                       : 1.0 / static_cast<double>(r.u * r.v);
          if (w == 0.0) continue;
          for (std::size_t y = 0; y < r.y; ++y) {
            const std::size_t src = (((x * r.u + u) * r.v + v) * r.y + y) * r.yhat;
            const std::size_t dst = (x * r.y + y) * r.yhat;
            for (std::size_t h = 0; h < r.yhat; ++h) nr.compressor[dst + h] += w * r.compressor[src + h];
          }
        }
      }
    }
    out.relays.push_back(std::move(nr));
  }
  return out;
}

SchemeDistribution make_ddf_scheme(const SchemeDistribution& s) {
  const JointDistribution joint = head_with_inputs(s);
  const int N = s.N;

  SchemeDistribution out;
  out.N = N;
  out.x1 = s.x1;
  std::vector<std::vector<double>> px(static_cast<std::size_t>(N + 1));
  for (int k = 2; k <= N; ++k) {
    const auto& r = s.relay(k);
    px[static_cast<std::size_t>(k)] = marginalize(joint, {x_label(k)}).mass;
    RelayScheme nr;
    nr.v = r.x;
    nr.x = r.x;
    nr.u = r.u;
    nr.y = r.y;
    nr.yhat = 1;
    nr.input_kernel.assign(r.x * r.x, 0.0);
    for (std::size_t i = 0; i < r.x; ++i) nr.input_kernel[i * r.x + i] = 1.0;
    nr.compressor.assign(r.x * r.u * r.x * r.y, 1.0);
    out.relays.push_back(std::move(nr));
  }

  // Old p(x_1, u, x_2..x_N) reordered as (x_1, x_2..x_N, u) so the new head
  // p(x_1, v, u) = prod p(v_k) * p_old(x_1, u | x_{2..N} = v) can be read off.
  LabelSet keep{x_label(1)};
  for (int k = 2; k <= N; ++k) keep.push_back(u_label(k));
  for (int k = 2; k <= N; ++k) keep.push_back(x_label(k));
  const auto old = marginalize(joint, keep);

  std::vector<std::size_t> shape{s.x1};
  for (int k = 2; k <= N; ++k) shape.push_back(s.relay(k).u);
  for (int k = 2; k <= N; ++k) shape.push_back(s.relay(k).x);
  const auto old_stride = strides_of(shape);

  std::size_t xs_states = 1, u_states = 1;
  for (int k = 2; k <= N; ++k) {
    xs_states *= s.relay(k).x;
    u_states *= s.relay(k).u;
  }
  const auto nrel = static_cast<std::size_t>(N - 1);

  auto old_index = [&](std::size_t x1, std::size_t uflat, std::size_t xflat) {
    std::size_t idx = x1 * old_stride[0];
    for (std::size_t i = nrel; i-- > 0;) {
      idx += (uflat % shape[1 + i]) * old_stride[1 + i];
      uflat /= shape[1 + i];
    }
    for (std::size_t i = nrel; i-- > 0;) {
      idx += (xflat % shape[1 + nrel + i]) * old_stride[1 + nrel + i];
      xflat /= shape[1 + nrel + i];
    }
    return idx;
  };

  out.head.assign(s.x1 * xs_states * u_states, 0.0);
  for (std::size_t xf = 0; xf < xs_states; ++xf) {
    double pv = 1.0;
    {
      std::size_t rem = xf;
      for (int k = N; k >= 2; --k) {
        const std::size_t sz = s.relay(k).x;
        pv *= px[static_cast<std::size_t>(k)][rem % sz];
        rem /= sz;
      }
    }
    double cond_norm = 0.0;
    for (std::size_t x1 = 0; x1 < s.x1; ++x1)
      for (std::size_t uf = 0; uf < u_states; ++uf) cond_norm += old.mass[old_index(x1, uf, xf)];
    for (std::size_t x1 = 0; x1 < s.x1; ++x1) {
      for (std::size_t uf = 0; uf < u_states; ++uf) {
        const double c = cond_norm > 0.0 ? old.mass[old_index(x1, uf, xf)] / cond_norm
                                         : 1.0 / static_cast<double>(s.x1 * u_states);
        out.head[(x1 * xs_states + xf) * u_states + uf] = pv * c;
      }
    }
  }
  return out;
}

SchemeDistribution trivial_scheme(const Network& net) {
  SchemeDistribution s;
  s.N = net.N;
  s.x1 = net.x_size(1);
  s.head.assign(s.x1, 1.0 / static_cast<double>(s.x1));
  for (int k = 2; k <= net.N; ++k) {
    RelayScheme r;
    r.x = net.x_size(k);
    r.y = net.y_size(k);
    r.input_kernel.assign(r.x, 1.0 / static_cast<double>(r.x));
    r.compressor.assign(r.x * r.y, 1.0);
    s.relays.push_back(std::move(r));
  }
  return s;
}

}  // namespace nncpdf
