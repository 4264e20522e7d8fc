#include "nncpdf/instantiate.hpp"

#include <algorithm>
#include <set>

namespace nncpdf {

namespace {

struct Step {
  std::vector<Variable> outputs;
  LabelSet inputs;
  std::vector<double> kernel;
};

VariableLabel tag(VariableLabel l, int b) {
  l.block = b;
  return l;
}

bool has(const std::set<VariableLabel>& s, const VariableLabel& l) { return s.count(l) > 0; }

// Multiplies the running joint by p(outputs | inputs).
JointDistribution extend(const JointDistribution& cur, const Step& f) {
  std::vector<std::size_t> in_axes;
  for (const auto& l : f.inputs) in_axes.push_back(cur.axis(l));
  std::size_t out_states = 1;
  for (const auto& v : f.outputs) out_states *= v.size;

  JointDistribution next;
  next.variables = cur.variables;
  next.variables.insert(next.variables.end(), f.outputs.begin(), f.outputs.end());
  if (cur.state_count() * out_states > kMaxStateSpace)
    throw Error(ErrorKind::StateSpaceTooLarge, "unfolded joint exceeds the state-space cap");
  next.mass.assign(cur.state_count() * out_states, 0.0);

  const std::size_t n = cur.variables.size();
  std::vector<std::size_t> strides(n, 1);
  for (std::size_t i = n; i-- > 1;) strides[i - 1] = strides[i] * cur.variables[i].size;
  for (std::size_t s = 0; s < cur.mass.size(); ++s) {
    const double m = cur.mass[s];
    if (m == 0.0) continue;
    std::size_t row = 0;
    for (auto a : in_axes) row = row * cur.variables[a].size + (s / strides[a]) % cur.variables[a].size;
    for (std::size_t o = 0; o < out_states; ++o) next.mass[s * out_states + o] = m * f.kernel[row * out_states + o];
  }
  return next;
}

}  // namespace

JointDistribution instantiate_unfolded_joint(const Network& net, const SchemeDistribution& s, int B,
                                             const LabelSet& labels, std::size_t message_size) {
  validate_network(net);
  validate_scheme(s);
  if (s.N != net.N) throw Error(ErrorKind::ShapeMismatch, "scheme and network disagree on N");
  if (B < 1) throw Error(ErrorKind::InvalidArgument, "block count must be at least 1");
  const int N = net.N;

  // Close the requested labels under the parent relation.
  std::set<VariableLabel> need(labels.begin(), labels.end());
  for (const auto& l : labels) {
    if (l.block && (*l.block < 1 || *l.block > B))
      throw Error(ErrorKind::IndexOutOfRange, "label " + l.str() + " lies outside blocks 1.." + std::to_string(B));
  }
  if (need.count(VariableLabel("U0"))) need.insert(VariableLabel("M"));
  for (int b = 1; b <= B; ++b) {
    for (int k = 2; k <= N; ++k)
      if (has(need, tag(yhat_label(k), b)))
        for (auto l : {x_label(k), u_label(k), v_label(k), y_label(k)}) need.insert(tag(l, b));
    for (int k = 1; k <= N; ++k)
      if (has(need, tag(y_label(k), b)))
        for (int j = 1; j <= N; ++j) need.insert(tag(x_label(j), b));
    for (int k = 2; k <= N; ++k)
      if (has(need, tag(x_label(k), b))) need.insert(tag(v_label(k), b));
  }
  for (const auto& l : need) {
    const bool known = (!l.block && (l.name == "M" || l.name == "U0")) || l.block.has_value();
    if (!known) throw Error(ErrorKind::UnknownVariable, "cannot instantiate " + l.str());
  }

  std::vector<Step> steps;
  if (has(need, VariableLabel("M")))
    steps.push_back({{{VariableLabel("M"), message_size}}, {},
                     std::vector<double>(message_size, 1.0 / static_cast<double>(message_size))});
  if (has(need, VariableLabel("U0"))) {
    std::vector<double> copy(message_size * message_size, 0.0);
    for (std::size_t m = 0; m < message_size; ++m) copy[m * message_size + m] = 1.0;
    steps.push_back({{{VariableLabel("U0"), message_size}}, {VariableLabel("M")}, copy});
  }

  for (int b = 1; b <= B; ++b) {
    JointDistribution head;
    head.variables.push_back({tag(x_label(1), b), s.x1});
    for (int k = 2; k <= N; ++k) head.variables.push_back({tag(v_label(k), b), s.relay(k).v});
    for (int k = 2; k <= N; ++k) head.variables.push_back({tag(u_label(k), b), s.relay(k).u});
    head.mass = s.head;
    LabelSet head_keep;
    for (const auto& v : head.variables)
      if (has(need, v.label)) head_keep.push_back(v.label);
    if (!head_keep.empty()) {
      auto h = marginalize(head, head_keep);
      steps.push_back({h.variables, {}, h.mass});
    }

    for (int k = 2; k <= N; ++k)
      if (has(need, tag(x_label(k), b)))
        steps.push_back({{{tag(x_label(k), b), s.relay(k).x}}, {tag(v_label(k), b)}, s.relay(k).input_kernel});

    std::vector<std::size_t> y_axes;
    for (int k = 1; k <= N; ++k)
      if (has(need, tag(y_label(k), b))) y_axes.push_back(static_cast<std::size_t>(N + k - 1));
    if (!y_axes.empty()) {
      // Channel rows are p(y_1..y_N | x); keep only the needed outputs.
      JointDistribution row;
      for (int k = 1; k <= N; ++k) row.variables.push_back({x_label(k), net.x_size(k)});
      for (int k = 1; k <= N; ++k) row.variables.push_back({y_label(k), net.y_size(k)});
      row.mass = net.channel;
      std::vector<std::size_t> axes;
      for (int k = 0; k < N; ++k) axes.push_back(static_cast<std::size_t>(k));
      axes.insert(axes.end(), y_axes.begin(), y_axes.end());
      Step ch;
      ch.kernel = marginal_mass(row, axes);
      for (int k = 1; k <= N; ++k) ch.inputs.push_back(tag(x_label(k), b));
      for (auto a : y_axes) ch.outputs.push_back({tag(row.variables[a].label, b), row.variables[a].size});
      steps.push_back(std::move(ch));
    }

    for (int k = 2; k <= N; ++k)
      if (has(need, tag(yhat_label(k), b)))
        steps.push_back({{{tag(yhat_label(k), b), s.relay(k).yhat}},
                         {tag(x_label(k), b), tag(u_label(k), b), tag(v_label(k), b), tag(y_label(k), b)},
                         s.relay(k).compressor});
  }

  const std::set<VariableLabel> wanted(labels.begin(), labels.end());
  JointDistribution cur;
  cur.mass = {1.0};
  for (std::size_t i = 0; i < steps.size(); ++i) {
    cur = extend(cur, steps[i]);
    std::set<VariableLabel> later;
    for (std::size_t j = i + 1; j < steps.size(); ++j) later.insert(steps[j].inputs.begin(), steps[j].inputs.end());
    LabelSet keep;
    for (const auto& v : cur.variables)
      if (wanted.count(v.label) || later.count(v.label)) keep.push_back(v.label);
    if (keep.size() != cur.variables.size()) cur = marginalize(cur, keep);
  }
  for (const auto& l : labels)
    if (!cur.contains(l)) throw Error(ErrorKind::UnknownVariable, "label " + l.str() + " was not produced");
  return cur;
}

}  // namespace nncpdf
