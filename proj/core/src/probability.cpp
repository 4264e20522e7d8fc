#include "nncpdf/probability.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

namespace nncpdf {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotNormalized: return "NotNormalized";
    case ErrorKind::NegativeMass: return "NegativeMass";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::UnknownVariable: return "UnknownVariable";
    case ErrorKind::OverlappingSets: return "OverlappingSets";
    case ErrorKind::CyclicFactorization: return "CyclicFactorization";
    case ErrorKind::RowNotNormalized: return "RowNotNormalized";
    case ErrorKind::StateSpaceTooLarge: return "StateSpaceTooLarge";
    case ErrorKind::SchemaError: return "SchemaError";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::InvalidCut: return "InvalidCut";
    case ErrorKind::WrongForm: return "WrongForm";
    case ErrorKind::WrongN: return "WrongN";
    case ErrorKind::SearchSpaceTooLarge: return "SearchSpaceTooLarge";
    case ErrorKind::NoFeasibleStart: return "NoFeasibleStart";
    case ErrorKind::SideConditionViolated: return "SideConditionViolated";
    case ErrorKind::UnsupportedLabeling: return "UnsupportedLabeling";
    case ErrorKind::NotAffineInB: return "NotAffineInB";
    case ErrorKind::UnassignedAtom: return "UnassignedAtom";
    case ErrorKind::TooManyInequalities: return "TooManyInequalities";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

std::string VariableLabel::str() const {
  if (!block) return name;
  return name + "[" + std::to_string(*block) + "]";
}

std::size_t JointDistribution::state_count() const {
  std::size_t n = 1;
  for (const auto& v : variables) n *= v.size;
  return n;
}

std::optional<std::size_t> JointDistribution::find(const VariableLabel& label) const {
  for (std::size_t i = 0; i < variables.size(); ++i)
    if (variables[i].label == label) return i;
  return std::nullopt;
}

std::size_t JointDistribution::axis(const VariableLabel& label) const {
  if (auto i = find(label)) return *i;
  throw Error(ErrorKind::UnknownVariable, "variable " + label.str() + " not in distribution");
}

namespace {

std::string join_labels(const LabelSet& s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ",";
    out += s[i].str();
  }
  return out;
}

std::vector<std::size_t> axes_of(const JointDistribution& d, const LabelSet& labels) {
  std::vector<std::size_t> axes;
  axes.reserve(labels.size());
  for (const auto& l : labels) axes.push_back(d.axis(l));
  std::sort(axes.begin(), axes.end());
  axes.erase(std::unique(axes.begin(), axes.end()), axes.end());
  return axes;
}

void require_disjoint(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b,
                      const char* what) {
  std::vector<std::size_t> common;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
  if (!common.empty()) throw Error(ErrorKind::OverlappingSets, what);
}

std::vector<std::size_t> set_union(const std::vector<std::size_t>& a,
                                   const std::vector<std::size_t>& b) {
  std::vector<std::size_t> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

}  // namespace

std::string InfoAtom::str() const {
  std::string s = "I(" + join_labels(left) + ";" + join_labels(right);
  if (!given.empty()) s += "|" + join_labels(given);
  return s + ")";
}

JointDistribution validate_pmf(JointDistribution d) {
  std::set<VariableLabel> seen;
  std::size_t states = 1;
  for (const auto& v : d.variables) {
    if (v.size == 0)
      throw Error(ErrorKind::ShapeMismatch, "variable " + v.label.str() + " has empty alphabet");
    if (!seen.insert(v.label).second)
      throw Error(ErrorKind::ShapeMismatch, "duplicate variable " + v.label.str());
    if (states > kMaxStateSpace / v.size)
      throw Error(ErrorKind::StateSpaceTooLarge, "joint exceeds 2^24 states");
    states *= v.size;
  }
  if (d.mass.size() != states)
    throw Error(ErrorKind::ShapeMismatch, "mass has " + std::to_string(d.mass.size()) +
                                              " entries, expected " + std::to_string(states));
  double sum = 0.0;
  for (auto& p : d.mass) {
    if (!(p >= -kNegativeMassTol))
      throw Error(ErrorKind::NegativeMass, "entry " + std::to_string(p));
    if (p < 0.0) p = 0.0;
    sum += p;
  }
  if (std::abs(sum - 1.0) > kNormalizationTol)
    throw Error(ErrorKind::NotNormalized, "mass sums to " + std::to_string(sum));
  return d;
}

std::vector<double> marginal_mass(const JointDistribution& d, std::span<const std::size_t> axes) {
  const std::size_t n = d.variables.size();
  std::vector<std::size_t> out_stride(n, 0);
  std::size_t out_size = 1;
  for (auto it = axes.rbegin(); it != axes.rend(); ++it) {
    out_stride[*it] = out_size;
    out_size *= d.variables[*it].size;
  }
  std::vector<double> out(out_size, 0.0);
  if (axes.size() == n) {
    // Same axes, possibly reordered; still handled by the odometer below
    // unless the order is the identity.
    bool identity = std::is_sorted(axes.begin(), axes.end());
    if (identity) return d.mass;
  }
  std::vector<std::size_t> digit(n, 0);
  std::size_t off = 0;
  const std::size_t total = d.mass.size();
  for (std::size_t i = 0; i < total; ++i) {
    out[off] += d.mass[i];
    for (std::size_t a = n; a-- > 0;) {
      off += out_stride[a];
      if (++digit[a] < d.variables[a].size) break;
      off -= out_stride[a] * digit[a];
      digit[a] = 0;
    }
  }
  return out;
}

double shannon_entropy(std::span<const double> pmf) {
  double h = 0.0;
  for (double p : pmf)
    if (p > 0.0) h -= p * std::log2(p);
  return h;
}

JointDistribution marginalize(const JointDistribution& d, const LabelSet& keep) {
  std::vector<std::size_t> axes;
  for (const auto& l : keep) axes.push_back(d.axis(l));
  std::sort(axes.begin(), axes.end());
  axes.erase(std::unique(axes.begin(), axes.end()), axes.end());
  JointDistribution out;
  for (auto a : axes) out.variables.push_back(d.variables[a]);
  out.mass = marginal_mass(d, axes);
  return out;
}

double entropy(const JointDistribution& d, const LabelSet& a, const LabelSet& given) {
  InfoEvaluator ev(d);
  return ev.entropy(a, given);
}

double mutual_information(const JointDistribution& d, const InfoAtom& atom) {
  InfoEvaluator ev(d);
  return ev.mutual_information(atom);
}

InfoEvaluator::InfoEvaluator(const JointDistribution& d) : joint_(&d) {}

double InfoEvaluator::joint_entropy(std::vector<std::size_t> axes) {
  if (axes.empty()) return 0.0;
  if (auto it = cache_.find(axes); it != cache_.end()) return it->second;
  double h = shannon_entropy(marginal_mass(*joint_, axes));
  cache_.emplace(std::move(axes), h);
  return h;
}

double InfoEvaluator::entropy(const LabelSet& a, const LabelSet& given) {
  auto aa = axes_of(*joint_, a);
  auto cc = axes_of(*joint_, given);
  require_disjoint(aa, cc, "entropy arguments overlap");
  return joint_entropy(set_union(aa, cc)) - joint_entropy(cc);
}

double InfoEvaluator::mutual_information(const InfoAtom& atom) {
  auto aa = axes_of(*joint_, atom.left);
  auto bb = axes_of(*joint_, atom.right);
  auto cc = axes_of(*joint_, atom.given);
  require_disjoint(aa, bb, "left and right sets overlap");
  require_disjoint(aa, cc, "left and conditioning sets overlap");
  require_disjoint(bb, cc, "right and conditioning sets overlap");
  if (aa.empty() || bb.empty()) return 0.0;

  auto ac = set_union(aa, cc);
  auto bc = set_union(bb, cc);
  auto abc = set_union(ac, bb);

  // Marginalize the full joint once onto A∪B∪C; the three smaller entropies
  // come from that marginal.
  auto missing = [&](const std::vector<std::size_t>& k) {
    return !k.empty() && !cache_.contains(k);
  };
  if (missing(ac) || missing(bc) || missing(cc)) {
    JointDistribution sub;
    for (auto a : abc) sub.variables.push_back(joint_->variables[a]);
    sub.mass = marginal_mass(*joint_, abc);
    auto local = [&](const std::vector<std::size_t>& global) {
      std::vector<std::size_t> pos;
      for (auto g : global)
        pos.push_back(static_cast<std::size_t>(std::lower_bound(abc.begin(), abc.end(), g) - abc.begin()));
      return pos;
    };
    if (!cache_.contains(abc)) cache_.emplace(abc, shannon_entropy(sub.mass));
    for (const auto* k : {&ac, &bc, &cc}) {
      if (!missing(*k)) continue;
      auto pos = local(*k);
      cache_.emplace(*k, shannon_entropy(marginal_mass(sub, pos)));
    }
  }
  return joint_entropy(ac) + joint_entropy(bc) - joint_entropy(abc) - joint_entropy(cc);
}

JointDistribution product_compose(const std::vector<Factor>& factors) {
  // Where each label is defined (factor position).
  std::map<VariableLabel, std::size_t> defined_at;
  for (std::size_t f = 0; f < factors.size(); ++f)
    for (const auto& o : factors[f].outputs)
      if (!defined_at.emplace(o.label, f).second)
        throw Error(ErrorKind::ShapeMismatch, "variable " + o.label.str() + " defined twice");

  JointDistribution j;
  j.mass = {1.0};
  for (std::size_t f = 0; f < factors.size(); ++f) {
    const auto& fac = factors[f];
    std::vector<std::size_t> in_axes;
    std::size_t rows = 1;
    for (const auto& in : fac.inputs) {
      auto it = defined_at.find(in);
      if (it == defined_at.end())
        throw Error(ErrorKind::UnknownVariable, "factor input " + in.str() + " is never defined");
      if (it->second >= f)
        throw Error(ErrorKind::CyclicFactorization,
                    "factor input " + in.str() + " is not defined by an earlier factor");
      in_axes.push_back(j.axis(in));
      rows *= j.variables[in_axes.back()].size;
    }
    std::size_t cols = 1;
    for (const auto& o : fac.outputs) {
      if (o.size == 0) throw Error(ErrorKind::ShapeMismatch, "empty alphabet for " + o.label.str());
      cols *= o.size;
    }
    if (fac.kernel.size() != rows * cols)
      throw Error(ErrorKind::ShapeMismatch, "factor kernel has wrong length");
    for (std::size_t r = 0; r < rows; ++r) {
      double s = 0.0;
      for (std::size_t c = 0; c < cols; ++c) {
        double p = fac.kernel[r * cols + c];
        if (!(p >= -kNegativeMassTol))
          throw Error(ErrorKind::NegativeMass, "negative kernel entry");
        s += p;
      }
      if (std::abs(s - 1.0) > kNormalizationTol)
        throw Error(ErrorKind::RowNotNormalized, "kernel row " + std::to_string(r) + " sums to " +
                                                     std::to_string(s));
    }
    const std::size_t old_states = j.mass.size();
    if (cols != 0 && old_states > kMaxStateSpace / cols)
      throw Error(ErrorKind::StateSpaceTooLarge, "joint exceeds 2^24 states");

    // Row index of the kernel for each old joint entry.
    const std::size_t n = j.variables.size();
    std::vector<std::size_t> row_stride(n, 0);
    {
      std::size_t s = 1;
      for (std::size_t k = in_axes.size(); k-- > 0;) {
        row_stride[in_axes[k]] += s;
        s *= j.variables[in_axes[k]].size;
      }
    }
    std::vector<double> next(old_states * cols);
    std::vector<std::size_t> digit(n, 0);
    std::size_t row = 0;
    for (std::size_t i = 0; i < old_states; ++i) {
      const double p = j.mass[i];
      const double* k = &fac.kernel[row * cols];
      double* out = &next[i * cols];
      for (std::size_t c = 0; c < cols; ++c) out[c] = p * std::max(0.0, k[c]);
      for (std::size_t a = n; a-- > 0;) {
        row += row_stride[a];
        if (++digit[a] < j.variables[a].size) break;
        row -= row_stride[a] * digit[a];
        digit[a] = 0;
      }
    }
    j.mass = std::move(next);
    for (const auto& o : fac.outputs) j.variables.push_back(o);
  }
  return validate_pmf(std::move(j));
}

}  // namespace nncpdf
