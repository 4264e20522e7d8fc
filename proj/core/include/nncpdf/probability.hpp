#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nncpdf/error.hpp"

namespace nncpdf {

inline constexpr double kNormalizationTol = 1e-9;
inline constexpr double kNegativeMassTol = 1e-15;
inline constexpr double kNonNegativityClamp = 1e-10;
inline constexpr std::size_t kMaxStateSpace = std::size_t{1} << 24;

/// Name of a finite random variable, optionally tagged with a transmission
/// block (only the unfolded network uses blocks).
struct VariableLabel {
  std::string name;
  std::optional<int> block;

  VariableLabel() = default;
  VariableLabel(std::string n) : name(std::move(n)) {}  // NOLINT: implicit on purpose
  VariableLabel(const char* n) : name(n) {}             // NOLINT
  VariableLabel(std::string n, int b) : name(std::move(n)), block(b) {}

  std::string str() const;

  friend bool operator==(const VariableLabel&, const VariableLabel&) = default;
  friend auto operator<=>(const VariableLabel&, const VariableLabel&) = default;
};

using LabelSet = std::vector<VariableLabel>;

struct Variable {
  VariableLabel label;
  std::size_t size = 1;
};

/// Dense pmf over an ordered list of variables, row-major with the last
/// variable varying fastest.
struct JointDistribution {
  std::vector<Variable> variables;
  std::vector<double> mass;

  std::size_t state_count() const;
  std::optional<std::size_t> find(const VariableLabel& label) const;
  std::size_t axis(const VariableLabel& label) const;  // throws UnknownVariable
  bool contains(const VariableLabel& label) const { return find(label).has_value(); }
};

/// I(left; right | given). Entropy-style quantities are expressed through
/// entropy() instead.
struct InfoAtom {
  LabelSet left;
  LabelSet right;
  LabelSet given;

  std::string str() const;

  friend bool operator==(const InfoAtom&, const InfoAtom&) = default;
};

/// Checks shape, negativity (clamping tiny negatives to zero) and
/// normalization. Also rejects duplicate labels.
JointDistribution validate_pmf(JointDistribution d);

JointDistribution marginalize(const JointDistribution& d, const LabelSet& keep);

/// H(a | given) in bits.
double entropy(const JointDistribution& d, const LabelSet& a, const LabelSet& given = {});

/// I(atom.left; atom.right | atom.given) in bits. May be slightly negative
/// from rounding; reports clamp at -1e-10.
double mutual_information(const JointDistribution& d, const InfoAtom& atom);

/// One factor p(outputs | inputs). The kernel is row-major over the inputs
/// (in listed order) followed by the outputs.
struct Factor {
  std::vector<Variable> outputs;
  LabelSet inputs;
  std::vector<double> kernel;
};

/// Joint over the outputs of all factors, in factor order. Inputs must be
/// outputs of strictly earlier factors.
JointDistribution product_compose(const std::vector<Factor>& factors);

/// Memoizing evaluator for many measures over one joint. Not thread-safe;
/// use one per thread.
class InfoEvaluator {
 public:
  explicit InfoEvaluator(const JointDistribution& d);
  explicit InfoEvaluator(JointDistribution&&) = delete;  // keeps a pointer to d

  double entropy(const LabelSet& a, const LabelSet& given = {});
  double mutual_information(const InfoAtom& atom);

  const JointDistribution& joint() const { return *joint_; }

 private:
  double joint_entropy(std::vector<std::size_t> axes);

  const JointDistribution* joint_;
  std::map<std::vector<std::size_t>, double> cache_;
};

// Helpers shared across modules.
std::vector<double> marginal_mass(const JointDistribution& d, std::span<const std::size_t> axes);
double shannon_entropy(std::span<const double> pmf);

}  // namespace nncpdf
