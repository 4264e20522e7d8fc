#pragma once

#include <cstddef>

#include "nncpdf/network.hpp"
#include "nncpdf/probability.hpp"

namespace nncpdf {

/// Joint pmf of the given unfolded labels (M, U0 and block-tagged X, V, U, Y,
/// Yhat) when the scheme runs for B blocks with a uniform message of
/// `message_size` symbols. Only ancestors of the requested labels are built,
/// and variables are summed out as soon as nothing later needs them.
JointDistribution instantiate_unfolded_joint(const Network& net, const SchemeDistribution& s, int B,
                                             const LabelSet& labels, std::size_t message_size = 2);

}  // namespace nncpdf
