#pragma once

#include "swcca/types.hpp"

namespace swcca {

struct TopKSelection {
  std::vector<Eigen::Index> indices;  // sorted ascending, exactly k of them
  double threshold_magnitude;         // smallest |z_i| among the kept entries
};

/// Index set of the k largest |z_i|, ties at the cut broken toward the lower
/// index. Expected linear time: quickselect with median-of-three pivoting,
/// plain sort below 64 entries.
TopKSelection top_k_support(const Eigen::VectorXd& z, Eigen::Index k);

/// Keep the k largest-magnitude entries of z, zero the rest, normalize to
/// unit length. This is the exact maximizer of u.z over k-sparse unit u.
CanonicalVector hard_project(const Eigen::VectorXd& z, Eigen::Index k);

/// Elementwise sign(z_i) * max(|z_i| - lambda, 0), normalized.
CanonicalVector soft_threshold_project(const Eigen::VectorXd& z, double lambda);

/// Groups with ||z_l||_2 > lambda survive scaled by (1 - lambda/||z_l||_2),
/// the rest are zeroed; the whole vector is then normalized.
CanonicalVector group_shrink_project(const Eigen::VectorXd& z, double lambda,
                                     const std::vector<std::vector<Eigen::Index>>& groups);

}  // namespace swcca
