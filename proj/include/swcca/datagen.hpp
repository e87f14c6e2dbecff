#pragma once

#include <cstdint>

#include "swcca/core.hpp"
#include "swcca/types.hpp"

namespace swcca {

/// Planted vectors as constructed (pre-normalization) and their supports.
struct SyntheticTruth {
  Eigen::VectorXd u_true;
  Eigen::VectorXd v_true;
  Eigen::VectorXd w_true;
  std::vector<Eigen::Index> support_u;
  std::vector<Eigen::Index> support_v;
  std::vector<Eigen::Index> support_w;
  std::uint64_t seed = 0;
};

struct SyntheticData {
  DataMatrix X;
  DataMatrix Y;
  SyntheticTruth truth;
};

/// Rank-one planted model, n = 50, p = 100, q = 80:
///   u = [30 ones, 70 zeros],
///   v = [20 normals, 20 zeros, 10 normals, 30 zeros],
///   w = [30 ones, 20 zeros],
///   X = w u^T + noise_scale * E_x,  Y = w v^T + noise_scale * E_y,
/// with standard normal noise. Streams: (seed, 0) fills v's normal entries in
/// index order, (seed, 1) fills E_x row-major, (seed, 2) fills E_y row-major.
SyntheticData generate_synthetic_1(std::uint64_t seed, double noise_scale = 1.0);

/// Block model, n = 50, p = 100, q = 80: X is 1 on rows 0..29 x columns
/// 0..49, Y is -1 on rows 0..29 x columns 0..39, zero elsewhere, plus
/// standard normal noise everywhere. Truth: u = [50 ones, 50 zeros],
/// v = [40 minus-ones, 40 zeros], w = [30 ones, 20 zeros]. Streams: (seed, 1)
/// fills X's noise row-major, (seed, 2) fills Y's.
SyntheticData generate_synthetic_2(std::uint64_t seed, double noise_scale = 1.0);

struct RecoveryScore {
  double precision;
  double recall;
  double f1;
};

/// Precision/recall/F1 of the estimated nonzero set against the planted one.
/// Both empty scores (1, 1, 1); an empty side against a nonempty one scores
/// zeros.
RecoveryScore support_recovery(const CanonicalVector& estimated,
                               const std::vector<Eigen::Index>& truth_support);

}  // namespace swcca
