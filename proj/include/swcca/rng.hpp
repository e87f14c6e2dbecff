#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <random>

namespace swcca {

/// Reproducible random stream: mt19937_64 seeded through a splitmix64
/// finalizer, with normal variates produced by explicit Box-Muller so the
/// byte-for-byte sequence does not depend on the standard library vendor.
///
/// Streams are addressed as (seed, stream): independent arrays drawn for the
/// same seed each get their own stream index, so adding a draw to one array
/// never shifts another.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream);

  /// Uniform on the open interval (0, 1).
  double uniform();

  /// Standard normal via Box-Muller; generates in pairs, caches the second.
  double normal();

  Eigen::VectorXd normal_vector(Eigen::Index n);

  /// Row-major fill order.
  Eigen::MatrixXd normal_matrix(Eigen::Index rows, Eigen::Index cols);

 private:
  std::mt19937_64 gen_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace swcca
