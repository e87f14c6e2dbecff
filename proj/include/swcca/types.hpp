#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "swcca/errors.hpp"

namespace swcca {

enum class Preprocessing { kRaw, kColumnCentered, kColumnStandardized };

/// Dense data matrix, rows = samples, columns = variables. Entries are
/// validated finite on construction; instances are immutable afterwards.
class DataMatrix {
 public:
  DataMatrix(Eigen::MatrixXd values, Preprocessing preprocessing = Preprocessing::kRaw);

  const Eigen::MatrixXd& values() const { return values_; }
  Eigen::Index n() const { return values_.rows(); }
  Eigen::Index p() const { return values_.cols(); }
  Preprocessing preprocessing() const { return preprocessing_; }

 private:
  Eigen::MatrixXd values_;
  Preprocessing preprocessing_;
};

/// Unit-norm loading vector. Construction rejects anything that is not
/// normalized to 1e-9; degenerate all-zero candidates must be surfaced as
/// ZeroProjection by the code that produced them, never stored here.
class CanonicalVector {
 public:
  explicit CanonicalVector(Eigen::VectorXd entries);

  const Eigen::VectorXd& entries() const { return entries_; }
  Eigen::Index size() const { return entries_.size(); }
  Eigen::Index cardinality() const { return cardinality_; }
  double operator[](Eigen::Index i) const { return entries_[i]; }

  std::vector<Eigen::Index> support() const;

 private:
  Eigen::VectorXd entries_;
  Eigen::Index cardinality_;
};

/// Keep the k largest-magnitude entries.
struct HardCardinality {
  Eigen::Index k;
};

/// Soft-threshold shrinkage by lambda.
struct Lasso {
  double lambda;
};

/// Groupwise L2 shrinkage; groups must partition the index set.
struct GroupLasso {
  double lambda;
  std::vector<std::vector<Eigen::Index>> groups;
};

using PenaltySpec = std::variant<HardCardinality, Lasso, GroupLasso>;

/// Throws InvalidArgument / InvalidK when the spec cannot apply to a vector
/// of the given length.
void validate_penalty(const PenaltySpec& penalty, Eigen::Index length);

/// Value of the regularizer at x: 0 for hard cardinality, lambda*||x||_1 for
/// lasso, lambda*sum_l ||x_l||_2 for group lasso.
double penalty_value(const PenaltySpec& penalty, const Eigen::VectorXd& x);

/// Sparse projection dispatch: hard/soft/group shrinkage followed by unit
/// normalization. Throws ZeroProjection when everything is wiped out.
CanonicalVector apply_penalty(const PenaltySpec& penalty, const Eigen::VectorXd& z);

enum class InitPolicy { kRandomUnit, kSvdWarmStart, kSupplied };

enum class TerminationReason { kDeltaBelowTol, kObjectiveDeltaBelowTol, kMaxIters };

struct SolverConfig {
  InitPolicy init = InitPolicy::kRandomUnit;
  std::uint64_t seed = 0;
  // Starting vectors for InitPolicy::kSupplied; each is projected through
  // its penalty before the first sweep.
  std::optional<Eigen::VectorXd> u0;
  std::optional<Eigen::VectorXd> v0;
  std::optional<Eigen::VectorXd> w0;
  int max_iters = 1000;
  double delta_tol = 1e-6;
  double objective_tol = 0.0;  // 0 disables the objective-delta stop
  int restarts = 1;
  // Hold w at uniform 1/sqrt(n) and skip its update; reduces the solver to
  // the fixed-weight special case.
  bool freeze_w = false;
};

struct SwccaFit {
  CanonicalVector u;
  CanonicalVector v;
  CanonicalVector w;
  std::vector<double> objective_trace;  // one value per full sweep
  int iterations = 0;
  bool converged = false;
  TerminationReason termination_reason = TerminationReason::kMaxIters;
};

std::string to_string(TerminationReason reason);

}  // namespace swcca
