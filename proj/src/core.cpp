#include "swcca/core.hpp"

#include <cmath>
#include <sstream>

namespace swcca {

DataMatrix::DataMatrix(Eigen::MatrixXd values, Preprocessing preprocessing)
    : values_(std::move(values)), preprocessing_(preprocessing) {
  if (values_.rows() < 1 || values_.cols() < 1)
    throw InvalidArgument("DataMatrix requires at least one row and one column");
  if (!values_.allFinite())
    throw NonFiniteValue("DataMatrix entries must be finite");
}

CanonicalVector::CanonicalVector(Eigen::VectorXd entries) : entries_(std::move(entries)) {
  if (entries_.size() == 0) throw InvalidArgument("CanonicalVector cannot be empty");
  if (!entries_.allFinite()) throw NonFiniteValue("CanonicalVector entries must be finite");
  const double norm = entries_.norm();
  if (std::abs(norm - 1.0) > 1e-9) {
    std::ostringstream msg;
    msg << "CanonicalVector must be unit norm, got " << norm;
    throw InvalidArgument(msg.str());
  }
  cardinality_ = (entries_.array() != 0.0).count();
}

std::vector<Eigen::Index> CanonicalVector::support() const {
  std::vector<Eigen::Index> idx;
  idx.reserve(static_cast<std::size_t>(cardinality_));
  for (Eigen::Index i = 0; i < entries_.size(); ++i)
    if (entries_[i] != 0.0) idx.push_back(i);
  return idx;
}

std::string to_string(TerminationReason reason) {
  switch (reason) {
    case TerminationReason::kDeltaBelowTol: return "delta_below_tol";
    case TerminationReason::kObjectiveDeltaBelowTol: return "objective_delta_below_tol";
    case TerminationReason::kMaxIters: return "max_iters";
  }
  return "unknown";
}

DataMatrix center_columns(const DataMatrix& m) {
  if (m.preprocessing() != Preprocessing::kRaw)
    throw InvalidArgument("center_columns expects a raw matrix");
  Eigen::MatrixXd v = m.values();
  v.rowwise() -= v.colwise().mean();
  return DataMatrix(std::move(v), Preprocessing::kColumnCentered);
}

DataMatrix standardize_columns(const DataMatrix& m) {
  Eigen::MatrixXd v = m.values();
  const double n = static_cast<double>(v.rows());
  v.rowwise() -= v.colwise().mean();
  for (Eigen::Index j = 0; j < v.cols(); ++j) {
    const double ss = v.col(j).squaredNorm();
    if (ss == 0.0) {
      std::ostringstream msg;
      msg << "column " << j << " is constant";
      throw ConstantColumn(static_cast<std::size_t>(j), msg.str());
    }
    v.col(j) /= std::sqrt(ss / (n - 1.0));
  }
  return DataMatrix(std::move(v), Preprocessing::kColumnStandardized);
}

double weighted_objective(const DataMatrix& X, const DataMatrix& Y,
                          const Eigen::VectorXd& u, const Eigen::VectorXd& v,
                          const Eigen::VectorXd& w) {
  if (u.size() != X.p() || v.size() != Y.p() || w.size() != X.n() || X.n() != Y.n())
    throw DimensionMismatch("weighted_objective: u/v/w lengths must match p/q/n");
  // t3 = X^T[(Yv) o w]; never form diag(w).
  const Eigen::VectorXd t2 = (Y.values() * v).cwiseProduct(w);
  return u.dot(X.values().transpose() * t2);
}

double weighted_objective(const DataMatrix& X, const DataMatrix& Y,
                          const CanonicalVector& u, const CanonicalVector& v,
                          const CanonicalVector& w) {
  return weighted_objective(X, Y, u.entries(), v.entries(), w.entries());
}

double pearson(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  if (a.size() != b.size()) throw DimensionMismatch("pearson: length mismatch");
  const Eigen::VectorXd da = a.array() - a.mean();
  const Eigen::VectorXd db = b.array() - b.mean();
  const double denom = da.norm() * db.norm();
  if (denom == 0.0)
    throw DegenerateVariance("pearson: at least one vector is constant");
  return da.dot(db) / denom;
}

double correlation_level(const DataMatrix& X, const DataMatrix& Y,
                         const Eigen::VectorXd& u, const Eigen::VectorXd& v,
                         const Eigen::VectorXd& w) {
  if (u.size() != X.p() || v.size() != Y.p() || w.size() != X.n() || X.n() != Y.n())
    throw DimensionMismatch("correlation_level: u/v/w lengths must match p/q/n");
  const Eigen::VectorXd a = (X.values() * u).cwiseProduct(w);
  const Eigen::VectorXd b = (Y.values() * v).cwiseProduct(w);
  return pearson(a, b);
}

}  // namespace swcca
