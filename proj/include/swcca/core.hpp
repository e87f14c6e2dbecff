#pragma once

#include "swcca/types.hpp"

namespace swcca {

/// Subtract each column mean. Input must be raw.
DataMatrix center_columns(const DataMatrix& m);

/// Center and scale each column to sample standard deviation 1 (n-1
/// denominator). Throws ConstantColumn for a zero-variance column.
DataMatrix standardize_columns(const DataMatrix& m);

/// sum_i w_i (Xu)_i (Yv)_i, evaluated as u . X^T[(Yv) o w] so the n x n
/// weight matrix is never materialized.
double weighted_objective(const DataMatrix& X, const DataMatrix& Y,
                          const Eigen::VectorXd& u, const Eigen::VectorXd& v,
                          const Eigen::VectorXd& w);

double weighted_objective(const DataMatrix& X, const DataMatrix& Y,
                          const CanonicalVector& u, const CanonicalVector& v,
                          const CanonicalVector& w);

/// Pearson correlation of (Xu) o w against (Yv) o w. Callers evaluating an
/// unweighted method pass w = all-ones. Throws DegenerateVariance when either
/// weighted projection is constant.
double correlation_level(const DataMatrix& X, const DataMatrix& Y,
                         const Eigen::VectorXd& u, const Eigen::VectorXd& v,
                         const Eigen::VectorXd& w);

/// Pearson correlation of two equal-length vectors.
double pearson(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

}  // namespace swcca
