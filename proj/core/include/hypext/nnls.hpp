#pragma once

#include <Eigen/Dense>

namespace hypext {

/// Lawson-Hanson active-set solver for  min |A x - b|  subject to  x >= 0.
Eigen::VectorXd nnls(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, int max_iter = 0,
                     double tol = 1e-12);

/// Minimum-norm point of the convex hull of the columns of `directions`:
/// weights are nonnegative and sum to one.
Eigen::VectorXd min_norm_convex_weights(const Eigen::MatrixXd& directions);

}  // namespace hypext
