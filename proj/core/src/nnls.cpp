#include "hypext/nnls.hpp"

#include <limits>
#include <stdexcept>
#include <vector>

namespace hypext {

namespace {

Eigen::VectorXd solve_on(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                         const std::vector<bool>& passive) {
  std::vector<Eigen::Index> cols;
  for (Eigen::Index j = 0; j < A.cols(); ++j) {
    if (passive[j]) {
      cols.push_back(j);
    }
  }
  Eigen::MatrixXd sub(A.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t k = 0; k < cols.size(); ++k) {
    sub.col(static_cast<Eigen::Index>(k)) = A.col(cols[k]);
  }
  const Eigen::VectorXd z = sub.completeOrthogonalDecomposition().solve(b);
  Eigen::VectorXd full = Eigen::VectorXd::Zero(A.cols());
  for (std::size_t k = 0; k < cols.size(); ++k) {
    full[cols[k]] = z[static_cast<Eigen::Index>(k)];
  }
  return full;
}

}  // namespace

Eigen::VectorXd nnls(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, int max_iter,
                     double tol) {
  if (A.rows() != b.size()) {
    throw std::invalid_argument("nnls: row mismatch");
  }
  const Eigen::Index n = A.cols();
  if (max_iter <= 0) {
    max_iter = static_cast<int>(3 * n + 10);
  }
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  std::vector<bool> passive(static_cast<std::size_t>(n), false);
  const double scale = std::max(1.0, A.cwiseAbs().maxCoeff() * b.cwiseAbs().maxCoeff());

  for (int outer = 0; outer < max_iter; ++outer) {
    const Eigen::VectorXd w = A.transpose() * (b - A * x);
    Eigen::Index best = -1;
    double best_w = tol * scale;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!passive[j] && w[j] > best_w) {
        best_w = w[j];
        best = j;
      }
    }
    if (best < 0) {
      break;
    }
    passive[best] = true;

    for (int inner = 0; inner < max_iter; ++inner) {
      const Eigen::VectorXd s = solve_on(A, b, passive);
      bool feasible = true;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[j] && s[j] <= 0.0) {
          feasible = false;
        }
      }
      if (feasible) {
        x = s;
        break;
      }
      double alpha = std::numeric_limits<double>::infinity();
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[j] && s[j] <= 0.0) {
          alpha = std::min(alpha, x[j] / (x[j] - s[j]));
        }
      }
      x += alpha * (s - x);
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[j] && x[j] <= 1e-15) {
          passive[j] = false;
          x[j] = 0.0;
        }
      }
    }
  }
  return x;
}

Eigen::VectorXd min_norm_convex_weights(const Eigen::MatrixXd& directions) {
  const Eigen::Index k = directions.cols();
  if (k == 0) {
    throw std::invalid_argument("min_norm_convex_weights: no directions");
  }
  // Append a heavily weighted row enforcing sum(lambda) = 1.
  constexpr double kRho = 1e3;
  Eigen::MatrixXd A(directions.rows() + 1, k);
  A.topRows(directions.rows()) = directions;
  A.row(directions.rows()).setConstant(kRho);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(directions.rows() + 1);
  b[directions.rows()] = kRho;
  Eigen::VectorXd lambda = nnls(A, b);
  const double total = lambda.sum();
  if (!(total > 0.0)) {
    return Eigen::VectorXd::Constant(k, 1.0 / static_cast<double>(k));
  }
  return lambda / total;
}

}  // namespace hypext
