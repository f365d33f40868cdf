#pragma once

#include <Eigen/Dense>
#include <optional>

namespace lenspec::detail {

// maximize c.x  subject to  A x <= b, x >= 0, with b >= 0 (the origin is
// feasible). Dense tableau simplex with Bland's rule. Returns nullopt when the
// objective is unbounded.
struct LpSolution {
  double value = 0.0;
  Eigen::VectorXd x;
};

std::optional<LpSolution> maximize(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                                   const Eigen::VectorXd& c);

}  // namespace lenspec::detail
