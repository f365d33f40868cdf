#include "lenspec/lp.hpp"

#include <limits>
#include <vector>

#include "lenspec/errors.hpp"

namespace lenspec::detail {

std::optional<LpSolution> maximize(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                                   const Eigen::VectorXd& c) {
  const Eigen::Index m = A.rows();
  const Eigen::Index n = A.cols();
  if (b.size() != m || c.size() != n) throw InputError("lp: dimension mismatch");
  if ((b.array() < 0.0).any()) throw InputError("lp: right-hand side must be nonnegative");

  // Tableau [A I | b] with objective row [-c 0 | 0].
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m + 1, n + m + 1);
  t.topLeftCorner(m, n) = A;
  t.block(0, n, m, m).setIdentity();
  t.topRightCorner(m, 1) = b;
  t.bottomLeftCorner(1, n) = -c.transpose();
  std::vector<Eigen::Index> basis(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) basis[static_cast<std::size_t>(i)] = n + i;

  constexpr double eps = 1e-12;
  for (int iter = 0; iter < 10'000; ++iter) {
    Eigen::Index enter = -1;
    for (Eigen::Index j = 0; j < n + m; ++j) {
      if (t(m, j) < -eps) {
        enter = j;
        break;
      }
    }
    if (enter < 0) {
      LpSolution sol;
      sol.x = Eigen::VectorXd::Zero(n);
      for (Eigen::Index i = 0; i < m; ++i) {
        const auto var = basis[static_cast<std::size_t>(i)];
        if (var < n) sol.x(var) = t(i, n + m);
      }
      sol.value = c.dot(sol.x);
      return sol;
    }
    Eigen::Index leave = -1;
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < m; ++i) {
      if (t(i, enter) > eps) {
        const double r = t(i, n + m) / t(i, enter);
        if (r < best - eps ||
            (r <= best + eps && leave >= 0 &&
             basis[static_cast<std::size_t>(i)] < basis[static_cast<std::size_t>(leave)])) {
          best = r;
          leave = i;
        }
      }
    }
    if (leave < 0) return std::nullopt;
    t.row(leave) /= t(leave, enter);
    for (Eigen::Index i = 0; i <= m; ++i) {
      if (i != leave && t(i, enter) != 0.0) t.row(i) -= t(i, enter) * t.row(leave);
    }
    basis[static_cast<std::size_t>(leave)] = enter;
  }
  throw NumericError("lp: iteration limit reached");
}

}  // namespace lenspec::detail
