#pragma once

#include <vector>

#include "lenspec/matrix_rep.hpp"

namespace lenspec {

// log(sigma_1/sigma_2)(rho(g)) >= log_C + mu |g| for every g in the ball of
// the given radius (standard generators). mu is the slope of the last edge
// of the lower convex hull of the per-length minima, so it is the largest
// slope supported at the ball boundary; log_C is then the best intercept.
struct AnosovCertificate {
  double mu = 0.0;
  double log_C = 0.0;
  bool ok = false;
  int radius = 0;
  std::vector<double> min_gap;  // min log(sigma_1/sigma_2) over words of length n
};

template <typename MatrixT>
AnosovCertificate anosov_certificate(const MatrixRep<MatrixT>& rep, int radius);

}  // namespace lenspec
