#pragma once

// Joint stable length of a finite subset of the group, joint spectral radius
// of a finite matrix set, the two-sided bound of the joint stable length by
// s_2 / 2, and the eigenvalue bound on the joint spectral radius.

#include <cstddef>
#include <vector>

#include "lenspec/action.hpp"
#include "lenspec/linalg.hpp"

namespace lenspec {

struct JslOptions {
  int n_max = 12;
  std::size_t frontier_cap = 1'000'000;
  bool allow_pruning = true;  // beam-prune past the cap instead of throwing
  int lo_levels = 4;          // products of length <= this feed the ell/n lower term
  BracketOptions bracket;
};

struct JslResult {
  LengthBracket bracket;
  std::vector<double> a;  // a_n = max displacement over S^n, n = 1..n_max
  LengthBracket half_s2;  // (1/2) max over S^2 of the stable length
  double max_single = 0.0;
  bool certified = true;  // false once beam pruning discarded products
  std::size_t peak_frontier = 0;
};

JslResult joint_stable_length(const ActionModel& A, const std::vector<Word>& S, JslOptions opts = {});

// K delta + (1/2) max_{S^2} ell_hi.
double bf_upper(const JslResult& r, double delta, double K);
// (1/2) max_{S^2} ell_lo <= D_hi + tol: the K-free half, which always holds.
bool bf_lower_check(const JslResult& r, double tol = 1e-9);
// Least K for which the upper inequality is certified on this instance.
double bf_minimal_K(const JslResult& r, double delta, double tol = 1e-9);

struct BochiConstants {
  int m = 2;
  double c_m = 0.0;
  int d_m = 1;

  // c_m = 8 log 2 + 5 log m, d_m = 2 m^3.
  static BochiConstants caps(int m);
};

struct JsrResult {
  LengthBracket log_jsr;  // bracket for log of the joint spectral radius
  std::vector<double> log_sigma;   // (1/n) log max sigma_1 over S^n
  std::vector<double> log_lambda;  // (1/n) log max lambda_1 over S^n
};

// Throws ResourceError if |S|^n_max exceeds the cap.
JsrResult jsr_bracket(const std::vector<Eigen::MatrixXd>& S, int n_max, std::size_t cap = 1'000'000);

struct BochiResult {
  double rhs = 0.0;  // c_m + max_{j <= j_max} (1/j) log max lambda_1 over S^j
  int j_max = 0;
  bool certified = false;  // false: j_max < d_m, only a probe
  std::vector<double> log_lambda;
};

// With allow_probe, products past the cap are skipped by shrinking j_max and
// the result is labelled a probe; otherwise ResourceError.
BochiResult bochi_rhs(const std::vector<Eigen::MatrixXd>& S, const BochiConstants& constants,
                      std::size_t cap = 1'000'000, bool allow_probe = false);

}  // namespace lenspec
