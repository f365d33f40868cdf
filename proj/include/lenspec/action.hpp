#pragma once

// An isometric action of a free group, seen through its displacement
// function g -> d(x, g x) at a fixed basepoint, plus the metadata the
// verifiers need (hyperbolicity, coboundedness, comparison to the standard
// tree).

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lenspec/bracket.hpp"
#include "lenspec/words.hpp"

namespace lenspec {

enum class Exactness { tree_exact, eigenvalue_exact, bracket_only };

std::string to_string(Exactness e);

struct ActionModel {
  std::string name;
  int rank = 1;

  std::function<double(const Word&)> displacement;
  // Stable length of an arbitrary element. Exact models return a point
  // bracket; bracket-only models may supply their own certified bracket.
  // When empty, the generic power estimator is used.
  std::function<LengthBracket(const Word&)> stable;

  bool symmetric = true;
  double delta = 0.0;
  std::optional<double> cobound;  // D
  std::optional<double> alpha;    // rough-geodesicity constant
  // rate with ell_X[g] >= rate * (cyclic standard length of g), used to
  // choose enumeration depths that cover a length window.
  std::optional<double> std_rate;
  // Whether std_rate is proven for the whole group or only checked on a ball.
  bool std_rate_certified = true;
  // Additive letter weights: displacement is the weighted reduced length.
  std::optional<std::vector<double>> tree_weights;
  Exactness exactness = Exactness::bracket_only;
  // Relative rounding allowance for floating-point displacement values.
  double rounding = 0.0;
};

struct BracketOptions {
  int k_max = 8;
  double c_delta = 4.0;
};

double displacement(const ActionModel& A, const Word& g);

// d(g x, h x) = d(x, g^{-1} h x).
double distance(const ActionModel& A, const Word& g, const Word& h);

// (g x | h x)_x = (d(x,gx) + d(hx,x) - d(gx,hx)) / 2. For asymmetric models
// this ordered variant is what gets computed; see `gromov_product_is_ordered`.
double gromov_product(const ActionModel& A, const Word& g, const Word& h);
inline bool gromov_product_is_ordered(const ActionModel& A) { return !A.symmetric; }

// Smallest delta for which the four orbit points p_i x satisfy the
// four-point condition (half the gap between the two largest pair sums).
double four_point_defect(const ActionModel& A, const Word& p, const Word& q, const Word& r,
                         const Word& s);

// a_k = d(x, g^k x) for k = 1..count.
std::vector<double> displacement_powers(const ActionModel& A, const Word& g, int count);

// Power estimator. hi = min_k a_k / k over k <= 2 k_max; lo = max_k
// (a_2k - a_k)/k - c_delta delta / k over k <= k_max, clamped at zero.
LengthBracket stable_length_bracket(const ActionModel& A, const Word& g, BracketOptions opts = {});

LengthBracket stable_length(const ActionModel& A, const ConjClass& c, BracketOptions opts = {});
LengthBracket stable_length(const ActionModel& A, const Word& g, BracketOptions opts = {});

// The same action with the metric multiplied by c > 0.
ActionModel scaled(const ActionModel& A, double c);

}  // namespace lenspec
