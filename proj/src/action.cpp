#include "lenspec/action.hpp"

#include <array>

#include "lenspec/errors.hpp"

namespace lenspec {

std::string to_string(Exactness e) {
  switch (e) {
    case Exactness::tree_exact: return "tree-exact";
    case Exactness::eigenvalue_exact: return "eigenvalue-exact";
    case Exactness::bracket_only: return "bracket-only";
  }
  return "unknown";
}

double displacement(const ActionModel& A, const Word& g) {
  if (g.empty()) return 0.0;
  if (!A.displacement) throw InputError("action model '" + A.name + "' has no displacement oracle");
  const double d = A.displacement(g);
  if (!std::isfinite(d)) throw NumericError("non-finite displacement for " + g.str() + " in " + A.name);
  return std::max(0.0, d);
}

double distance(const ActionModel& A, const Word& g, const Word& h) {
  return displacement(A, g.inverse() * h);
}

double gromov_product(const ActionModel& A, const Word& g, const Word& h) {
  return 0.5 * (displacement(A, g) + displacement(A, h.inverse()) - distance(A, g, h));
}

double four_point_defect(const ActionModel& A, const Word& p, const Word& q, const Word& r,
                         const Word& s) {
  std::array<double, 3> sums{distance(A, p, q) + distance(A, r, s), distance(A, p, r) + distance(A, q, s),
                             distance(A, p, s) + distance(A, q, r)};
  std::sort(sums.begin(), sums.end());
  return 0.5 * (sums[2] - sums[1]);
}

std::vector<double> displacement_powers(const ActionModel& A, const Word& g, int count) {
  std::vector<double> a;
  a.reserve(static_cast<std::size_t>(std::max(count, 0)));
  for (int k = 1; k <= count; ++k) a.push_back(displacement(A, g.pow(k)));
  return a;
}

LengthBracket stable_length_bracket(const ActionModel& A, const Word& g, BracketOptions opts) {
  if (g.empty()) return LengthBracket::point(0.0);
  const int k_max = std::max(1, opts.k_max);
  const auto a = displacement_powers(A, g, 2 * k_max);
  double hi = std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k <= a.size(); ++k) hi = std::min(hi, a[k - 1] / static_cast<double>(k));
  double lo = 0.0;
  for (int k = 1; k <= k_max; ++k) {
    const double kk = k;
    lo = std::max(lo, (a[2 * k - 1] - a[k - 1]) / kk - opts.c_delta * A.delta / kk);
  }
  LengthBracket b{std::min(lo, hi), hi, false};
  if (A.rounding > 0.0) b = b.widened(A.rounding);
  if (A.delta == 0.0 && A.rounding == 0.0 && b.lo == b.hi) b.exact = true;
  return b;
}

LengthBracket stable_length(const ActionModel& A, const ConjClass& c, BracketOptions opts) {
  if (c.rep.empty()) return LengthBracket::point(0.0);
  if (A.stable) return A.stable(c.rep);
  return stable_length_bracket(A, c.rep, opts);
}

LengthBracket stable_length(const ActionModel& A, const Word& g, BracketOptions opts) {
  return stable_length(A, cyclic_reduce(g), opts);
}

ActionModel scaled(const ActionModel& A, double c) {
  if (!(c > 0.0) || !std::isfinite(c)) throw InputError("scale factor must be positive and finite");
  ActionModel out = A;
  out.name = A.name + "*" + std::to_string(c);
  out.displacement = [d = A.displacement, c](const Word& g) { return c * d(g); };
  if (A.stable) out.stable = [s = A.stable, c](const Word& g) { return scale(s(g), c); };
  out.delta = c * A.delta;
  if (A.cobound) out.cobound = c * *A.cobound;
  if (A.alpha) out.alpha = c * *A.alpha;
  if (A.std_rate) out.std_rate = c * *A.std_rate;
  if (A.tree_weights) {
    auto w = *A.tree_weights;
    for (auto& x : w) x *= c;
    out.tree_weights = std::move(w);
  }
  return out;
}

}  // namespace lenspec
