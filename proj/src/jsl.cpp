#include "lenspec/jsl.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include "lenspec/errors.hpp"

namespace lenspec {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <typename Map>
void beam_prune(Map& frontier, std::size_t cap) {
  std::vector<std::pair<typename Map::key_type, typename Map::mapped_type>> items(frontier.begin(), frontier.end());
  std::nth_element(items.begin(), items.begin() + static_cast<std::ptrdiff_t>(cap), items.end(),
                   [](const auto& x, const auto& y) {
                     if (x.second != y.second) return x.second > y.second;
                     return x.first < y.first;
                   });
  items.resize(cap);
  frontier = Map(items.begin(), items.end());
}

// Trees: the displacement of p s_1 ... s_k depends on p only through its
// weight and the last k * maxlen letters, since right multiplication by a
// word of length m cancels at most m letters. Products sharing that suffix
// are merged, keeping the heaviest; this is exact.
std::vector<double> tree_levels(const std::vector<double>& weights, const std::vector<Word>& S,
                                const JslOptions& opts, JslResult& out) {
  std::size_t maxlen = 0;
  for (const auto& s : S) maxlen = std::max(maxlen, s.size());
  auto encode = [](const Word& w) {
    std::string str;
    for (Letter x : w.letters()) str.push_back(static_cast<char>(x + 64));
    return str;
  };
  auto weight_of = [&](char c) { return weights[static_cast<std::size_t>(std::abs(c - 64) - 1)]; };
  std::vector<std::string> gens;
  std::vector<double> gen_w;
  for (const auto& s : S) {
    gens.push_back(encode(s));
    gen_w.push_back(weighted_length(s, weights));
  }

  const auto n_max = static_cast<std::size_t>(opts.n_max);
  auto horizon = [&](std::size_t n) { return (n_max - n) * maxlen; };
  auto clip = [](std::string& str, std::size_t keep) {
    if (str.size() > keep) str.erase(0, str.size() - keep);
  };

  std::vector<double> a;
  std::unordered_map<std::string, double> frontier;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    std::string key = gens[i];
    clip(key, horizon(1));
    auto [it, fresh] = frontier.emplace(std::move(key), gen_w[i]);
    if (!fresh) it->second = std::max(it->second, gen_w[i]);
  }
  for (std::size_t n = 1;; ++n) {
    out.peak_frontier = std::max(out.peak_frontier, frontier.size());
    double best = 0.0;
    for (const auto& [key, value] : frontier) best = std::max(best, value);
    a.push_back(best);
    if (n == n_max) break;
    std::unordered_map<std::string, double> next;
    next.reserve(frontier.size() * gens.size());
    const std::size_t keep = horizon(n + 1);
    for (const auto& [key, value] : frontier) {
      for (std::size_t i = 0; i < gens.size(); ++i) {
        const std::string& g = gens[i];
        std::size_t k = 0;
        double cancelled = 0.0;
        while (k < key.size() && k < g.size() && key[key.size() - 1 - k] == static_cast<char>(128 - g[k])) {
          cancelled += weight_of(g[k]);
          ++k;
        }
        std::string child;
        child.reserve(key.size() - k + g.size() - k);
        child.append(key, 0, key.size() - k);
        child.append(g, k, std::string::npos);
        clip(child, keep);
        const double v = value + gen_w[i] - 2.0 * cancelled;
        auto [it, fresh] = next.emplace(std::move(child), v);
        if (!fresh) it->second = std::max(it->second, v);
      }
    }
    if (next.size() > opts.frontier_cap) {
      if (!opts.allow_pruning)
        throw ResourceError("joint stable length frontier exceeded cap " + std::to_string(opts.frontier_cap));
      beam_prune(next, opts.frontier_cap);
      out.certified = false;
    }
    frontier = std::move(next);
  }
  return a;
}

std::vector<double> generic_levels(const ActionModel& A, const std::vector<Word>& S, const JslOptions& opts,
                                   JslResult& out) {
  std::vector<double> a;
  std::unordered_map<Word, double> frontier;
  for (const auto& s : S) frontier.emplace(s, displacement(A, s));
  for (int n = 1;; ++n) {
    out.peak_frontier = std::max(out.peak_frontier, frontier.size());
    double best = 0.0;
    for (const auto& [w, d] : frontier) best = std::max(best, d);
    a.push_back(best);
    if (n == opts.n_max) break;
    std::unordered_map<Word, double> next;
    for (const auto& [w, d] : frontier) {
      for (const auto& s : S) {
        Word p = w * s;
        if (next.find(p) != next.end()) continue;
        const double v = displacement(A, p);
        next.emplace(std::move(p), v);
      }
    }
    if (next.size() > opts.frontier_cap) {
      if (!opts.allow_pruning)
        throw ResourceError("joint stable length frontier exceeded cap " + std::to_string(opts.frontier_cap));
      beam_prune(next, opts.frontier_cap);
      out.certified = false;
    }
    frontier = std::move(next);
  }
  return a;
}

}  // namespace

JslResult joint_stable_length(const ActionModel& A, const std::vector<Word>& S, JslOptions opts) {
  if (S.empty()) throw InputError("joint stable length needs a non-empty set");
  if (opts.n_max < 2) throw InputError("joint stable length needs n_max >= 2");
  JslResult out;
  for (const auto& s : S) out.max_single = std::max(out.max_single, displacement(A, s));

  out.a = A.tree_weights ? tree_levels(*A.tree_weights, S, opts, out) : generic_levels(A, S, opts, out);

  double hi = kInf;
  for (std::size_t n = 1; n <= out.a.size(); ++n) hi = std::min(hi, out.a[n - 1] / static_cast<double>(n));
  if (A.rounding > 0.0) hi += A.rounding * (1.0 + hi);

  // Lower terms from stable lengths of short products.
  double half_lo = 0.0, half_hi = 0.0;
  for (const auto& s : S) {
    for (const auto& t : S) {
      const auto b = stable_length(A, s * t, opts.bracket);
      half_lo = std::max(half_lo, 0.5 * b.lo);
      half_hi = std::max(half_hi, 0.5 * b.hi);
    }
  }
  out.half_s2 = {half_lo, half_hi, half_lo == half_hi};
  double lo = half_lo;
  std::unordered_set<Word> level(S.begin(), S.end());
  for (int n = 1; n <= std::min(opts.lo_levels, opts.n_max); ++n) {
    for (const auto& w : level) lo = std::max(lo, stable_length(A, w, opts.bracket).lo / n);
    if (n == std::min(opts.lo_levels, opts.n_max)) break;
    std::unordered_set<Word> next;
    for (const auto& w : level)
      for (const auto& s : S) next.insert(w * s);
    level = std::move(next);
  }
  out.bracket = {std::min(lo, hi), hi, false};
  out.bracket.exact = out.certified && A.rounding == 0.0 && out.bracket.lo == out.bracket.hi;
  return out;
}

double bf_upper(const JslResult& r, double delta, double K) { return K * delta + r.half_s2.hi; }

bool bf_lower_check(const JslResult& r, double tol) { return r.half_s2.lo <= r.bracket.hi + tol; }

double bf_minimal_K(const JslResult& r, double delta, double tol) {
  const double gap = r.bracket.hi - r.half_s2.lo;
  if (gap <= tol) return 0.0;
  if (delta <= 0.0) return kInf;
  return gap / delta;
}

BochiConstants BochiConstants::caps(int m) {
  if (m < 1) throw InputError("matrix dimension must be >= 1");
  return {m, 8.0 * std::log(2.0) + 5.0 * std::log(static_cast<double>(m)), 2 * m * m * m};
}

namespace {

struct LevelMax {
  std::vector<double> log_sigma;   // log max sigma_1 at depth n (not divided)
  std::vector<double> log_lambda;  // log max lambda_1 at depth n
};

template <typename MatrixT>
LevelMax enumerate_products(const std::vector<Eigen::MatrixXd>& S, int depth, bool want_sigma) {
  using Scaled = linalg::ScaledMatrix<MatrixT>;
  std::vector<MatrixT> mats;
  for (const auto& m : S) mats.push_back(m);
  LevelMax out;
  out.log_sigma.assign(static_cast<std::size_t>(depth), -kInf);
  out.log_lambda.assign(static_cast<std::size_t>(depth), -kInf);
  const auto dim = S.front().rows();
  std::function<void(const Scaled&, int)> walk = [&](const Scaled& p, int n) {
    for (const auto& m : mats) {
      Scaled q{p.unit * m, p.log_scale};
      const double f = std::sqrt(linalg::frobenius_sq(q.unit));
      if (f == 0.0) continue;  // product vanished; contributes -inf
      if (f > 1e64 || f < 1e-64) {
        q.unit /= f;
        q.log_scale += std::log(f);
      }
      const auto idx = static_cast<std::size_t>(n);
      if (want_sigma) out.log_sigma[idx] = std::max(out.log_sigma[idx], q.log_top_singular_value());
      out.log_lambda[idx] = std::max(out.log_lambda[idx], q.log_spectral_radius());
      if (n + 1 < depth) walk(q, n + 1);
    }
  };
  walk(Scaled::identity(dim), 0);
  return out;
}

LevelMax products(const std::vector<Eigen::MatrixXd>& S, int depth, bool want_sigma) {
  const auto dim = S.front().rows();
  for (const auto& m : S) {
    if (m.rows() != dim || m.cols() != dim) throw InputError("matrices must be square of a common dimension");
    if (!m.allFinite()) throw InputError("matrix has non-finite entries");
  }
  if (dim == 2) return enumerate_products<linalg::Matrix2d>(S, depth, want_sigma);
  return enumerate_products<Eigen::MatrixXd>(S, depth, want_sigma);
}

double product_count(std::size_t base, int depth) { return std::pow(static_cast<double>(base), depth); }

}  // namespace

JsrResult jsr_bracket(const std::vector<Eigen::MatrixXd>& S, int n_max, std::size_t cap) {
  if (S.empty()) throw InputError("matrix set is empty");
  if (n_max < 1) throw InputError("n_max must be >= 1");
  if (product_count(S.size(), n_max) > static_cast<double>(cap))
    throw ResourceError("|S|^n_max = " + std::to_string(product_count(S.size(), n_max)) + " exceeds cap " +
                        std::to_string(cap) + "; lower n_max");
  const auto levels = products(S, n_max, true);
  JsrResult out;
  double hi = kInf, lo = -kInf;
  for (int n = 1; n <= n_max; ++n) {
    const auto i = static_cast<std::size_t>(n - 1);
    out.log_sigma.push_back(levels.log_sigma[i] / n);
    out.log_lambda.push_back(levels.log_lambda[i] / n);
    hi = std::min(hi, out.log_sigma.back());
    lo = std::max(lo, out.log_lambda.back());
  }
  // Rounding allowance for the decompositions.
  const double slack = 1e-12 * (1.0 + std::abs(hi));
  out.log_jsr = {std::min(lo, hi + slack), hi + slack, false};
  return out;
}

BochiResult bochi_rhs(const std::vector<Eigen::MatrixXd>& S, const BochiConstants& constants, std::size_t cap,
                      bool allow_probe) {
  if (S.empty()) throw InputError("matrix set is empty");
  BochiResult out;
  int j_max = constants.d_m;
  while (j_max > 0 && product_count(S.size(), j_max) > static_cast<double>(cap)) --j_max;
  if (j_max < constants.d_m && !allow_probe)
    throw ResourceError("product enumeration needs |S|^" + std::to_string(constants.d_m) + " products, over cap " +
                        std::to_string(cap) + "; rerun as a probe with smaller d_m");
  if (j_max < 1) throw ResourceError("spectral radius probe cannot enumerate even single products under the cap");
  out.j_max = j_max;
  out.certified = j_max == constants.d_m;
  const auto levels = products(S, j_max, false);
  double best = -kInf;
  for (int j = 1; j <= j_max; ++j) {
    out.log_lambda.push_back(levels.log_lambda[static_cast<std::size_t>(j - 1)] / j);
    best = std::max(best, out.log_lambda.back());
  }
  out.rhs = constants.c_m + best;
  return out;
}

}  // namespace lenspec
