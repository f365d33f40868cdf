#pragma once

// Independent reference computations. None of these share code with the
// library beyond the Word type used to feed them.

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <set>
#include <vector>

#include <Eigen/Dense>

#include "lenspec/words.hpp"

namespace oracle {

using lenspec::Letter;
using lenspec::Word;

// Stack-based free reduction.
inline std::vector<Letter> reduce(const std::vector<Letter>& raw) {
  std::vector<Letter> out;
  for (Letter x : raw) {
    if (!out.empty() && out.back() == -x)
      out.pop_back();
    else
      out.push_back(x);
  }
  return out;
}

// Strip matching ends of a reduced word.
inline std::vector<Letter> cyclic_core(std::vector<Letter> w) {
  std::size_t i = 0, j = w.size();
  while (j - i >= 2 && w[i] == -w[j - 1]) {
    ++i;
    --j;
  }
  return {w.begin() + static_cast<long>(i), w.begin() + static_cast<long>(j)};
}

inline double weighted(const std::vector<Letter>& w, const std::vector<double>& weights) {
  double s = 0.0;
  for (Letter x : w) s += weights[static_cast<std::size_t>(std::abs(x) - 1)];
  return s;
}

// Tree translation length through the Gromov product: d - 2 (g | g^{-1}).
inline double tree_translation_via_gromov(const std::vector<Letter>& reduced) {
  std::size_t k = 0;
  const std::size_t n = reduced.size();
  while (k < n / 2 && reduced[k] == -reduced[n - 1 - k]) ++k;
  return static_cast<double>(n) - 2.0 * static_cast<double>(k);
}

// Number of conjugacy classes with cyclic length 1..n, by brute force.
inline std::size_t count_classes(int rank, int n) {
  std::vector<Letter> letters;
  for (int i = 1; i <= rank; ++i) {
    letters.push_back(i);
    letters.push_back(-i);
  }
  std::set<std::vector<Letter>> classes;
  std::vector<std::vector<Letter>> level{{}};
  for (int len = 1; len <= n; ++len) {
    std::vector<std::vector<Letter>> next;
    for (const auto& w : level)
      for (Letter x : letters) {
        if (!w.empty() && w.back() == -x) continue;
        auto v = w;
        v.push_back(x);
        next.push_back(v);
      }
    for (const auto& w : next) {
      if (w.front() == -w.back() && w.size() > 1) continue;
      auto best = w;
      for (std::size_t r = 1; r < w.size(); ++r) {
        std::vector<Letter> rot(w.begin() + static_cast<long>(r), w.end());
        rot.insert(rot.end(), w.begin(), w.begin() + static_cast<long>(r));
        best = std::min(best, rot);
      }
      classes.insert(best);
    }
    level = std::move(next);
  }
  return classes.size();
}

// Möbius action of an SL(2,R) matrix on the upper half plane.
inline std::complex<double> mobius_apply(const Eigen::Matrix2d& M, std::complex<double> z) {
  return (M(0, 0) * z + M(0, 1)) / (M(1, 0) * z + M(1, 1));
}

// d(i, M i) in the upper half plane.
inline double h2_orbit_distance(const Eigen::Matrix2d& M) {
  const std::complex<double> i(0.0, 1.0);
  const auto z = mobius_apply(M / std::sqrt(M.determinant()), i);
  return std::acosh(1.0 + std::norm(z - i) / (2.0 * z.imag()));
}

// d(o, M o) in upper half space, o = (0, 1), via the image of o.
inline double h3_orbit_distance(const Eigen::Matrix2cd& M0) {
  const Eigen::Matrix2cd M = M0 / std::sqrt(M0.determinant());
  const auto a = M(0, 0), b = M(0, 1), c = M(1, 0), d = M(1, 1);
  const double t = 1.0 / (std::norm(c) + std::norm(d));
  const std::complex<double> z = (a * std::conj(c) + b * std::conj(d)) * t;
  return std::acosh(1.0 + (std::norm(z) + (t - 1.0) * (t - 1.0)) / (2.0 * t));
}

// 2 log |lambda_max| of a unit-determinant matrix.
template <typename MatrixT>
double eigen_translation(const MatrixT& M) {
  Eigen::ComplexEigenSolver<Eigen::Matrix2cd> es(M.template cast<std::complex<double>>());
  double r = 0.0;
  for (int i = 0; i < 2; ++i) r = std::max(r, std::abs(es.eigenvalues()(i)));
  return 2.0 * std::log(r / std::sqrt(std::abs(M.determinant())));
}

template <typename MatrixT>
MatrixT word_image(const Word& w, const std::vector<MatrixT>& gens) {
  MatrixT M = MatrixT::Identity(gens.front().rows(), gens.front().cols());
  for (Letter x : w.letters()) {
    const MatrixT& g = gens[static_cast<std::size_t>(std::abs(x) - 1)];
    M = M * (x > 0 ? MatrixT(g) : MatrixT(g.inverse()));
  }
  return M;
}

inline Word random_word(std::mt19937_64& rng, int rank, int min_len, int max_len) {
  std::uniform_int_distribution<int> len(min_len, max_len);
  std::uniform_int_distribution<int> gen(1, rank);
  std::bernoulli_distribution sign(0.5);
  std::vector<Letter> raw;
  const int n = len(rng);
  while (static_cast<int>(raw.size()) < n) {
    const Letter x = gen(rng) * (sign(rng) ? 1 : -1);
    if (!raw.empty() && raw.back() == -x) continue;
    raw.push_back(x);
  }
  return Word(raw);
}

// max over S^n of the weighted tree length, by brute force.
inline double tree_max_product(const std::vector<Word>& S, int n, const std::vector<double>& weights) {
  double best = 0.0;
  std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);
  while (true) {
    std::vector<Letter> raw;
    for (auto i : idx) raw.insert(raw.end(), S[i].letters().begin(), S[i].letters().end());
    best = std::max(best, weighted(reduce(raw), weights));
    std::size_t k = 0;
    while (k < idx.size() && ++idx[k] == S.size()) idx[k++] = 0;
    if (k == idx.size()) break;
  }
  return best;
}

// Unit-weight word length over S by breadth-first search on reduced words.
inline int bfs_word_length(const std::vector<Word>& S, const std::vector<Letter>& target, int max_depth) {
  std::set<std::vector<Letter>> seen{{}};
  std::vector<std::vector<Letter>> level{{}};
  for (int d = 0; d <= max_depth; ++d) {
    for (const auto& w : level)
      if (w == target) return d;
    std::vector<std::vector<Letter>> next;
    for (const auto& w : level)
      for (const auto& s : S) {
        auto raw = w;
        raw.insert(raw.end(), s.letters().begin(), s.letters().end());
        auto v = reduce(raw);
        if (seen.insert(v).second) next.push_back(std::move(v));
      }
    level = std::move(next);
  }
  return -1;
}

}  // namespace oracle
