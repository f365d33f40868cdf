#include <doctest.h>

#include <random>

#include "lenspec/errors.hpp"
#include "lenspec/jsl.hpp"
#include "lenspec/spaces.hpp"
#include "oracles.hpp"

using namespace lenspec;

namespace {

std::vector<Word> words(std::initializer_list<const char*> ws) {
  std::vector<Word> out;
  for (auto w : ws) out.push_back(Word::parse(w));
  return out;
}

}  // namespace

TEST_CASE("tree joint stable length, worked examples") {
  const auto T = tree_model(Alphabet(2));
  JslOptions o;
  o.n_max = 8;
  auto r = joint_stable_length(T, words({"a", "b"}), o);
  CHECK(r.bracket.lo == 1.0);
  CHECK(r.bracket.hi == 1.0);
  CHECK(r.half_s2.lo == 1.0);

  r = joint_stable_length(T, words({"abA", "aBA"}), o);
  CHECK(r.bracket.lo == 1.0);
  CHECK(r.bracket.hi == 1.25);

  r = joint_stable_length(T, std::vector<Word>{Word{}}, o);
  CHECK(r.bracket.hi == 0.0);

  r = joint_stable_length(T, words({"a"}), o);
  CHECK(r.bracket == LengthBracket{1.0, 1.0, r.bracket.exact});
  CHECK(bf_upper(r, 0.0, 1e4) == 1.0);
  CHECK(bf_lower_check(r));
}

TEST_CASE("tree products match brute force") {
  const std::vector<double> w{1.0, 2.0};
  const auto T = tree_model(Alphabet(2), w);
  std::mt19937_64 rng(7);
  for (int t = 0; t < 30; ++t) {
    std::vector<Word> S;
    const int size = 1 + static_cast<int>(rng() % 3);
    for (int k = 0; k < size; ++k) S.push_back(oracle::random_word(rng, 2, 1, 3));
    JslOptions o;
    o.n_max = 6;
    const auto r = joint_stable_length(T, S, o);
    for (int n = 1; n <= 6; ++n) CHECK(r.a[static_cast<std::size_t>(n - 1)] == oracle::tree_max_product(S, n, w));
    CHECK(r.bracket.lo <= r.bracket.hi);
  }
}

TEST_CASE("generic path agrees with the tree path") {
  const auto T = tree_model(Alphabet(2));
  ActionModel G = T;
  G.tree_weights.reset();
  std::mt19937_64 rng(8);
  for (int t = 0; t < 20; ++t) {
    std::vector<Word> S{oracle::random_word(rng, 2, 1, 3), oracle::random_word(rng, 2, 1, 3)};
    JslOptions o;
    o.n_max = 6;
    const auto a = joint_stable_length(T, S, o);
    const auto b = joint_stable_length(G, S, o);
    CHECK(a.a == b.a);
  }
}

TEST_CASE("joint spectral radius") {
  Eigen::MatrixXd D(2, 2);
  D << 2.0, 0.0, 0.0, 0.5;
  auto r = jsr_bracket({D}, 8);
  CHECK(r.log_jsr.lo == doctest::Approx(std::log(2.0)));
  CHECK(r.log_jsr.hi == doctest::Approx(std::log(2.0)));
  r = jsr_bracket({Eigen::MatrixXd::Identity(2, 2)}, 4);
  CHECK(r.log_jsr.hi == doctest::Approx(0.0));
  CHECK_THROWS_AS(jsr_bracket({D, D}, 30, 1000), ResourceError);

  std::mt19937_64 rng(9);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int t = 0; t < 10; ++t) {
    std::vector<Eigen::MatrixXd> S;
    for (int k = 0; k < 2; ++k) S.push_back(Eigen::MatrixXd::NullaryExpr(2, 2, [&] { return n(rng); }));
    const auto j = jsr_bracket(S, 12);
    CHECK(j.log_jsr.lo <= j.log_jsr.hi + 1e-12);
  }
}

TEST_CASE("spectral radius constants and right-hand side") {
  const auto c2 = BochiConstants::caps(2);
  CHECK(c2.c_m == doctest::Approx(13.0 * std::log(2.0)));
  CHECK(c2.d_m == 16);
  CHECK(BochiConstants::caps(3).d_m == 54);
  Eigen::MatrixXd D(2, 2);
  D << 2.0, 0.0, 0.0, 0.5;
  const auto b = bochi_rhs({D}, c2);
  CHECK(b.certified);
  CHECK(b.rhs == doctest::Approx(c2.c_m + std::log(2.0)));
  CHECK_THROWS_AS(bochi_rhs({D, D}, BochiConstants::caps(3), 1000), ResourceError);
  const auto p = bochi_rhs({D, D}, BochiConstants::caps(3), 1 << 10, true);
  CHECK_FALSE(p.certified);
  CHECK(p.j_max == 10);
}

TEST_CASE("minimal K") {
  const auto s = build_schottky({});
  JslOptions o;
  o.n_max = 6;
  const auto r = joint_stable_length(s.mobius, words({"a", "b"}), o);
  CHECK(bf_lower_check(r));
  const double K = bf_minimal_K(r, kLog2);
  CHECK(std::isfinite(K));
  CHECK(r.bracket.hi <= bf_upper(r, kLog2, K) + 1e-9);
}
