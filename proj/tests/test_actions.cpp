#include <doctest.h>

#include <random>

#include "lenspec/action.hpp"
#include "lenspec/errors.hpp"
#include "lenspec/spaces.hpp"
#include "oracles.hpp"

using namespace lenspec;

namespace {

MobiusRep2 single(const Eigen::Matrix2d& M) { return MobiusRep2(std::vector<Eigen::Matrix2d>{M}); }

}  // namespace

TEST_CASE("tree displacement, Gromov product, stable length") {
  const Alphabet F2(2), F3(3);
  const auto T = tree_model(F2);
  CHECK(displacement(T, Word::parse("abA")) == 3.0);
  CHECK(displacement(T, Word{}) == 0.0);
  CHECK(gromov_product(tree_model(F3), Word::parse("ab"), Word::parse("ac")) == 1.0);
  CHECK(gromov_product(T, Word::parse("ab"), Word::parse("BA")) == 0.0);
  CHECK(gromov_product(T, Word::parse("aab"), Word::parse("aab")) == 3.0);
  CHECK(stable_length(T, cyclic_reduce(Word::parse("abA"))) == LengthBracket::point(1.0));
  const auto W = tree_model(F2, {1.0, 2.0});
  CHECK(stable_length(W, Word::parse("ab")) == LengthBracket::point(3.0));
  CHECK(displacement(W, Word::parse("ab")) == 3.0);
  CHECK(four_point_defect(T, Word{}, Word::parse("ab"), Word::parse("aB"), Word::parse("ba")) == 0.0);
  CHECK_THROWS_AS(tree_model(F2, {1.0, -1.0}), InputError);
}

TEST_CASE("generic bracket reproduces the hand computation") {
  const auto T = tree_model(Alphabet(2));
  BracketOptions o;
  o.k_max = 4;
  const auto b = stable_length_bracket(T, Word::parse("abA"), o);
  CHECK(b.lo == 1.0);
  CHECK(b.hi == 1.25);
  CHECK(b.contains(1.0));
  const auto e = stable_length_bracket(T, Word{}, o);
  CHECK(e.lo == 0.0);
  CHECK(e.hi == 0.0);
}

TEST_CASE("Möbius displacement and stable length") {
  Eigen::Matrix2d D;
  D << 2.0, 0.0, 0.0, 0.5;
  const auto H = mobius_model(single(D));
  const Word a = Word::parse("a");
  CHECK(displacement(H, a) == doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-12));
  CHECK(displacement(H, a) == doctest::Approx(oracle::h2_orbit_distance(D)).epsilon(1e-12));
  CHECK(displacement(H, Word{}) == doctest::Approx(0.0));
  CHECK(stable_length(H, a).lo == doctest::Approx(2.0 * std::log(2.0)));

  Eigen::Matrix2d T3;
  T3 << 2.0, 1.0, 1.0, 1.0;
  const auto H3 = mobius_model(single(T3));
  CHECK(stable_length(H3, a).lo == doctest::Approx(2.0 * std::log((3.0 + std::sqrt(5.0)) / 2.0)).epsilon(1e-12));
  CHECK(stable_length(H3, a).lo == doctest::Approx(1.924847).epsilon(1e-6));

  Eigen::Matrix2d R;
  R << std::cos(0.7), -std::sin(0.7), std::sin(0.7), std::cos(0.7);
  const auto E = mobius_model(single(R));
  CHECK(displacement(E, a) == doctest::Approx(0.0).scale(1.0));
  CHECK(stable_length(E, a).hi == 0.0);
}

TEST_CASE("orbit distances against the explicit Möbius action") {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int t = 0; t < 200; ++t) {
    std::vector<Eigen::Matrix2d> gens;
    std::vector<Eigen::Matrix2cd> cgens;
    for (int k = 0; k < 2; ++k) {
      Eigen::Matrix2d M;
      M << n(rng), n(rng), n(rng), n(rng);
      if (M.determinant() < 0) M.row(0) *= -1.0;
      gens.push_back(M / std::sqrt(M.determinant()));
      Eigen::Matrix2cd C;
      C << std::complex<double>(n(rng), n(rng)), std::complex<double>(n(rng), n(rng)),
          std::complex<double>(n(rng), n(rng)), std::complex<double>(n(rng), n(rng));
      cgens.push_back(C / std::sqrt(C.determinant()));
    }
    const auto H2 = mobius_model(MobiusRep2(gens));
    const auto H3 = mobius_model(MobiusRep3(cgens));
    const Word g = oracle::random_word(rng, 2, 1, 4);
    const double d2 = oracle::h2_orbit_distance(oracle::word_image(g, gens));
    const double d3 = oracle::h3_orbit_distance(oracle::word_image(g, cgens));
    // The half-space formulas lose about exp(d) ulps far from the basepoint.
    CHECK(std::abs(displacement(H2, g) - d2) <= 1e-9 + 1e-14 * std::exp(d2));
    CHECK(std::abs(displacement(H3, g) - d3) <= 1e-9 + 1e-14 * std::exp(d3));
  }
}

TEST_CASE("linear model") {
  Eigen::MatrixXd D(2, 2);
  D << 4.0, 0.0, 0.0, 0.25;
  const auto L = linear_model(LinearRep(std::vector<Eigen::MatrixXd>{D}));
  CHECK(displacement(L, Word::parse("a")) == doctest::Approx(std::log(4.0)));
  CHECK(displacement(L, Word{}) == doctest::Approx(0.0));
  CHECK_FALSE(L.symmetric);

  std::mt19937_64 rng(5);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int t = 0; t < 100; ++t) {
    std::vector<Eigen::MatrixXd> gens;
    for (int k = 0; k < 2; ++k) gens.push_back(Eigen::MatrixXd::NullaryExpr(3, 3, [&] { return n(rng); }));
    const auto A = linear_model(LinearRep(gens));
    const Word g = oracle::random_word(rng, 2, 1, 6);
    CHECK(stable_length(A, g).hi <= displacement(A, g) + 1e-9);
  }
}

TEST_CASE("scaling multiplies every metric quantity") {
  const auto T = tree_model(Alphabet(2), {1.0, 2.0});
  const auto S = scaled(T, 3.0);
  const Word g = Word::parse("abAAb");
  CHECK(displacement(S, g) == 3.0 * displacement(T, g));
  CHECK(stable_length(S, g) == LengthBracket::point(3.0 * stable_length(T, g).lo));
  CHECK(S.delta == 0.0);
  CHECK_THROWS_AS(scaled(T, 0.0), InputError);
}
