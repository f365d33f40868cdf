#include <doctest.h>

#include "lenspec/bounds.hpp"
#include "lenspec/errors.hpp"
#include "lenspec/spaces.hpp"

using namespace lenspec;

TEST_CASE("window sup on trees") {
  const Alphabet F2(2);
  const auto T = tree_model(F2);
  const auto W = tree_model(F2, {1.0, 2.0});
  auto w = dilation_window(W, T, 4.0);
  CHECK(w.sup == LengthBracket{2.0, 2.0, w.sup.exact});
  CHECK(w.argmax.value() == Word::parse("b"));
  CHECK(w.covered);
  w = dilation_window(T, T, 5.0);
  CHECK(w.sup.lo == 1.0);
  CHECK(w.sup.hi == 1.0);
  w = dilation_window(scaled(W, 3.0), T, 4.0);
  CHECK(w.sup.lo == 6.0);

  const auto many = dilation_windows(W, T, {2.0, 4.0, 6.0});
  REQUIRE(many.size() == 3);
  CHECK(many[0].members < many[2].members);
}

TEST_CASE("thm13 bound arithmetic") {
  CHECK(thm13_bound(1.0, 12.0, 0.5, 0.0, 1e4) == doctest::Approx(11.0 / 9.0));
  CHECK(thm13_bound(2.0, 12.0, 0.5, kLog2, 10.0) == doctest::Approx(2.0 * 11.0 / 9.0 + 20.0 * kLog2 / 9.0));
  CHECK(thm13_bound(1.0, 12.0, 0.5, 0.0, 10.0, Thm13Variant::cor17) ==
        doctest::Approx(12.0 / 9.0 + 20.0 * std::log(4.0) / 9.0));
  CHECK_THROWS_AS(thm13_bound(1.0, 3.0, 0.5, 0.0, 1.0), PreconditionError);
}

TEST_CASE("decide") {
  CHECK(decide({1.0, 1.0, true}, 1.0, 1.0, true, 0.0) == Verdict::holds);
  CHECK(decide({2.0, 2.0, true}, 1.0, 1.0, true, 0.0) == Verdict::violated);
  CHECK(decide({2.0, 2.0, true}, 1.0, 1.0, false, 0.0) == Verdict::inconclusive);
  CHECK(decide({0.5, 2.0, false}, 1.0, 1.0, true, 0.0) == Verdict::inconclusive);
  CHECK(verdict_from_string(to_string(Verdict::hypothesis_failed)) == Verdict::hypothesis_failed);
}

TEST_CASE("thm15 exact case") {
  const Alphabet F2(2);
  Thm15Config cfg;
  const auto reps = thm15_verify(tree_model(F2, {1.0, 2.0}), F2, GeneratingSet::standard(F2), cfg);
  REQUIRE(reps.size() == 4);
  for (const auto& r : reps) {
    CHECK(r.verdict == Verdict::holds);
    CHECK(r.bound_value == 2.0);
    CHECK(r.reference.lo == 2.0);
    CHECK(r.reference.hi == 2.0);
  }
}

TEST_CASE("thm15 refuses sets that do not generate") {
  const Alphabet F2(2);
  const std::vector<Word> pos{Word::parse("a"), Word::parse("b")};
  CHECK_THROWS_AS(thm15_verify(tree_model(F2), F2, GeneratingSet::unit(pos), Thm15Config{}), PreconditionError);
}

TEST_CASE("prop31 equality") {
  const Alphabet F2(2);
  Prop31Config cfg;
  const auto T = tree_model(F2);
  auto r = prop31_verify(T, F2, GeneratingSet::standard(F2), cfg);
  CHECK(r.value("exact_equality").value() == 1.0);
  CHECK(r.reference.lo == 1.0);
  std::vector<Generator> els = GeneratingSet::standard(F2).elements();
  els.push_back({Word::parse("ab"), 1.0});
  r = prop31_verify(T, F2, GeneratingSet(els), cfg);
  CHECK(r.verdict != Verdict::violated);
  CHECK(r.reference.lo == 2.0);
  CHECK(r.reference.hi == 2.0);
  CHECK(r.window_sup.lo == 2.0);
}

TEST_CASE("bf verifier on a tree") {
  const auto T = tree_model(Alphabet(2));
  BfConfig cfg;
  const auto r = bf_verify(T, {Word::parse("a"), Word::parse("b")}, cfg);
  CHECK(r.verdict == Verdict::holds);
  CHECK(r.value("minimal_K").value() == 0.0);
}

TEST_CASE("orbit-ball generating set on a small ball") {
  Lemma25Config cfg;
  cfg.ball_radius = 5;
  const auto r = lemma25_check(tree_model(Alphabet(2)), cfg);
  CHECK(r.report.verdict == Verdict::holds);
}

TEST_CASE("finite set and constant search") {
  const auto r = lemma32_search(tree_model(Alphabet(2)), Lemma32Config{5, 1, 1e-9});
  CHECK(r.report.verdict != Verdict::violated);
  CHECK(r.C >= 0.0);
}

TEST_CASE("delta metric") {
  const Alphabet F2(2);
  const auto T = tree_model(F2);
  auto d = delta_metric(T, T, 4);
  CHECK(d.delta.lo == 0.0);
  CHECK(d.delta.hi == 0.0);
  d = delta_metric(T, tree_model(F2, {1.0, 2.0}), 4);
  CHECK(d.delta.lo == doctest::Approx(std::log(2.0)));
  d = delta_metric(T, scaled(T, 3.0), 4);
  CHECK(d.delta.lo == doctest::Approx(0.0).scale(1.0));
}
