#include <doctest.h>

#include <random>
#include <unordered_set>

#include "lenspec/errors.hpp"
#include "lenspec/word_metric.hpp"
#include "lenspec/words.hpp"
#include "oracles.hpp"

using namespace lenspec;

TEST_CASE("free reduction") {
  CHECK(Word({1, -1, 2}) == Word({2}));
  CHECK(Word({}).empty());
  CHECK(Word({1, 2, -1}).size() == 3);
  CHECK(Word::parse("aAb") == Word::parse("b"));
  CHECK(Word::parse("abA").str() == "abA");
  CHECK_THROWS_AS(Word::parse("a1"), InputError);
  CHECK_THROWS_AS(Word::parse("c", Alphabet(2)), InputError);

  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> pick(-3, 3);
  for (int t = 0; t < 500; ++t) {
    std::vector<Letter> raw;
    for (int i = 0; i < 12; ++i) {
      int x = pick(rng);
      raw.push_back(x == 0 ? 1 : x);
    }
    const Word w(raw);
    CHECK(w.letters() == oracle::reduce(raw));
    CHECK((w * w.inverse()).empty());
  }
}

TEST_CASE("cyclic reduction and canonical representatives") {
  const auto c = cyclic_reduce(Word::parse("abA"));
  CHECK(c.rep == Word::parse("b"));
  CHECK(c.conjugator == Word::parse("a"));
  CHECK(cyclic_reduce(Word{}).rep.empty());
  const auto k = cyclic_reduce(Word::parse("abAB"));
  CHECK(k.rep.size() == 4);

  std::mt19937_64 rng(2);
  for (int t = 0; t < 500; ++t) {
    const Word g = oracle::random_word(rng, 2, 1, 10);
    const auto cc = cyclic_reduce(g);
    CHECK(cc.rep == cc.conjugator.inverse() * g * cc.conjugator);
    CHECK(cc.rep.size() == oracle::cyclic_core(g.letters()).size());
    // Conjugates share a representative.
    const Word h = oracle::random_word(rng, 2, 0, 5);
    CHECK(cyclic_reduce(h * g * h.inverse()).rep == cc.rep);
  }
}

TEST_CASE("conjugacy class enumeration") {
  CHECK(enumerate_conj_classes(Alphabet(1), 2).size() == 4);
  CHECK(enumerate_conj_classes(Alphabet(2), 1).size() == 4);
  CHECK(enumerate_conj_classes(Alphabet(2), 2).size() == 12);
  for (int rank : {1, 2, 3})
    for (int n = 1; n <= (rank == 3 ? 4 : 6); ++n)
      CHECK(enumerate_conj_classes(Alphabet(rank), n).size() == oracle::count_classes(rank, n));

  std::unordered_set<Word> seen;
  for (const auto& c : enumerate_conj_classes(Alphabet(2), 6)) {
    CHECK(seen.insert(c.rep).second);
    CHECK(cyclic_reduce(c.rep).rep == c.rep);
  }
  CHECK(ball_size(Alphabet(2), 3) == 1 + 4 + 12 + 36);
}

TEST_CASE("word metric lengths") {
  const Alphabet F2(2);
  const auto std_set = GeneratingSet::standard(F2);
  CHECK(word_length(Word::parse("ab"), std_set, F2) == 2.0);
  std::vector<Generator> with_ab = std_set.elements();
  with_ab.push_back({Word::parse("ab"), 1.0});
  CHECK(word_length(Word::parse("ab"), GeneratingSet(with_ab), F2) == 1.0);
  const std::vector<double> w{1.0, 2.0};
  CHECK(word_length(Word::parse("bbb"), GeneratingSet::standard(F2, w), F2) == 6.0);
  CHECK(word_length(Word::parse("aBa"), std_set, F2) == 3.0);
  CHECK(weighted_length(Word::parse("ab"), w) == 3.0);
}

TEST_CASE("semigroup generation") {
  const Alphabet F2(2);
  CHECK(check_semigroup_generation(GeneratingSet::standard(F2), F2).generates);
  const std::vector<Word> ab{Word::parse("a"), Word::parse("b")};
  const auto pos = check_semigroup_generation(GeneratingSet::unit(ab), F2);
  CHECK_FALSE(pos.generates);
  const std::vector<Word> odd{Word::parse("ab"), Word::parse("B"), Word::parse("A")};
  CHECK(check_semigroup_generation(GeneratingSet::unit(odd), F2).generates);
}

TEST_CASE("tree translation length through the Gromov product") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 500; ++t) {
    const Word g = oracle::random_word(rng, 3, 1, 12);
    CHECK(oracle::tree_translation_via_gromov(g.letters()) == static_cast<double>(cyclic_reduce(g).rep.size()));
  }
}
