#pragma once

// Weighted, possibly asymmetric word metrics on a free group: exact word
// length by uniform-cost search, semigroup-generation checks, and a two-sided
// bracket for the stable word length.

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "lenspec/bracket.hpp"
#include "lenspec/words.hpp"

namespace lenspec {

struct SearchLimits {
  double radius = 32.0;              // maximal path cost explored
  std::size_t node_cap = 2'000'000;  // settled elements before ResourceError
  std::size_t macro_nodes = 20'000;  // size of the precomputed macro table
};

struct GenerationWitness {
  Word target;
  bool reached = false;
  double cost = 0.0;
  std::vector<std::size_t> path;  // indices into the generating set, left to right
};

struct GenerationCheck {
  // true: every standard generator and inverse was reached.
  // false with `inconclusive`: some target was not reached within the limits,
  // which does not prove that S fails to generate.
  bool generates = false;
  bool inconclusive = false;
  std::vector<GenerationWitness> witnesses;
  std::optional<Word> first_unreached;
};

class WordMetric {
 public:
  WordMetric(Alphabet alphabet, GeneratingSet S, SearchLimits limits = {});

  const GeneratingSet& generating_set() const noexcept { return S_; }
  const Alphabet& alphabet() const noexcept { return alphabet_; }
  const SearchLimits& limits() const noexcept { return limits_; }

  // |g|_S: least total weight of s_1, ..., s_m in S with s_1 ... s_m = g.
  // Throws SearchExhausted past the radius, ResourceError past the node cap.
  double length(const Word& g) const;

  // Same search, returning the factorisation.
  GenerationWitness shortest_path(const Word& g) const;

  // All elements with |g|_S <= max_cost and their exact lengths.
  std::unordered_map<Word, double> ball(double max_cost) const;

  // Exact lengths for every target (settles targets in one search).
  std::unordered_map<Word, double> lengths(const std::vector<Word>& targets) const;

  // Upper bound on |h|_S from a factorisation of the reduced word h into
  // subwords whose exact lengths are known from the macro table. Infinite if
  // no such factorisation exists.
  double concatenation_bound(const Word& h) const;

  // Stable length bracket for the cyclic representative c.
  // Upper: cheapest cyclic tiling of c^j by macro pieces, per period.
  // Lower: each step s crosses the axis of c forward along a subword of s,
  // so a cyclic tiling by subwords of S elements, each costing the least
  // weight of an element containing it, bounds the length from below. When
  // that is not tight, also the best f = (weighted tree length) +
  // (homomorphism to R) with f(s) <= weight(s), found by linear programming.
  LengthBracket stable_length(const Word& g, int k_max = 8) const;

  // The tiling lower bound alone; cheap, for filtering.
  double stable_floor(const Word& g) const;

  // Largest |s|_std / weight(s): ell_std <= lipschitz * ell_S.
  double standard_lipschitz() const;

 private:
  Alphabet alphabet_;
  GeneratingSet S_;
  SearchLimits limits_;
  // Exact lengths of every element settled by a bounded search from the
  // identity; pieces for concatenation_bound.
  std::unordered_map<Word, double> macros_;
  std::size_t macro_max_len_ = 0;

  struct Trie {
    std::vector<std::int32_t> next;  // node * letters + letter index, -1 if absent
    std::vector<double> cost;        // infinity when the node is not a piece
    std::size_t depth = 0;
  };
  void insert(Trie& t, const Word& w, std::size_t from, double cost, bool every_prefix) const;
  double cycle_ratio(const Trie& t, const Word& c, std::size_t windings, bool round_up) const;
  std::size_t letter_index(Letter x) const;
  Trie macro_trie_;
  Trie tile_trie_;
};

GenerationCheck check_semigroup_generation(const GeneratingSet& S, const Alphabet& alphabet,
                                           SearchLimits limits = {8.0, 200'000});

double word_length(const Word& g, const GeneratingSet& S, const Alphabet& alphabet,
                   SearchLimits limits = {});

}  // namespace lenspec
