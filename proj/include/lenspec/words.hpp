#pragma once

// Free-group word combinatorics: reduction, cyclic reduction, conjugacy-class
// enumeration and generating sets.
//
// Letters are signed generator indices: +i is a_i, -i is a_i^{-1}, with
// 1 <= i <= rank. The fixed letter order used for canonical representatives
// is a_1 < a_1^{-1} < a_2 < a_2^{-1} < ...

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lenspec {

using Letter = int;

inline constexpr int letter_key(Letter x) noexcept {
  return 2 * ((x < 0 ? -x : x) - 1) + (x < 0 ? 1 : 0);
}

inline constexpr Letter letter_from_key(int key) noexcept {
  return (key % 2 == 0) ? key / 2 + 1 : -(key / 2 + 1);
}

class Alphabet {
 public:
  explicit Alphabet(int rank);

  int rank() const noexcept { return rank_; }
  int letter_count() const noexcept { return 2 * rank_; }
  bool valid(Letter x) const noexcept { return x != 0 && x >= -rank_ && x <= rank_; }

  // Letters in canonical order.
  std::vector<Letter> letters() const;

 private:
  int rank_;
};

// A freely reduced word. Every constructor reduces.
class Word {
 public:
  Word() = default;
  explicit Word(std::span<const Letter> raw);
  Word(std::initializer_list<Letter> raw);

  static Word generator(Letter x) { return Word({x}); }

  const std::vector<Letter>& letters() const noexcept { return letters_; }
  std::size_t size() const noexcept { return letters_.size(); }
  bool empty() const noexcept { return letters_.empty(); }
  Letter operator[](std::size_t i) const { return letters_[i]; }
  Letter front() const { return letters_.front(); }
  Letter back() const { return letters_.back(); }

  Word inverse() const;
  Word pow(int k) const;
  // Letters [pos, pos + len); the result is a subword and hence reduced.
  Word subword(std::size_t pos, std::size_t len) const;
  Word rotated(std::size_t i) const;

  bool cyclically_reduced() const noexcept {
    return letters_.size() <= 1 || letters_.front() != -letters_.back();
  }

  // Order: shorter words first, then lexicographic under letter_key.
  std::strong_ordering operator<=>(const Word& other) const noexcept;
  bool operator==(const Word& other) const noexcept = default;

  friend Word operator*(const Word& lhs, const Word& rhs);

  // Letters a..z for generators 1..26, upper case for inverses, "e" for the
  // identity. Use `Word::parse` for validation against an alphabet.
  std::string str() const;
  static Word parse(std::string_view text);
  static Word parse(std::string_view text, const Alphabet& alphabet);

 private:
  struct Trusted {};
  Word(Trusted, std::vector<Letter> reduced) : letters_(std::move(reduced)) {}
  friend Word reduce(std::span<const Letter> raw);

  std::vector<Letter> letters_;
};

// Free reduction of a raw letter sequence. Idempotent.
Word reduce(std::span<const Letter> raw);
Word reduce(std::span<const Letter> raw, const Alphabet& alphabet);

struct ConjClass {
  Word rep;         // cyclically reduced, minimal rotation
  Word conjugator;  // rep == conjugator^{-1} * g * conjugator

  bool operator==(const ConjClass&) const = default;
};

ConjClass cyclic_reduce(const Word& g);

// Minimal rotation of a cyclically reduced word, with the rotation offset.
std::pair<Word, std::size_t> minimal_rotation(const Word& cyclic);

// Calls `visit` once per non-trivial conjugacy class whose cyclically reduced
// length is <= max_length, passing the canonical representative. Classes are
// produced by length, then in increasing letter order.
void for_each_conj_class(const Alphabet& alphabet, int max_length,
                         const std::function<void(const Word&)>& visit);

std::vector<ConjClass> enumerate_conj_classes(const Alphabet& alphabet, int max_length,
                                              std::size_t cap = 5'000'000);

// Number of reduced words of length <= radius (the ball size in the standard
// Cayley tree).
std::size_t ball_size(const Alphabet& alphabet, int radius);

// Every reduced word of length <= radius, shortest first.
void for_each_ball_element(const Alphabet& alphabet, int radius,
                           const std::function<void(const Word&)>& visit);

struct Generator {
  Word word;
  double weight = 1.0;

  bool operator==(const Generator&) const = default;
};

class GeneratingSet {
 public:
  GeneratingSet() = default;
  explicit GeneratingSet(std::vector<Generator> elements);

  // {a_1, a_1^{-1}, ...} with weight(a_i) = weight(a_i^{-1}) = weights[i-1].
  static GeneratingSet standard(const Alphabet& alphabet, std::span<const double> weights = {});
  static GeneratingSet unit(std::span<const Word> words);

  const std::vector<Generator>& elements() const noexcept { return elements_; }
  std::size_t size() const noexcept { return elements_.size(); }

  // Closed under inversion with equal weights.
  bool symmetric() const;
  // Exactly one copy of each standard letter and its inverse, no other
  // elements, weight(a) == weight(a^{-1}). Word length is then a weighted
  // tree length.
  bool is_standard(int rank) const;
  std::vector<double> standard_weights(int rank) const;

  bool operator==(const GeneratingSet&) const = default;

 private:
  std::vector<Generator> elements_;
};

// Per-generator letter counts (a_i and a_i^{-1} together) and exponent sums.
std::vector<int> letter_counts(const Word& w, int rank);
std::vector<int> exponent_sums(const Word& w, int rank);

double weighted_length(const Word& w, std::span<const double> weights);

}  // namespace lenspec

template <>
struct std::hash<lenspec::Word> {
  std::size_t operator()(const lenspec::Word& w) const noexcept {
    std::size_t h = 0xcbf29ce484222325ULL;
    for (auto x : w.letters()) {
      h ^= static_cast<std::size_t>(static_cast<std::uint32_t>(x));
      h *= 0x100000001b3ULL;
    }
    return h;
  }
};
