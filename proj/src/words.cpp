#include "lenspec/words.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_set>

#include "lenspec/errors.hpp"

namespace lenspec {

Alphabet::Alphabet(int rank) : rank_(rank) {
  if (rank < 1) throw InputError("alphabet rank must be >= 1, got " + std::to_string(rank));
}

std::vector<Letter> Alphabet::letters() const {
  std::vector<Letter> out;
  out.reserve(letter_count());
  for (int k = 0; k < letter_count(); ++k) out.push_back(letter_from_key(k));
  return out;
}

Word reduce(std::span<const Letter> raw) {
  std::vector<Letter> stack;
  stack.reserve(raw.size());
  for (Letter x : raw) {
    if (x == 0) throw InputError("letter 0 is not a generator");
    if (!stack.empty() && stack.back() == -x)
      stack.pop_back();
    else
      stack.push_back(x);
  }
  return Word(Word::Trusted{}, std::move(stack));
}

Word reduce(std::span<const Letter> raw, const Alphabet& alphabet) {
  for (Letter x : raw) {
    if (!alphabet.valid(x))
      throw InputError("letter " + std::to_string(x) + " outside alphabet of rank " +
                       std::to_string(alphabet.rank()));
  }
  return reduce(raw);
}

Word::Word(std::span<const Letter> raw) : Word(reduce(raw)) {}
Word::Word(std::initializer_list<Letter> raw)
    : Word(reduce(std::span<const Letter>(raw.begin(), raw.size()))) {}

Word Word::inverse() const {
  std::vector<Letter> out(letters_.rbegin(), letters_.rend());
  for (auto& x : out) x = -x;
  return Word(Trusted{}, std::move(out));
}

Word operator*(const Word& lhs, const Word& rhs) {
  std::size_t cancel = 0;
  const std::size_t limit = std::min(lhs.size(), rhs.size());
  while (cancel < limit && lhs.letters_[lhs.size() - 1 - cancel] == -rhs.letters_[cancel]) ++cancel;
  std::vector<Letter> out;
  out.reserve(lhs.size() + rhs.size() - 2 * cancel);
  out.insert(out.end(), lhs.letters_.begin(), lhs.letters_.end() - static_cast<std::ptrdiff_t>(cancel));
  out.insert(out.end(), rhs.letters_.begin() + static_cast<std::ptrdiff_t>(cancel), rhs.letters_.end());
  return Word(Word::Trusted{}, std::move(out));
}

Word Word::pow(int k) const {
  if (k < 0) return inverse().pow(-k);
  if (k == 0 || empty()) return {};
  const ConjClass c = cyclic_reduce(*this);
  // g^k = w c^k w^{-1}; c^k is reduced because c is cyclically reduced.
  const Word core = c.conjugator.inverse() * *this * c.conjugator;
  std::vector<Letter> body;
  body.reserve(core.size() * static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) body.insert(body.end(), core.letters_.begin(), core.letters_.end());
  return c.conjugator * Word(Trusted{}, std::move(body)) * c.conjugator.inverse();
}

Word Word::subword(std::size_t pos, std::size_t len) const {
  return Word(Trusted{}, std::vector<Letter>(letters_.begin() + static_cast<std::ptrdiff_t>(pos),
                                             letters_.begin() + static_cast<std::ptrdiff_t>(pos + len)));
}

Word Word::rotated(std::size_t i) const {
  if (empty()) return {};
  i %= size();
  std::vector<Letter> out;
  out.reserve(size());
  out.insert(out.end(), letters_.begin() + static_cast<std::ptrdiff_t>(i), letters_.end());
  out.insert(out.end(), letters_.begin(), letters_.begin() + static_cast<std::ptrdiff_t>(i));
  return Word(out);
}

std::strong_ordering Word::operator<=>(const Word& other) const noexcept {
  if (auto c = size() <=> other.size(); c != 0) return c;
  for (std::size_t i = 0; i < size(); ++i) {
    if (auto c = letter_key(letters_[i]) <=> letter_key(other.letters_[i]); c != 0) return c;
  }
  return std::strong_ordering::equal;
}

std::string Word::str() const {
  if (empty()) return "e";
  std::string out;
  out.reserve(size());
  for (Letter x : letters_) {
    const int g = x < 0 ? -x : x;
    if (g > 26) throw InputError("cannot print generator index > 26");
    const char base = x < 0 ? 'A' : 'a';
    out.push_back(static_cast<char>(base + g - 1));
  }
  return out;
}

Word Word::parse(std::string_view text) {
  std::vector<Letter> raw;
  if (text == "e" || text == "1" || text.empty()) return {};
  for (char ch : text) {
    if (ch == ' ' || ch == '.' || ch == '*') continue;
    if (std::islower(static_cast<unsigned char>(ch)) != 0)
      raw.push_back(ch - 'a' + 1);
    else if (std::isupper(static_cast<unsigned char>(ch)) != 0)
      raw.push_back(-(ch - 'A' + 1));
    else
      throw InputError(std::string("invalid character '") + ch + "' in word \"" + std::string(text) + "\"");
  }
  return reduce(raw);
}

Word Word::parse(std::string_view text, const Alphabet& alphabet) {
  const Word w = parse(text);
  for (Letter x : w.letters()) {
    if (!alphabet.valid(x))
      throw InputError("word \"" + std::string(text) + "\" uses a generator outside rank " +
                       std::to_string(alphabet.rank()));
  }
  return w;
}

std::pair<Word, std::size_t> minimal_rotation(const Word& cyclic) {
  const std::size_t n = cyclic.size();
  if (n <= 1) return {cyclic, 0};
  // Booth-style scan is overkill at these lengths; compare rotations directly.
  std::size_t best = 0;
  const auto& s = cyclic.letters();
  for (std::size_t i = 1; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const int a = letter_key(s[(i + j) % n]);
      const int b = letter_key(s[(best + j) % n]);
      if (a != b) {
        if (a < b) best = i;
        break;
      }
    }
  }
  return {cyclic.rotated(best), best};
}

ConjClass cyclic_reduce(const Word& g) {
  const auto& s = g.letters();
  std::size_t lo = 0;
  std::size_t hi = s.size();
  while (hi - lo >= 2 && s[lo] == -s[hi - 1]) {
    ++lo;
    --hi;
  }
  const Word peel = g.subword(0, lo);
  const Word core = g.subword(lo, hi - lo);
  auto [rep, shift] = minimal_rotation(core);
  return {rep, peel * core.subword(0, shift)};
}

namespace {

// Depth-first generation of cyclically reduced necklaces. A word is kept only
// while it is a prenecklace (w[i] >= w[i - p] in key order, p the length of
// the longest Lyndon prefix), which every necklace prefix satisfies.
struct NecklaceWalker {
  int letters;
  int length;
  std::vector<int> keys;
  const std::function<void(const Word&)>* visit;

  void emit() {
    std::vector<Letter> w(keys.size());
    for (std::size_t i = 0; i < keys.size(); ++i) w[i] = letter_from_key(keys[i]);
    (*visit)(reduce(w));
  }

  void step(int pos, int period) {
    if (pos == length) {
      if (length % period != 0) return;
      const int first = keys.front();
      const int last = keys.back();
      if (length > 1 && (first ^ 1) == last) return;
      emit();
      return;
    }
    const int floor = keys[pos - period];
    for (int k = floor; k < letters; ++k) {
      if ((keys[pos - 1] ^ 1) == k) continue;
      keys[pos] = k;
      step(pos + 1, k == floor ? period : pos + 1);
    }
  }
};

}  // namespace

void for_each_conj_class(const Alphabet& alphabet, int max_length,
                         const std::function<void(const Word&)>& visit) {
  if (max_length < 1) throw InputError("max_length must be >= 1");
  NecklaceWalker walker{alphabet.letter_count(), 0, {}, &visit};
  for (int n = 1; n <= max_length; ++n) {
    walker.length = n;
    walker.keys.assign(static_cast<std::size_t>(n), 0);
    for (int k = 0; k < walker.letters; ++k) {
      walker.keys[0] = k;
      walker.step(1, 1);
    }
  }
}

std::vector<ConjClass> enumerate_conj_classes(const Alphabet& alphabet, int max_length, std::size_t cap) {
  std::vector<ConjClass> out;
  for_each_conj_class(alphabet, max_length, [&](const Word& w) {
    if (out.size() >= cap)
      throw ResourceError("conjugacy class enumeration exceeded cap of " + std::to_string(cap));
    out.push_back({w, {}});
  });
  return out;
}

std::size_t ball_size(const Alphabet& alphabet, int radius) {
  std::size_t total = 1;
  std::size_t sphere = static_cast<std::size_t>(alphabet.letter_count());
  for (int n = 1; n <= radius; ++n) {
    total += sphere;
    sphere *= static_cast<std::size_t>(alphabet.letter_count() - 1);
  }
  return total;
}

void for_each_ball_element(const Alphabet& alphabet, int radius,
                           const std::function<void(const Word&)>& visit) {
  visit(Word{});
  const auto letters = alphabet.letters();
  std::vector<Letter> buf;
  for (int n = 1; n <= radius; ++n) {
    buf.assign(static_cast<std::size_t>(n), 0);
    auto rec = [&](auto&& self, int pos) -> void {
      if (pos == n) {
        visit(reduce(buf));
        return;
      }
      for (Letter x : letters) {
        if (pos > 0 && buf[pos - 1] == -x) continue;
        buf[pos] = x;
        self(self, pos + 1);
      }
    };
    rec(rec, 0);
  }
}

GeneratingSet::GeneratingSet(std::vector<Generator> elements) : elements_(std::move(elements)) {
  for (const auto& g : elements_) {
    if (!(g.weight > 0.0)) throw InputError("generating set weights must be > 0");
  }
}

GeneratingSet GeneratingSet::standard(const Alphabet& alphabet, std::span<const double> weights) {
  if (!weights.empty() && static_cast<int>(weights.size()) != alphabet.rank())
    throw InputError("expected one weight per generator");
  std::vector<Generator> out;
  for (Letter x : alphabet.letters()) {
    const double w = weights.empty() ? 1.0 : weights[static_cast<std::size_t>(std::abs(x) - 1)];
    out.push_back({Word::generator(x), w});
  }
  return GeneratingSet(std::move(out));
}

GeneratingSet GeneratingSet::unit(std::span<const Word> words) {
  std::vector<Generator> out;
  for (const auto& w : words) out.push_back({w, 1.0});
  return GeneratingSet(std::move(out));
}

bool GeneratingSet::symmetric() const {
  for (const auto& g : elements_) {
    const Word inv = g.word.inverse();
    const bool found = std::any_of(elements_.begin(), elements_.end(), [&](const Generator& h) {
      return h.word == inv && h.weight == g.weight;
    });
    if (!found) return false;
  }
  return true;
}

bool GeneratingSet::is_standard(int rank) const {
  if (elements_.size() != static_cast<std::size_t>(2 * rank)) return false;
  std::vector<double> w(static_cast<std::size_t>(2 * rank), -1.0);
  for (const auto& g : elements_) {
    if (g.word.size() != 1) return false;
    const Letter x = g.word.front();
    if (std::abs(x) > rank) return false;
    auto& slot = w[static_cast<std::size_t>(letter_key(x))];
    if (slot >= 0.0) return false;
    slot = g.weight;
  }
  for (int i = 0; i < rank; ++i) {
    if (w[static_cast<std::size_t>(2 * i)] != w[static_cast<std::size_t>(2 * i + 1)]) return false;
  }
  return true;
}

std::vector<double> GeneratingSet::standard_weights(int rank) const {
  std::vector<double> w(static_cast<std::size_t>(rank), 0.0);
  for (const auto& g : elements_) w[static_cast<std::size_t>(std::abs(g.word.front()) - 1)] = g.weight;
  return w;
}

std::vector<int> letter_counts(const Word& w, int rank) {
  std::vector<int> out(static_cast<std::size_t>(rank), 0);
  for (Letter x : w.letters()) ++out[static_cast<std::size_t>(std::abs(x) - 1)];
  return out;
}

std::vector<int> exponent_sums(const Word& w, int rank) {
  std::vector<int> out(static_cast<std::size_t>(rank), 0);
  for (Letter x : w.letters()) out[static_cast<std::size_t>(std::abs(x) - 1)] += x > 0 ? 1 : -1;
  return out;
}

double weighted_length(const Word& w, std::span<const double> weights) {
  double total = 0.0;
  for (Letter x : w.letters()) total += weights[static_cast<std::size_t>(std::abs(x) - 1)];
  return total;
}

}  // namespace lenspec
