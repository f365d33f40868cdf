#include "lenspec/word_metric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "lenspec/errors.hpp"
#include "lenspec/lp.hpp"

namespace lenspec {

namespace {

// Dijkstra over group elements reachable by right multiplication by S.
class UniformCostSearch {
 public:
  UniformCostSearch(const GeneratingSet& S, double radius) : S_(S), radius_(radius) {
    push(Word{}, 0.0, npos, 0);
  }

  // Settles the next element; false once the frontier is exhausted or the
  // next cost exceeds the radius.
  bool settle_next(std::size_t& settled_id) {
    while (!queue_.empty()) {
      auto [cost, id] = queue_.top();
      queue_.pop();
      Node& node = nodes_[id];
      if (node.settled || cost > node.cost) continue;
      if (cost > radius_) {
        exhausted_radius_ = true;
        return false;
      }
      node.settled = true;
      ++settled_count_;
      expand(id);
      settled_id = id;
      return true;
    }
    return false;
  }

  const Word& word(std::size_t id) const { return nodes_[id].word; }
  double cost(std::size_t id) const { return nodes_[id].cost; }
  std::size_t settled_count() const { return settled_count_; }
  bool exhausted_radius() const { return exhausted_radius_; }

  std::vector<std::size_t> path(std::size_t id) const {
    std::vector<std::size_t> out;
    while (nodes_[id].parent != npos) {
      out.push_back(nodes_[id].via);
      id = nodes_[id].parent;
    }
    std::reverse(out.begin(), out.end());
    return out;
  }

 private:
  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

  struct Node {
    Word word;
    double cost;
    std::size_t parent;
    std::size_t via;
    bool settled = false;
  };

  void push(Word w, double cost, std::size_t parent, std::size_t via) {
    auto it = index_.find(w);
    if (it == index_.end()) {
      const std::size_t id = nodes_.size();
      index_.emplace(w, id);
      nodes_.push_back({std::move(w), cost, parent, via});
      queue_.push({cost, id});
      return;
    }
    Node& node = nodes_[it->second];
    if (!node.settled && cost < node.cost) {
      node.cost = cost;
      node.parent = parent;
      node.via = via;
      queue_.push({cost, it->second});
    }
  }

  void expand(std::size_t id) {
    const Word base = nodes_[id].word;
    const double c = nodes_[id].cost;
    for (std::size_t i = 0; i < S_.size(); ++i) {
      const auto& g = S_.elements()[i];
      push(base * g.word, c + g.weight, id, i);
    }
  }

  using Entry = std::pair<double, std::size_t>;
  const GeneratingSet& S_;
  double radius_;
  std::vector<Node> nodes_;
  std::unordered_map<Word, std::size_t> index_;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue_;
  std::size_t settled_count_ = 0;
  bool exhausted_radius_ = false;
};

void validate(const GeneratingSet& S, const Alphabet& alphabet) {
  if (S.size() == 0) throw InputError("generating set is empty");
  for (const auto& g : S.elements()) {
    for (Letter x : g.word.letters()) {
      if (!alphabet.valid(x)) throw InputError("generating set element " + g.word.str() + " outside alphabet");
    }
  }
}

}  // namespace

WordMetric::WordMetric(Alphabet alphabet, GeneratingSet S, SearchLimits limits)
    : alphabet_(alphabet), S_(std::move(S)), limits_(limits) {
  validate(S_, alphabet_);
  UniformCostSearch search(S_, limits_.radius);
  std::size_t id = 0;
  while (search.settled_count() < limits_.macro_nodes && search.settle_next(id)) {
    const Word& w = search.word(id);
    if (w.empty()) continue;
    macros_.emplace(w, search.cost(id));
    macro_max_len_ = std::max(macro_max_len_, w.size());
  }
  const std::size_t L = 2 * static_cast<std::size_t>(alphabet_.rank());
  for (Trie* t : {&macro_trie_, &tile_trie_}) {
    t->next.assign(L, -1);
    t->cost.assign(1, std::numeric_limits<double>::infinity());
  }
  for (const auto& [w, cost] : macros_) insert(macro_trie_, w, 0, cost, false);
  for (const auto& g : S_.elements())
    for (std::size_t i = 0; i < g.word.size(); ++i) insert(tile_trie_, g.word, i, g.weight, true);
}

std::size_t WordMetric::letter_index(Letter x) const {
  return x > 0 ? 2 * static_cast<std::size_t>(x - 1) : 2 * static_cast<std::size_t>(-x - 1) + 1;
}

void WordMetric::insert(Trie& t, const Word& w, std::size_t from, double cost, bool every_prefix) const {
  const std::size_t L = 2 * static_cast<std::size_t>(alphabet_.rank());
  std::size_t node = 0;
  for (std::size_t i = from; i < w.size(); ++i) {
    std::int32_t& child = t.next[node * L + letter_index(w[i])];
    if (child < 0) {
      child = static_cast<std::int32_t>(t.cost.size());
      t.cost.push_back(std::numeric_limits<double>::infinity());
      t.next.resize(t.next.size() + L, -1);
    }
    node = static_cast<std::size_t>(t.next[node * L + letter_index(w[i])]);
    if (every_prefix) t.cost[node] = std::min(t.cost[node], cost);
  }
  if (!every_prefix) t.cost[node] = std::min(t.cost[node], cost);
  t.depth = std::max(t.depth, w.size() - from);
}

// Least cost per period of a closed tiling of the periodic word c^oo that
// winds at most `windings` times. A minimum-ratio cycle is simple, so it winds
// at most depth times; passing windings >= depth gives the exact minimum.
double WordMetric::cycle_ratio(const Trie& t, const Word& c, std::size_t windings, bool round_up) const {
  constexpr double inf = std::numeric_limits<double>::infinity();
  const std::size_t n = c.size(), L = 2 * static_cast<std::size_t>(alphabet_.rank());
  const std::size_t total = windings * n;
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = letter_index(c[i]);
  std::vector<double> dp(total + 1);
  double best = inf;
  for (std::size_t start = 0; start < n; ++start) {
    std::fill(dp.begin(), dp.end(), inf);
    dp[0] = 0.0;
    for (std::size_t p = 0; p < total; ++p) {
      if (dp[p] == inf) continue;
      std::size_t node = 0;
      for (std::size_t q = p; q < total; ++q) {
        const std::int32_t child = t.next[node * L + idx[(start + q) % n]];
        if (child < 0) break;
        node = static_cast<std::size_t>(child);
        if (t.cost[node] < inf) dp[q + 1] = std::min(dp[q + 1], dp[p] + t.cost[node]);
      }
    }
    for (std::size_t j = 1; j <= windings; ++j) {
      const double total_cost = dp[j * n];
      if (total_cost == inf) continue;
      const double k = static_cast<double>(j);
      double q = total_cost / k;
      const double err = std::fma(q, k, -total_cost);
      if (round_up && err < 0.0) q = std::nextafter(q, inf);
      if (!round_up && err > 0.0) q = std::nextafter(q, 0.0);
      best = std::min(best, q);
    }
  }
  return best;
}

GenerationWitness WordMetric::shortest_path(const Word& g) const {
  UniformCostSearch search(S_, limits_.radius);
  std::size_t id = 0;
  while (search.settle_next(id)) {
    if (search.word(id) == g) return {g, true, search.cost(id), search.path(id)};
    if (search.settled_count() >= limits_.node_cap)
      throw ResourceError("word-length search for " + g.str() + " exceeded node cap of " +
                          std::to_string(limits_.node_cap));
  }
  throw SearchExhausted("word " + g.str() + " not reached within radius " + std::to_string(limits_.radius));
}

double WordMetric::length(const Word& g) const {
  if (g.empty()) return 0.0;
  if (auto it = macros_.find(g); it != macros_.end()) return it->second;
  return shortest_path(g).cost;
}

std::unordered_map<Word, double> WordMetric::ball(double max_cost) const {
  UniformCostSearch search(S_, std::min(max_cost, limits_.radius));
  std::unordered_map<Word, double> out;
  std::size_t id = 0;
  while (search.settle_next(id)) {
    out.emplace(search.word(id), search.cost(id));
    if (search.settled_count() >= limits_.node_cap)
      throw ResourceError("word-metric ball exceeded node cap of " + std::to_string(limits_.node_cap));
  }
  return out;
}

std::unordered_map<Word, double> WordMetric::lengths(const std::vector<Word>& targets) const {
  std::unordered_map<Word, double> out;
  std::unordered_map<Word, bool> pending;
  for (const auto& t : targets) pending.emplace(t, true);
  std::size_t remaining = pending.size();
  UniformCostSearch search(S_, limits_.radius);
  std::size_t id = 0;
  while (remaining > 0 && search.settle_next(id)) {
    auto it = pending.find(search.word(id));
    if (it != pending.end() && it->second) {
      it->second = false;
      out.emplace(search.word(id), search.cost(id));
      --remaining;
    }
    if (search.settled_count() >= limits_.node_cap)
      throw ResourceError("word-length search exceeded node cap of " + std::to_string(limits_.node_cap));
  }
  if (remaining > 0)
    throw SearchExhausted(std::to_string(remaining) + " targets not reached within radius " +
                          std::to_string(limits_.radius));
  return out;
}

double WordMetric::concatenation_bound(const Word& h) const {
  const std::size_t n = h.size();
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> best(n + 1, inf);
  best[0] = 0.0;
  for (std::size_t j = 1; j <= n; ++j) {
    const std::size_t max_len = std::min(j, macro_max_len_);
    for (std::size_t len = 1; len <= max_len; ++len) {
      if (best[j - len] == inf) continue;
      auto it = macros_.find(h.subword(j - len, len));
      if (it != macros_.end()) best[j] = std::min(best[j], best[j - len] + it->second);
    }
  }
  return best[n];
}

double WordMetric::standard_lipschitz() const {
  double lip = 0.0;
  for (const auto& g : S_.elements()) lip = std::max(lip, static_cast<double>(g.word.size()) / g.weight);
  return lip;
}

namespace {

// The LP optimum is rational with small denominators. Snap the floating
// solution to a grid, check feasibility in integer arithmetic, and round the
// objective down. Returns 0 when the snapped point is not feasible.
double rational_lower_bound(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, const Eigen::VectorXd& obj,
                            const Eigen::VectorXd& x) {
  constexpr long long D = 27720;  // lcm(1..12)
  std::vector<long long> X(static_cast<std::size_t>(x.size()));
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double v = std::round(std::max(0.0, x(i)) * D);
    if (!(v < 1e12)) return 0.0;
    X[static_cast<std::size_t>(i)] = static_cast<long long>(v);
  }
  for (Eigen::Index row = 0; row < A.rows(); ++row) {
    const double bd = b(row) * D;
    if (bd != std::round(bd) || !(bd < 1e15)) return 0.0;
    long long lhs = 0;
    for (Eigen::Index i = 0; i < A.cols(); ++i) lhs += static_cast<long long>(A(row, i)) * X[static_cast<std::size_t>(i)];
    if (lhs > static_cast<long long>(bd)) return 0.0;
  }
  long long num = 0;
  for (Eigen::Index i = 0; i < obj.size(); ++i) num += static_cast<long long>(obj(i)) * X[static_cast<std::size_t>(i)];
  if (num <= 0) return 0.0;
  double q = static_cast<double>(num) / static_cast<double>(D);
  if (std::fma(q, static_cast<double>(D), -static_cast<double>(num)) > 0.0) q = std::nextafter(q, 0.0);
  return q;
}

}  // namespace

LengthBracket WordMetric::stable_length(const Word& g, int k_max) const {
  const Word c = cyclic_reduce(g).rep;
  if (c.empty()) return LengthBracket::point(0.0);
  const int r = alphabet_.rank();

  if (S_.is_standard(r)) {
    const auto w = S_.standard_weights(r);
    return LengthBracket::point(weighted_length(c, w));
  }

  const double tiles = cycle_ratio(tile_trie_, c, tile_trie_.depth, false);
  double hi = cycle_ratio(macro_trie_, c, 1, true);
  if (tiles >= hi) return LengthBracket::point(hi);
  const std::size_t windings = std::min(macro_trie_.depth, static_cast<std::size_t>(std::max(1, k_max)));
  if (windings > 1) hi = std::min(hi, cycle_ratio(macro_trie_, c, windings, true));
  if (tiles >= hi) return LengthBracket::point(hi);

  // Variables: tree weights u_i >= 0, homomorphism coefficients p_i - q_i.
  const auto m = static_cast<Eigen::Index>(S_.size());
  Eigen::MatrixXd A(m, 3 * r);
  Eigen::VectorXd b(m);
  for (Eigen::Index row = 0; row < m; ++row) {
    const auto& s = S_.elements()[static_cast<std::size_t>(row)];
    const auto cnt = letter_counts(s.word, r);
    const auto exp = exponent_sums(s.word, r);
    for (int i = 0; i < r; ++i) {
      A(row, i) = cnt[static_cast<std::size_t>(i)];
      A(row, r + i) = exp[static_cast<std::size_t>(i)];
      A(row, 2 * r + i) = -exp[static_cast<std::size_t>(i)];
    }
    b(row) = s.weight;
  }
  Eigen::VectorXd obj(3 * r);
  const auto cnt = letter_counts(c, r);
  const auto exp = exponent_sums(c, r);
  for (int i = 0; i < r; ++i) {
    obj(i) = cnt[static_cast<std::size_t>(i)];
    obj(r + i) = exp[static_cast<std::size_t>(i)];
    obj(2 * r + i) = -exp[static_cast<std::size_t>(i)];
  }
  const auto sol = detail::maximize(A, b, obj);
  if (!sol) throw InputError("generating set does not generate the group as a semigroup (unbounded length)");
  // Pull the solution back inside the feasible region before trusting it.
  Eigen::VectorXd x = sol->x.cwiseMax(0.0);
  double worst = 1.0;
  const Eigen::VectorXd lhs = A * x;
  for (Eigen::Index row = 0; row < m; ++row) worst = std::max(worst, lhs(row) / b(row));
  x /= worst;
  double lo = std::max(0.0, obj.dot(x));
  lo = std::max(0.0, lo - 1e-12 * (1.0 + lo));
  lo = std::max({lo, rational_lower_bound(A, b, obj, sol->x), tiles});
  if (lo > hi) lo = hi;
  return {lo, hi, lo == hi};
}

double WordMetric::stable_floor(const Word& g) const {
  const Word c = cyclic_reduce(g).rep;
  if (c.empty()) return 0.0;
  if (S_.is_standard(alphabet_.rank())) return weighted_length(c, S_.standard_weights(alphabet_.rank()));
  return cycle_ratio(tile_trie_, c, tile_trie_.depth, false);
}

GenerationCheck check_semigroup_generation(const GeneratingSet& S, const Alphabet& alphabet,
                                           SearchLimits limits) {
  validate(S, alphabet);
  GenerationCheck out;
  out.generates = true;
  for (Letter x : alphabet.letters()) {
    const Word target = Word::generator(x);
    UniformCostSearch search(S, limits.radius);
    GenerationWitness witness{target, false, 0.0, {}};
    std::size_t id = 0;
    while (search.settle_next(id)) {
      if (search.word(id) == target) {
        witness = {target, true, search.cost(id), search.path(id)};
        break;
      }
      if (search.settled_count() >= limits.node_cap) break;
    }
    if (!witness.reached) {
      out.generates = false;
      out.inconclusive = true;
      if (!out.first_unreached) out.first_unreached = target;
    }
    out.witnesses.push_back(std::move(witness));
  }
  return out;
}

double word_length(const Word& g, const GeneratingSet& S, const Alphabet& alphabet, SearchLimits limits) {
  return WordMetric(alphabet, S, limits).length(g);
}

}  // namespace lenspec
