#include "lenspec/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "lenspec/anosov.hpp"
#include "lenspec/errors.hpp"
#include "lenspec/spaces.hpp"

namespace lenspec {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<Word> standard_letters(int rank) {
  std::vector<Word> out;
  for (Letter x : Alphabet(rank).letters()) out.push_back(Word::generator(x));
  return out;
}

// Running window statistics.
struct WindowAccumulator {
  WindowResult r;
  std::size_t row_limit = 0;
  bool any = false;

  void add(const Word& rep, const LengthBracket& ell_x, const LengthBracket& ell_star) {
    const LengthBracket ratio{ell_star.lo / ell_x.hi, ell_star.hi / ell_x.lo, ell_star.exact && ell_x.exact};
    const bool straddles = ell_x.hi > r.L;
    ++r.members;
    if (straddles) ++r.straddling;
    if (!any) {
      r.sup = ratio;
      r.inf = ratio;
      r.argmax = rep;
      any = true;
    } else {
      if (ratio.hi > r.sup.hi || (ratio.hi == r.sup.hi && ratio.lo > r.sup.lo)) r.argmax = rep;
      r.sup = {std::max(r.sup.lo, ratio.lo), std::max(r.sup.hi, ratio.hi), r.sup.exact && ratio.exact};
      r.inf = {std::min(r.inf.lo, ratio.lo), std::min(r.inf.hi, ratio.hi), r.inf.exact && ratio.exact};
    }
    if (r.rows.size() < row_limit) r.rows.push_back({rep, ell_x, ell_star, ratio, straddles});
  }

  WindowResult finish() {
    if (r.sup.exact && r.sup.lo != r.sup.hi) r.sup.exact = false;
    if (r.inf.exact && r.inf.lo != r.inf.hi) r.inf.exact = false;
    return std::move(r);
  }
};

// One pass over the given classes feeding every window.
template <typename ForEachClass>
std::vector<WindowResult> accumulate(const ActionModel& Astar, const ActionModel& A, const std::vector<double>& Ls,
                                     const WindowOptions& opts, ForEachClass&& for_each) {
  std::vector<WindowAccumulator> acc(Ls.size());
  for (std::size_t i = 0; i < Ls.size(); ++i) {
    acc[i].r.L = Ls[i];
    acc[i].row_limit = opts.row_limit;
  }
  const double L_max = Ls.empty() ? 0.0 : *std::max_element(Ls.begin(), Ls.end());
  std::size_t classes = 0, zero = 0;
  for_each([&](const Word& rep) {
    ++classes;
    const LengthBracket ell_x = stable_length(A, rep, opts.bracket);
    if (ell_x.lo < opts.epsilon) {
      ++zero;
      return;
    }
    if (ell_x.lo > L_max) return;
    const LengthBracket ell_star = stable_length(Astar, rep, opts.bracket);
    for (auto& a : acc)
      if (ell_x.lo <= a.r.L) a.add(rep, ell_x, ell_star);
  });
  std::vector<WindowResult> out;
  for (auto& a : acc) {
    a.r.classes = classes;
    a.r.excluded_zero = zero;
    out.push_back(a.finish());
  }
  return out;
}

double rate_radius(const ActionModel& A, double L) {
  if (!A.std_rate || !(*A.std_rate > 0.0)) return kInf;
  return L / *A.std_rate;
}

LengthBracket jsl_upper(const ActionModel& A, const std::vector<Word>& S, const VerifyConfig& cfg, bool& certified) {
  JslOptions o;
  o.n_max = cfg.reference_n_max;
  o.frontier_cap = cfg.frontier_cap;
  const auto r = joint_stable_length(A, S, o);
  certified = r.certified;
  return r.bracket;
}

void push_window_values(DilationReport& rep, const WindowResult& w, const std::string& prefix = "") {
  rep.values.emplace_back(prefix + "radius", w.radius);
  rep.values.emplace_back(prefix + "required_radius", w.required_radius);
  rep.values.emplace_back(prefix + "classes", static_cast<double>(w.classes));
  rep.values.emplace_back(prefix + "members", static_cast<double>(w.members));
  rep.values.emplace_back(prefix + "excluded_zero", static_cast<double>(w.excluded_zero));
  rep.values.emplace_back(prefix + "straddling", static_cast<double>(w.straddling));
}

std::vector<double> with_reference(const std::vector<double>& Ls, double factor) {
  std::vector<double> all = Ls;
  for (double L : Ls) all.push_back(factor * L);
  return all;
}

void check_reference(DilationReport& rep, double tol) {
  if (rep.reference.lo > rep.reference.hi + tol * (1.0 + std::abs(rep.reference.hi)))
    rep.notes.push_back("reference window lower bound exceeds the certified upper bound");
}

}  // namespace

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::holds: return "holds";
    case Verdict::violated: return "violated";
    case Verdict::inconclusive: return "inconclusive";
    case Verdict::hypothesis_failed: return "hypothesis-failed";
  }
  return "inconclusive";
}

Verdict verdict_from_string(const std::string& s) {
  if (s == "holds") return Verdict::holds;
  if (s == "violated") return Verdict::violated;
  if (s == "inconclusive") return Verdict::inconclusive;
  if (s == "hypothesis-failed") return Verdict::hypothesis_failed;
  throw InputError("unknown verdict '" + s + "'");
}

std::optional<double> DilationReport::value(const std::string& key) const {
  for (const auto& [k, v] : values)
    if (k == key) return v;
  return std::nullopt;
}

std::vector<WindowResult> dilation_windows(const ActionModel& Astar, const ActionModel& A,
                                           const std::vector<double>& Ls, WindowOptions opts) {
  if (Astar.rank != A.rank) throw InputError("models act by groups of different rank");
  for (double L : Ls)
    if (!(L > 0.0)) throw InputError("window L must be positive");
  double needed = 0.0;
  for (double L : Ls) needed = std::max(needed, rate_radius(A, L));
  const int radius = std::max(1, static_cast<int>(std::min<double>(opts.radius_cap, std::floor(needed + 1e-9))));
  const Alphabet alphabet(A.rank);
  auto out = accumulate(Astar, A, Ls, opts, [&](auto&& visit) { for_each_conj_class(alphabet, radius, visit); });
  for (auto& w : out) {
    w.radius = radius;
    w.required_radius = rate_radius(A, w.L);
    w.covered = A.std_rate_certified && std::floor(w.required_radius + 1e-9) <= radius;
  }
  return out;
}

WindowResult dilation_window(const ActionModel& Astar, const ActionModel& A, double L, WindowOptions opts) {
  return dilation_windows(Astar, A, {L}, opts).front();
}

WindowResult dilation_window(const ActionModel& Astar, const ActionModel& A, const std::vector<ConjClass>& classes,
                             double L, WindowOptions opts) {
  auto out = accumulate(Astar, A, {L}, opts, [&](auto&& visit) {
    for (const auto& c : classes) visit(c.rep);
  });
  out.front().covered = false;
  return out.front();
}

Verdict decide(const LengthBracket& reference, double bound_at_lo, double bound_at_hi, bool covered, double tol) {
  if (reference.hi <= bound_at_lo + tol) return Verdict::holds;
  if (covered && reference.lo > bound_at_hi + tol) return Verdict::violated;
  return Verdict::inconclusive;
}

double thm13_bound(double window_sup, double L, double D, double delta, double K, Thm13Variant variant) {
  if (!(L > 6.0 * D)) throw PreconditionError("bound needs L > 6D (L = " + std::to_string(L) + ", D = " + std::to_string(D) + ")");
  const double den = L - 6.0 * D;
  if (variant == Thm13Variant::cor17) return window_sup * L / den + 2.0 * K * std::log(4.0) / den;
  return window_sup * (L - 2.0 * D) / den + 2.0 * K * delta / den;
}

std::vector<DilationReport> thm13_verify(const ActionModel& Astar, const ActionModel& A, const Thm13Config& cfg) {
  const double D = cfg.D ? *cfg.D : (A.cobound ? *A.cobound : -1.0);
  if (D < 0.0) throw InputError("thm13 needs the coboundedness constant D of X");
  const double delta = cfg.delta ? *cfg.delta : Astar.delta;
  for (double L : cfg.Ls) thm13_bound(0.0, L, D, delta, cfg.K, cfg.variant);

  const auto windows = dilation_windows(Astar, A, with_reference(cfg.Ls, cfg.reference_factor), cfg.window);
  bool jsl_certified = true;
  const auto dstar = jsl_upper(Astar, standard_letters(A.rank), cfg, jsl_certified);
  const double ref_hi = A.std_rate ? dstar.hi / *A.std_rate : kInf;

  const double coef_num_shift = cfg.variant == Thm13Variant::cor17 ? 0.0 : 2.0 * D;
  const double additive_delta = cfg.variant == Thm13Variant::cor17 ? std::log(4.0) : delta;

  std::vector<DilationReport> out;
  for (std::size_t i = 0; i < cfg.Ls.size(); ++i) {
    const double L = cfg.Ls[i];
    const WindowResult& w = windows[i];
    const WindowResult& ref = windows[cfg.Ls.size() + i];
    DilationReport rep;
    rep.verifier = cfg.variant == Thm13Variant::cor17 ? "cor17" : "thm13";
    rep.window_L = L;
    rep.window_sup = w.sup;
    rep.bound_value = thm13_bound(w.sup.hi, L, D, delta, cfg.K, cfg.variant);
    rep.bound_at_lo = thm13_bound(w.sup.lo, L, D, delta, cfg.K, cfg.variant);
    rep.reference = {ref.sup.lo, std::max(ref.sup.lo, ref_hi), false};
    if (ref_hi < ref.sup.lo) rep.reference.hi = ref_hi;
    rep.covered = w.covered;
    rep.verdict = decide(rep.reference, rep.bound_at_lo, rep.bound_value, w.covered, cfg.tol);
    rep.diagnostics = w.rows;

    const double den = L - 6.0 * D;
    const double coef = (L - coef_num_shift) / den;
    double min_K = 0.0;
    const double excess = rep.reference.hi - w.sup.lo * coef;
    if (excess > cfg.tol) min_K = additive_delta > 0.0 ? excess * den / (2.0 * additive_delta) : kInf;
    rep.values = {{"L", L}, {"D", D}, {"delta", additive_delta}, {"K", cfg.K}, {"coefficient", coef},
                  {"minimal_K", min_K}, {"reference_L", cfg.reference_factor * L}};
    push_window_values(rep, w);
    rep.values.emplace_back("reference_radius", ref.radius);
    rep.values.emplace_back("reference_jsl_hi", dstar.hi);
    if (!w.covered) rep.notes.push_back("test window truncated at radius " + std::to_string(w.radius));
    if (!ref.covered) rep.notes.push_back("reference window truncated at radius " + std::to_string(ref.radius));
    if (!A.std_rate_certified) rep.notes.push_back("comparison rate of X is certified on a ball only");
    if (!jsl_certified) rep.notes.push_back("joint stable length was beam-pruned");
    if (w.argmax) rep.notes.push_back("window sup attained at " + w.argmax->str());
    check_reference(rep, cfg.tol);
    out.push_back(std::move(rep));
  }
  return out;
}

std::vector<DilationReport> thm15_verify(const ActionModel& Astar, const Alphabet& alphabet, const GeneratingSet& S,
                                         const Thm15Config& cfg) {
  if (Astar.rank != alphabet.rank()) throw InputError("X* and S live in groups of different rank");
  for (int L : cfg.Ls)
    if (L < 1) throw PreconditionError("thm15 needs integer L >= 1");
  const auto gen = check_semigroup_generation(S, alphabet);
  if (!gen.generates)
    throw PreconditionError("S is not verified to generate as a semigroup; first unreached generator " +
                            (gen.first_unreached ? gen.first_unreached->str() : std::string("?")));
  const ActionModel X = word_metric_model(alphabet, S, cfg.limits, cfg.stable_k_max);
  const double delta = cfg.delta ? *cfg.delta : Astar.delta;

  std::vector<double> Ls;
  for (int L : cfg.Ls) Ls.push_back(2.0 * L);
  const auto windows = dilation_windows(Astar, X, with_reference(Ls, cfg.reference_factor), cfg.window);

  bool certified = true;
  double ref_hi = kInf;
  bool unit = true;
  std::vector<Word> S_words;
  for (const auto& s : S.elements()) {
    unit = unit && s.weight == 1.0;
    S_words.push_back(s.word);
  }
  if (unit) ref_hi = std::min(ref_hi, jsl_upper(Astar, S_words, cfg, certified).hi);
  if (X.std_rate) {
    bool c2 = true;
    ref_hi = std::min(ref_hi, jsl_upper(Astar, standard_letters(alphabet.rank()), cfg, c2).hi / *X.std_rate);
    certified = certified && c2;
  }

  std::vector<DilationReport> out;
  for (std::size_t i = 0; i < cfg.Ls.size(); ++i) {
    const double L = cfg.Ls[i];
    const WindowResult& w = windows[i];
    const WindowResult& ref = windows[cfg.Ls.size() + i];
    DilationReport rep;
    rep.verifier = "thm15";
    rep.window_L = 2.0 * L;
    rep.window_sup = w.sup;
    rep.bound_value = cfg.K * delta / L + w.sup.hi;
    rep.bound_at_lo = cfg.K * delta / L + w.sup.lo;
    rep.reference = {ref.sup.lo, std::max(ref.sup.lo, ref_hi), ref.sup.exact && ref.sup.lo == ref_hi};
    if (ref_hi < ref.sup.lo) rep.reference.hi = ref_hi;
    rep.covered = w.covered;
    rep.verdict = decide(rep.reference, rep.bound_at_lo, rep.bound_value, w.covered, cfg.tol);
    rep.diagnostics = w.rows;
    double min_K = 0.0;
    const double excess = rep.reference.hi - w.sup.lo;
    if (excess > cfg.tol) min_K = delta > 0.0 ? excess * L / delta : kInf;
    rep.values = {{"L", L}, {"delta", delta}, {"K", cfg.K}, {"minimal_K", min_K}};
    push_window_values(rep, w);
    rep.values.emplace_back("reference_radius", ref.radius);
    if (!w.covered) rep.notes.push_back("test window truncated at radius " + std::to_string(w.radius));
    if (!certified) rep.notes.push_back("joint stable length was beam-pruned");
    if (w.argmax) rep.notes.push_back("window sup attained at " + w.argmax->str());
    check_reference(rep, cfg.tol);
    out.push_back(std::move(rep));
  }
  return out;
}

std::vector<DilationReport> anosov_verify(const LinearRep& rho, const LinearRep& tau, const AnosovConfig& cfg) {
  if (rho.rank() != tau.rank()) throw InputError("rho and tau must represent the same free group");
  const auto constants = cfg.constants ? *cfg.constants : BochiConstants::caps(static_cast<int>(rho.dim()));
  const double shift = constants.d_m * (cfg.alpha + 1.0);
  for (double L : cfg.Ls)
    if (!(L > shift))
      throw PreconditionError("anosov bound needs L > d_m (alpha + 1) = " + std::to_string(shift));
  const auto cert_rho = anosov_certificate(rho, cfg.cert_radius);
  if (!cert_rho.ok)
    throw PreconditionError("rho fails the Anosov certificate at radius " + std::to_string(cfg.cert_radius) +
                            " (mu = " + std::to_string(cert_rho.mu) + ")");
  const auto cert_tau = anosov_certificate(tau, cfg.cert_radius);
  if (!cert_tau.ok)
    throw PreconditionError("tau fails the Anosov certificate at radius " + std::to_string(cfg.cert_radius));

  ActionModel R = linear_model(rho);
  ActionModel T = linear_model(tau);
  T.std_rate = linear_rate(cert_tau, tau.dim());
  T.std_rate_certified = false;

  const auto windows = dilation_windows(R, T, with_reference(cfg.Ls, cfg.reference_factor), cfg.window);
  bool certified = true;
  const double ref_hi = jsl_upper(R, standard_letters(rho.rank()), cfg, certified).hi / *T.std_rate;

  std::vector<DilationReport> out;
  for (std::size_t i = 0; i < cfg.Ls.size(); ++i) {
    const double L = cfg.Ls[i];
    const WindowResult& w = windows[i];
    const WindowResult& ref = windows[cfg.Ls.size() + i];
    auto bound = [&](double eta) { return constants.c_m * constants.d_m / (L - shift) + eta * L / (L - shift); };
    DilationReport rep;
    rep.verifier = "anosov";
    rep.window_L = L;
    rep.window_sup = w.sup;
    rep.bound_value = bound(w.sup.hi);
    rep.bound_at_lo = bound(w.sup.lo);
    rep.reference = {ref.sup.lo, std::max(ref.sup.lo, ref_hi), false};
    rep.covered = w.covered;
    rep.verdict = decide(rep.reference, rep.bound_at_lo, rep.bound_value, w.covered, cfg.tol);
    rep.diagnostics = w.rows;
    rep.values = {{"L", L},
                  {"alpha", cfg.alpha},
                  {"c_m", constants.c_m},
                  {"d_m", constants.d_m},
                  {"c_m_d_m", constants.c_m * constants.d_m},
                  {"eta", w.sup.hi},
                  {"mu_rho", cert_rho.mu},
                  {"mu_tau", cert_tau.mu},
                  {"tau_rate", *T.std_rate}};
    push_window_values(rep, w);
    rep.notes.push_back("comparison rate of tau is certified on a ball of radius " + std::to_string(cfg.cert_radius));
    if (!w.covered) rep.notes.push_back("test window truncated at radius " + std::to_string(w.radius));
    if (!certified) rep.notes.push_back("joint stable length was beam-pruned");
    check_reference(rep, cfg.tol);
    out.push_back(std::move(rep));
  }
  return out;
}

std::vector<DilationReport> cor14_verify(const ActionModel& Astar, const ActionModel& A, const Cor14Config& cfg) {
  const auto windows = dilation_windows(Astar, A, with_reference(cfg.Ls, cfg.reference_factor), cfg.window);
  std::vector<DilationReport> out;
  for (std::size_t i = 0; i < cfg.Ls.size(); ++i) {
    const double L = cfg.Ls[i];
    const WindowResult& w = windows[i];
    const WindowResult& ref = windows[cfg.Ls.size() + i];
    const double alpha = cfg.alpha ? *cfg.alpha : w.inf.lo;
    const double beta = cfg.beta ? *cfg.beta : w.sup.hi;
    DilationReport rep;
    rep.verifier = "cor14";
    rep.window_L = L;
    rep.window_sup = w.sup;
    rep.reference = ref.sup;
    rep.covered = w.covered;
    rep.diagnostics = w.rows;

    const bool hyp_holds = w.inf.lo >= alpha - cfg.tol && w.sup.hi <= beta + cfg.tol;
    const bool hyp_fails = w.inf.hi < alpha - cfg.tol || w.sup.lo > beta + cfg.tol;
    double c0 = 0.0;
    c0 = std::max(c0, (ref.sup.hi - beta) * L / (beta + 1.0));
    c0 = std::max(c0, (alpha - ref.inf.lo) * L / (alpha + 1.0));
    const double used = cfg.C0 ? *cfg.C0 : c0;
    rep.bound_value = beta * (1.0 + used / L) + used / L;
    rep.bound_at_lo = rep.bound_value;
    if (hyp_fails)
      rep.verdict = Verdict::hypothesis_failed;
    else if (!hyp_holds)
      rep.verdict = Verdict::inconclusive;
    else if (!cfg.C0 || *cfg.C0 >= c0 - cfg.tol)
      rep.verdict = Verdict::holds;
    else
      rep.verdict = Verdict::inconclusive;
    rep.values = {{"L", L}, {"alpha", alpha}, {"beta", beta}, {"minimal_C0", c0}, {"lower_bound", alpha * (1.0 - used / L) - used / L}};
    if (cfg.C0) rep.values.emplace_back("C0", *cfg.C0);
    push_window_values(rep, w);
    rep.values.emplace_back("reference_radius", ref.radius);
    if (!ref.covered) rep.notes.push_back("reference window truncated at radius " + std::to_string(ref.radius));
    out.push_back(std::move(rep));
  }
  return out;
}

DilationReport bf_verify(const ActionModel& A, const std::vector<Word>& S, const BfConfig& cfg) {
  JslOptions o;
  o.n_max = cfg.n_max;
  o.frontier_cap = cfg.frontier_cap;
  o.bracket = cfg.window.bracket;
  const auto r = joint_stable_length(A, S, o);
  const double delta = cfg.delta ? *cfg.delta : A.delta;
  DilationReport rep;
  rep.verifier = "bf";
  rep.window_L = cfg.n_max;
  rep.window_sup = r.half_s2;
  rep.reference = r.bracket;
  rep.bound_value = bf_upper(r, delta, cfg.K);
  rep.bound_at_lo = cfg.K * delta + r.half_s2.lo;
  rep.covered = r.certified;
  rep.verdict = decide(r.bracket, rep.bound_at_lo, rep.bound_value, r.certified, cfg.tol);
  if (!bf_lower_check(r, cfg.tol)) rep.verdict = Verdict::violated;
  rep.values = {{"n_max", cfg.n_max},
                {"delta", delta},
                {"K", cfg.K},
                {"minimal_K", bf_minimal_K(r, delta, cfg.tol)},
                {"max_single", r.max_single},
                {"jsl_lo", r.bracket.lo},
                {"jsl_hi", r.bracket.hi},
                {"half_s2_lo", r.half_s2.lo},
                {"half_s2_hi", r.half_s2.hi},
                {"gap", r.bracket.hi - r.half_s2.lo},
                {"peak_frontier", static_cast<double>(r.peak_frontier)},
                {"certified", r.certified ? 1.0 : 0.0}};
  if (!r.certified) rep.notes.push_back("frontier beam-pruned; joint stable length bracket not certified");
  return rep;
}

DilationReport prop31_verify(const ActionModel& A, const Alphabet& alphabet, const GeneratingSet& S,
                             const Prop31Config& cfg) {
  std::vector<Word> words;
  for (const auto& s : S.elements()) {
    if (s.weight != 1.0) throw InputError("prop31 compares against the unweighted word metric; weights must be 1");
    words.push_back(s.word);
  }
  const ActionModel X = word_metric_model(alphabet, S, cfg.limits, cfg.stable_k_max);
  const auto w = dilation_window(A, X, cfg.window_L, cfg.window);
  JslOptions o;
  o.n_max = cfg.n_max;
  o.frontier_cap = cfg.frontier_cap;
  const auto r = joint_stable_length(A, words, o);

  DilationReport rep;
  rep.verifier = "prop31";
  rep.window_L = cfg.window_L;
  rep.window_sup = w.sup;
  rep.reference = r.bracket;
  rep.bound_value = r.bracket.hi;
  rep.bound_at_lo = r.bracket.hi;
  rep.covered = w.covered;
  rep.diagnostics = w.rows;
  if (w.sup.lo > r.bracket.hi + cfg.tol)
    rep.verdict = Verdict::violated;
  else if (w.sup.hi <= r.bracket.hi + cfg.tol)
    rep.verdict = Verdict::holds;
  else
    rep.verdict = Verdict::inconclusive;
  const bool equal = w.sup.lo == w.sup.hi && r.bracket.lo == r.bracket.hi && w.sup.lo == r.bracket.lo;
  rep.values = {{"n_max", cfg.n_max},
                {"dil_lo", w.sup.lo},
                {"dil_hi", w.sup.hi},
                {"jsl_lo", r.bracket.lo},
                {"jsl_hi", r.bracket.hi},
                {"exact_equality", equal ? 1.0 : 0.0}};
  push_window_values(rep, w);
  if (w.argmax) rep.notes.push_back("window sup attained at " + w.argmax->str());
  return rep;
}

Lemma25Result lemma25_check(const ActionModel& A, const Lemma25Config& cfg) {
  int use_case = cfg.use_case ? *cfg.use_case : (A.cobound ? 1 : 2);
  if (use_case != 1 && use_case != 2) throw InputError("lemma25 case must be 1 or 2");
  if (cfg.n < 1) throw InputError("lemma25 needs n >= 1");
  double threshold = 0.0, D = 0.0, alpha = 0.0;
  if (use_case == 1) {
    if (!A.cobound) throw InputError("lemma25 case 1 needs the coboundedness constant D");
    D = *A.cobound;
    threshold = (cfg.n + 2) * D;
  } else {
    if (!A.alpha) throw InputError("lemma25 case 2 needs the rough-geodesicity constant alpha");
    alpha = *A.alpha;
    if (!(cfg.n > alpha + 1.0)) throw PreconditionError("lemma25 case 2 needs n > alpha + 1");
    threshold = cfg.n;
  }

  const Alphabet alphabet(A.rank);
  std::vector<Word> ball;
  std::vector<double> disp;
  for_each_ball_element(alphabet, cfg.ball_radius, [&](const Word& g) {
    ball.push_back(g);
    disp.push_back(displacement(A, g));
  });
  std::vector<Generator> gens;
  for (std::size_t i = 0; i < ball.size(); ++i)
    if (!ball[i].empty() && disp[i] <= threshold) gens.push_back({ball[i], 1.0});
  if (gens.empty()) throw InputError("ball of radius " + std::to_string(cfg.ball_radius) + " contains no element of S_n");
  const bool truncated = !(A.std_rate && threshold / *A.std_rate <= cfg.ball_radius + 1e-9);

  // Breadth-first word lengths over S_n until every ball element is settled.
  std::unordered_map<Word, int> level;
  std::size_t pending = ball.size();
  std::unordered_map<Word, bool> targets;
  for (const auto& g : ball) targets.emplace(g, true);
  std::vector<Word> frontier{Word{}};
  level.emplace(Word{}, 0);
  --pending;
  for (int k = 1; pending > 0 && !frontier.empty(); ++k) {
    std::vector<Word> next;
    for (const auto& w : frontier) {
      for (const auto& s : gens) {
        Word p = w * s.word;
        if (level.emplace(p, k).second) {
          if (targets.count(p)) --pending;
          next.push_back(std::move(p));
          if (level.size() > cfg.node_cap)
            throw ResourceError("lemma25 search exceeded node cap " + std::to_string(cfg.node_cap));
        }
      }
    }
    frontier = std::move(next);
  }
  if (pending > 0) throw ResourceError("lemma25 search could not reach every ball element");

  std::size_t lower_bad = 0, upper_bad = 0;
  int max_k = 0;
  double worst_lower = -kInf, worst_upper = -kInf;
  for (std::size_t i = 0; i < ball.size(); ++i) {
    const int k = level.at(ball[i]);
    max_k = std::max(max_k, k);
    const double d = disp[i];
    const double tol = cfg.tol + (A.rounding > 0.0 ? 1e-9 * (1.0 + d) : 0.0);
    double lower, upper;
    if (use_case == 1) {
      lower = cfg.n * D * k - cfg.n * D;
      upper = (cfg.n + 2) * D * k;
    } else {
      lower = (cfg.n - alpha - 1.0) * k - (cfg.n - 1.0);
      upper = static_cast<double>(cfg.n) * k;
    }
    worst_lower = std::max(worst_lower, lower - d);
    worst_upper = std::max(worst_upper, d - upper);
    if (lower > d + tol) ++lower_bad;
    if (d > upper + tol) ++upper_bad;
  }

  Lemma25Result out;
  out.S_n = GeneratingSet(gens);
  DilationReport& rep = out.report;
  rep.verifier = "lemma25";
  rep.window_L = threshold;
  rep.covered = !truncated;
  if (upper_bad > 0 || (lower_bad > 0 && !truncated))
    rep.verdict = Verdict::violated;
  else if (lower_bad > 0)
    rep.verdict = Verdict::inconclusive;
  else
    rep.verdict = Verdict::holds;
  rep.values = {{"case", use_case},
                {"n", cfg.n},
                {"threshold", threshold},
                {"S_n_size", static_cast<double>(gens.size())},
                {"ball_radius", cfg.ball_radius},
                {"ball_elements", static_cast<double>(ball.size())},
                {"max_S_n_length", max_k},
                {"lower_violations", static_cast<double>(lower_bad)},
                {"upper_violations", static_cast<double>(upper_bad)},
                {"max_lower_excess", worst_lower},
                {"max_upper_excess", worst_upper}};
  if (truncated) rep.notes.push_back("S_n is truncated to the ball; lower-side failures are not certified");
  return out;
}

Lemma32Result lemma32_search(const ActionModel& A, const Lemma32Config& cfg) {
  if (A.exactness == Exactness::bracket_only) throw InputError("lemma32 search needs an exact-length model");
  const Alphabet alphabet(A.rank);
  std::vector<Word> ball, cand;
  std::vector<double> disp;
  for_each_ball_element(alphabet, cfg.ball_radius, [&](const Word& g) {
    ball.push_back(g);
    disp.push_back(displacement(A, g));
  });
  for_each_ball_element(alphabet, cfg.F_radius, [&](const Word& f) { cand.push_back(f); });

  // val[f][g] = ell[g f]
  std::vector<std::vector<double>> val(cand.size(), std::vector<double>(ball.size()));
  for (std::size_t f = 0; f < cand.size(); ++f)
    for (std::size_t g = 0; g < ball.size(); ++g) val[f][g] = stable_length(A, ball[g] * cand[f]).hi;

  std::vector<double> best = val[0];  // cand[0] is the identity
  auto gap = [&](const std::vector<double>& b) {
    double c = -kInf;
    for (std::size_t g = 0; g < ball.size(); ++g) c = std::max(c, disp[g] - b[g]);
    return c;
  };
  std::vector<std::size_t> chosen{0};
  double C = gap(best);
  const double C_identity = C;
  for (;;) {
    std::size_t pick = cand.size();
    double pick_C = C;
    for (std::size_t f = 1; f < cand.size(); ++f) {
      if (std::find(chosen.begin(), chosen.end(), f) != chosen.end()) continue;
      std::vector<double> trial = best;
      for (std::size_t g = 0; g < ball.size(); ++g) trial[g] = std::max(trial[g], val[f][g]);
      const double c = gap(trial);
      if (c < pick_C - cfg.tol) {
        pick_C = c;
        pick = f;
      }
    }
    if (pick == cand.size()) break;
    chosen.push_back(pick);
    for (std::size_t g = 0; g < ball.size(); ++g) best[g] = std::max(best[g], val[pick][g]);
    C = pick_C;
  }

  Lemma32Result out;
  for (auto f : chosen) out.F.push_back(cand[f]);
  out.C = std::max(0.0, C);
  DilationReport& rep = out.report;
  rep.verifier = "lemma32";
  rep.window_L = cfg.ball_radius;
  rep.covered = false;
  rep.verdict = Verdict::holds;
  rep.bound_value = out.C;
  rep.bound_at_lo = out.C;
  rep.values = {{"ball_radius", cfg.ball_radius},
                {"F_radius", cfg.F_radius},
                {"F_size", static_cast<double>(out.F.size())},
                {"C", out.C},
                {"C_identity_only", std::max(0.0, C_identity)},
                {"ball_elements", static_cast<double>(ball.size())}};
  std::string fs;
  for (const auto& f : out.F) fs += (fs.empty() ? "" : " ") + f.str();
  rep.notes.push_back("F = {" + fs + "}");
  return out;
}

DeltaResult delta_metric(const ActionModel& d1, const ActionModel& d2, int radius, WindowOptions opts) {
  if (d1.rank != d2.rank) throw InputError("models act by groups of different rank");
  if (radius < 1) throw InputError("delta radius must be >= 1");
  DeltaResult out;
  out.dil12 = {0.0, 0.0, true};
  out.dil21 = {0.0, 0.0, true};
  bool any = false;
  for_each_conj_class(Alphabet(d1.rank), radius, [&](const Word& rep) {
    const auto l1 = stable_length(d1, rep, opts.bracket);
    const auto l2 = stable_length(d2, rep, opts.bracket);
    const bool z1 = l1.lo < opts.epsilon, z2 = l2.lo < opts.epsilon;
    if (z1 && z2) return;
    if (z1 || z2) {
      out.degenerate = true;
      return;
    }
    const LengthBracket r12{l1.lo / l2.hi, l1.hi / l2.lo, l1.exact && l2.exact};
    const LengthBracket r21{l2.lo / l1.hi, l2.hi / l1.lo, l1.exact && l2.exact};
    if (!any) {
      out.dil12 = r12;
      out.dil21 = r21;
      any = true;
      return;
    }
    out.dil12 = {std::max(out.dil12.lo, r12.lo), std::max(out.dil12.hi, r12.hi), out.dil12.exact && r12.exact};
    out.dil21 = {std::max(out.dil21.lo, r21.lo), std::max(out.dil21.hi, r21.hi), out.dil21.exact && r21.exact};
  });
  if (!any || out.degenerate) {
    out.delta = {0.0, kInf, false};
    out.degenerate = true;
    return out;
  }
  // Outward rounding: the product and the logarithm each cost an ulp or so.
  auto log_down = [](double p) {
    if (p == 1.0) return 0.0;
    const double v = std::log(p);
    return std::max(0.0, v - 4.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(v)));
  };
  auto log_up = [](double p) {
    if (p == 1.0) return 0.0;
    const double v = std::log(p);
    return v + 4.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(v));
  };
  const bool exact = out.dil12.exact && out.dil21.exact && out.dil12.lo == out.dil12.hi &&
                     out.dil21.lo == out.dil21.hi && out.dil12.lo * out.dil21.lo == 1.0;
  out.delta = {log_down(out.dil12.lo * out.dil21.lo), log_up(out.dil12.hi * out.dil21.hi), exact};
  return out;
}

}  // namespace lenspec
