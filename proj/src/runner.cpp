#include <chrono>
#include <charconv>
#include <random>
#include <sstream>

#include <json.hpp>

#include "lenspec/anosov.hpp"
#include "lenspec/errors.hpp"
#include "lenspec/scenario.hpp"
#include "lenspec/spaces.hpp"

namespace lenspec {

using json = nlohmann::ordered_json;

namespace {

void check_rank(const ActionModel& A, const Scenario& s, const std::string& name) {
  if (A.rank != s.rank)
    throw InputError("model \"" + name + "\" has " + std::to_string(A.rank) + " generators; scenario rank is " +
                     std::to_string(s.rank));
}

linalg::MatrixXd real_matrix(const std::vector<std::vector<double>>& rows, const std::string& what) {
  const auto n = static_cast<Eigen::Index>(rows.size());
  linalg::MatrixXd M(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (static_cast<Eigen::Index>(rows[static_cast<std::size_t>(i)].size()) != n)
      throw InputError(what + ": matrix must be square");
    for (Eigen::Index j = 0; j < n; ++j) M(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }
  return M;
}

linalg::Matrix2cd complex_matrix(const std::vector<std::vector<std::vector<double>>>& rows, const std::string& what) {
  if (rows.size() != 2) throw InputError(what + ": expected a 2x2 matrix");
  linalg::Matrix2cd M;
  for (int i = 0; i < 2; ++i) {
    if (rows[static_cast<std::size_t>(i)].size() != 2) throw InputError(what + ": expected a 2x2 matrix");
    for (int j = 0; j < 2; ++j) {
      const auto& z = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      if (z.size() != 2) throw InputError(what + ": complex entries are [re, im] pairs");
      M(i, j) = {z[0], z[1]};
    }
  }
  return M;
}

void apply_certificate(ActionModel& A, const AnosovCertificate& cert, double rate, BuiltModel& out,
                       const std::string& name) {
  if (cert.ok) {
    A.std_rate = rate;
    A.std_rate_certified = false;
  } else {
    out.warnings.push_back("model \"" + name + "\": Anosov certificate failed at radius " +
                           std::to_string(cert.radius) + "; windows cannot be covered");
  }
}

BuiltModel build_model(const ModelSpec& m, const Scenario& s, const Alphabet& alphabet,
                       const std::map<std::string, BuiltModel>& earlier,
                       const std::map<std::string, GeneratingSet>& sets) {
  BuiltModel out;
  const std::string what = "model \"" + m.name + "\"";
  if (m.kind == "tree") {
    out.model = tree_model(alphabet, m.weights);
  } else if (m.kind == "word_metric") {
    SearchLimits limits;
    limits.radius = s.config.search_radius;
    out.model = word_metric_model(alphabet, sets.at(m.generating_set), limits, s.config.k_max);
  } else if (m.kind == "mobius") {
    if (m.dim == 2) {
      if (!m.complex_generators.empty()) throw InputError(what + ": plane models take real entries");
      std::vector<linalg::Matrix2d> gens;
      for (const auto& g : m.generators) {
        const auto M = real_matrix(g, what);
        if (M.rows() != 2) throw InputError(what + ": expected 2x2 matrices");
        gens.push_back(M);
      }
      const MobiusRep2 rep(gens);
      out.model = mobius_model(rep, *m.delta);
      const auto cert = anosov_certificate(rep, m.cert_radius);
      apply_certificate(out.model, cert, mobius_rate(cert), out, m.name);
    } else {
      std::vector<linalg::Matrix2cd> gens;
      for (const auto& g : m.complex_generators) gens.push_back(complex_matrix(g, what));
      for (const auto& g : m.generators) {
        const auto M = real_matrix(g, what);
        if (M.rows() != 2) throw InputError(what + ": expected 2x2 matrices");
        gens.push_back(M.cast<std::complex<double>>());
      }
      const MobiusRep3 rep(gens);
      out.model = mobius_model(rep, *m.delta);
      const auto cert = anosov_certificate(rep, m.cert_radius);
      apply_certificate(out.model, cert, mobius_rate(cert), out, m.name);
    }
  } else if (m.kind == "linear") {
    if (!m.complex_generators.empty()) throw InputError(what + ": linear models take real entries");
    std::vector<linalg::MatrixXd> gens;
    for (const auto& g : m.generators) gens.push_back(real_matrix(g, what));
    const LinearRep rep(gens);
    out.model = linear_model(rep, *m.delta);
    const auto cert = anosov_certificate(rep, m.cert_radius);
    apply_certificate(out.model, cert, linear_rate(cert, rep.dim()), out, m.name);
    out.linear = rep;
  } else if (m.kind == "schottky") {
    SchottkyBuilder b;
    b.stretch = m.stretch;
    b.angles = m.angles;
    b.twists = m.twists;
    b.dim = m.dim;
    b.delta = *m.delta;
    b.cert_radius = m.cert_radius;
    auto built = build_schottky(b);
    for (auto& w : built.warnings) out.warnings.push_back("model \"" + m.name + "\": " + w);
    if (m.view == "linear") {
      if (!built.linear) throw InputError(what + ": the linear view needs dim 2");
      out.model = *built.linear;
      std::vector<linalg::MatrixXd> gens;
      for (const auto& g : built.generators) gens.push_back(g.real());
      out.linear = LinearRep(gens);
    } else {
      out.model = built.mobius;
    }
  } else if (m.kind == "scaled") {
    const auto& base = earlier.at(m.base);
    out.model = scaled(base.model, m.factor);
    out.warnings = base.warnings;
    if (m.delta) out.model.delta = *m.delta;
  } else {
    throw InputError(what + ": unknown kind \"" + m.kind + "\"");
  }
  out.model.name = m.name;
  check_rank(out.model, s, m.name);
  return out;
}

VerifyConfig base_config(const Scenario& s, const VerifierSpec& v) {
  VerifyConfig c;
  c.K = v.K;
  c.tol = s.config.tolerance;
  c.reference_factor = s.config.reference_factor;
  c.reference_n_max = s.config.reference_n_max;
  c.frontier_cap = s.config.max_frontier;
  c.window.epsilon = s.config.window_epsilon;
  c.window.radius_cap = s.config.radius_cap;
  c.window.row_limit = s.config.row_limit;
  c.window.bracket.k_max = s.config.k_max;
  c.window.bracket.c_delta = s.config.c_delta;
  return c;
}

template <typename Cfg>
Cfg with_base(const Scenario& s, const VerifierSpec& v) {
  Cfg c;
  static_cast<VerifyConfig&>(c) = base_config(s, v);
  return c;
}

// The K-free half: (1/2) max over S^2 of ell_lo <= joint stable length hi.
bool bf_lower_check_value(const DilationReport& rep) {
  const auto h = rep.value("half_s2_lo");
  return !h || *h <= rep.reference.hi + 1e-9;
}

int severity(Verdict v) {
  switch (v) {
    case Verdict::holds: return 0;
    case Verdict::hypothesis_failed: return 1;
    case Verdict::inconclusive: return 2;
    case Verdict::violated: return 3;
  }
  return 2;
}

// All nontrivial reduced words up to the given length, shortlex.
std::vector<Word> words_up_to(const Alphabet& alphabet, int max_length) {
  std::vector<Word> out;
  for_each_ball_element(alphabet, max_length, [&](const Word& w) {
    if (!w.empty()) out.push_back(w);
  });
  return out;
}

void run_bf(const Scenario& s, const VerifierSpec& v, const ModelRegistry& reg, VerifierOutcome& out) {
  BfConfig cfg = with_base<BfConfig>(s, v);
  cfg.n_max = v.n_max;
  cfg.delta = v.delta;
  const ActionModel& A = reg.get(v.model).model;
  for (const auto& subset : v.subsets) {
    std::vector<Word> S;
    for (const auto& w : subset) S.push_back(Word::parse(w, reg.alphabet()));
    auto rep = bf_verify(A, S, cfg);
    std::string names;
    for (const auto& w : S) names += (names.empty() ? "" : ",") + w.str();
    rep.notes.insert(rep.notes.begin(), "S = {" + names + "}");
    out.reports.push_back(std::move(rep));
  }
  if (!v.sweep) return;

  // Every subset of nontrivial words of bounded length and size. Rows of the
  // summary table group subsets by size.
  const auto pool = words_up_to(reg.alphabet(), v.sweep->max_length);
  const int max_size = v.sweep->max_size;
  struct Row {
    double count = 0, equal = 0, certified = 0, max_gap = 0, max_rel_gap = 0, max_minimal_K = 0;
  };
  std::vector<Row> rows(static_cast<std::size_t>(max_size));
  DilationReport agg;
  agg.verifier = "bf";
  agg.window_L = cfg.n_max;
  agg.verdict = Verdict::holds;
  agg.covered = true;
  double lower_failures = 0;
  std::vector<std::size_t> idx;
  std::function<void(std::size_t)> rec = [&](std::size_t start) {
    if (!idx.empty()) {
      std::vector<Word> S;
      for (auto i : idx) S.push_back(pool[i]);
      const auto rep = bf_verify(A, S, cfg);
      Row& r = rows[idx.size() - 1];
      r.count += 1;
      const double jlo = *rep.value("jsl_lo"), jhi = *rep.value("jsl_hi");
      const double h = *rep.value("half_s2_lo");
      if (jlo == h) r.equal += 1;
      if (*rep.value("certified") > 0.5) r.certified += 1;
      const double gap = jhi - jlo;
      const double max_single = *rep.value("max_single");
      r.max_gap = std::max(r.max_gap, gap);
      if (max_single > 0) r.max_rel_gap = std::max(r.max_rel_gap, gap * cfg.n_max / (2.0 * max_single));
      r.max_minimal_K = std::max(r.max_minimal_K, *rep.value("minimal_K"));
      if (!bf_lower_check_value(rep)) lower_failures += 1;
      if (severity(rep.verdict) > severity(agg.verdict)) {
        agg.verdict = rep.verdict;
        agg.window_sup = rep.window_sup;
        agg.reference = rep.reference;
        agg.bound_value = rep.bound_value;
        agg.bound_at_lo = rep.bound_at_lo;
      }
      agg.covered = agg.covered && rep.covered;
    }
    if (static_cast<int>(idx.size()) == max_size) return;
    for (std::size_t i = start; i < pool.size(); ++i) {
      idx.push_back(i);
      rec(i + 1);
      idx.pop_back();
    }
  };
  rec(0);
  out.table_header = {"size", "subsets", "lo_equals_half_s2", "certified", "max_gap", "max_gap_over_2maxdisp_per_n",
                      "max_minimal_K"};
  double total = 0, equal = 0, max_gap = 0, max_rel = 0, max_K = 0;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const Row& r = rows[k];
    out.table.push_back({static_cast<double>(k + 1), r.count, r.equal, r.certified, r.max_gap, r.max_rel_gap,
                         r.max_minimal_K});
    total += r.count;
    equal += r.equal;
    max_gap = std::max(max_gap, r.max_gap);
    max_rel = std::max(max_rel, r.max_rel_gap);
    max_K = std::max(max_K, r.max_minimal_K);
  }
  agg.values = {{"subsets", total},         {"lo_equals_half_s2", equal},  {"max_gap", max_gap},
                {"max_gap_over_2maxdisp_per_n", max_rel}, {"max_minimal_K", max_K}, {"lower_failures", lower_failures},
                {"max_size", max_size},     {"max_length", v.sweep->max_length}};
  agg.notes.push_back("sweep over subsets of words of length <= " + std::to_string(v.sweep->max_length) +
                      " with at most " + std::to_string(max_size) + " elements");
  out.reports.push_back(std::move(agg));
}

void run_bochi(const Scenario& s, const VerifierSpec& v, VerifierOutcome& out) {
  std::mt19937_64 rng(s.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const int m = v.dim;
  const auto constants = BochiConstants::caps(m);
  const int probe_j = v.probe_j.value_or(m == 2 ? constants.d_m : 12);
  if (probe_j < 1) throw InputError("probe_j must be positive");
  const int jsr_n = std::min(v.n_max, probe_j);
  const auto cap = static_cast<std::size_t>(std::pow(2.0, probe_j));
  const double tol = s.config.tolerance;

  DilationReport agg;
  agg.verifier = "bochi";
  agg.window_L = probe_j;
  agg.verdict = Verdict::holds;
  agg.covered = true;
  double holds = 0, worst_margin = -std::numeric_limits<double>::infinity(), certified = 0;
  out.table_header = {"ensemble", "log_jsr_lo", "log_jsr_hi", "rhs", "j_max", "certified"};
  for (int e = 0; e < v.count; ++e) {
    std::vector<Eigen::MatrixXd> S;
    for (int k = 0; k < 2; ++k) {
      Eigen::MatrixXd M(m, m);
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) M(i, j) = normal(rng);
      S.push_back(linalg::unit_determinant(M));
    }
    const auto jsr = jsr_bracket(S, jsr_n, cap);
    const auto b = bochi_rhs(S, constants, cap, true);
    Verdict verdict = Verdict::inconclusive;
    if (jsr.log_jsr.hi <= b.rhs + tol)
      verdict = Verdict::holds;
    else if (b.certified && jsr.log_jsr.lo > b.rhs + tol)
      verdict = Verdict::violated;
    if (verdict == Verdict::holds) holds += 1;
    if (b.certified) certified += 1;
    const double margin = jsr.log_jsr.hi - b.rhs;
    if (margin > worst_margin) {
      worst_margin = margin;
      agg.reference = jsr.log_jsr;
      agg.bound_value = b.rhs;
      agg.bound_at_lo = b.rhs;
    }
    if (severity(verdict) > severity(agg.verdict)) agg.verdict = verdict;
    agg.covered = agg.covered && b.certified;
    out.table.push_back({static_cast<double>(e), jsr.log_jsr.lo, jsr.log_jsr.hi, b.rhs, static_cast<double>(b.j_max),
                         b.certified ? 1.0 : 0.0});
  }
  agg.values = {{"dim", m},           {"count", v.count},  {"holds", holds},          {"certified", certified},
                {"c_m", constants.c_m}, {"d_m", constants.d_m}, {"j_max", probe_j}, {"jsr_n_max", jsr_n},
                {"worst_margin", worst_margin}};
  if (certified < v.count)
    agg.notes.push_back("probe: products up to length " + std::to_string(probe_j) + " < d_m = " +
                        std::to_string(constants.d_m) + "; the right-hand side is a lower estimate");
  out.reports.push_back(std::move(agg));
}

void run_one(const Scenario& s, const VerifierSpec& v, const ModelRegistry& reg, VerifierOutcome& out) {
  const std::string& n = v.name;
  if (n == "thm13" || n == "cor17") {
    auto cfg = with_base<Thm13Config>(s, v);
    cfg.Ls = v.L;
    cfg.delta = v.delta;
    cfg.D = v.D;
    cfg.variant = n == "cor17" ? Thm13Variant::cor17 : Thm13Variant::thm13;
    out.reports = thm13_verify(reg.get(v.Xstar).model, reg.get(v.X).model, cfg);
  } else if (n == "thm15") {
    auto cfg = with_base<Thm15Config>(s, v);
    cfg.Ls.clear();
    for (double L : v.L) {
      if (L != std::floor(L)) throw InputError("thm15 windows must be integers");
      cfg.Ls.push_back(static_cast<int>(L));
    }
    cfg.delta = v.delta;
    cfg.limits.radius = s.config.search_radius;
    out.reports = thm15_verify(reg.get(v.Xstar).model, reg.alphabet(), reg.generating_set(v.S), cfg);
  } else if (n == "cor14") {
    auto cfg = with_base<Cor14Config>(s, v);
    cfg.Ls = v.L;
    cfg.alpha = v.alpha;
    cfg.beta = v.beta;
    cfg.C0 = v.C0;
    out.reports = cor14_verify(reg.get(v.Xstar).model, reg.get(v.X).model, cfg);
  } else if (n == "anosov") {
    auto cfg = with_base<AnosovConfig>(s, v);
    cfg.Ls = v.L;
    cfg.alpha = v.alpha.value_or(0.0);
    const auto& rho = reg.get(v.rho);
    const auto& tau = reg.get(v.tau);
    if (!rho.linear || !tau.linear) throw InputError("anosov needs linear models for rho and tau");
    out.reports = anosov_verify(*rho.linear, *tau.linear, cfg);
  } else if (n == "bf") {
    run_bf(s, v, reg, out);
  } else if (n == "bochi") {
    run_bochi(s, v, out);
  } else if (n == "prop31") {
    auto cfg = with_base<Prop31Config>(s, v);
    cfg.n_max = v.n_max;
    cfg.window_L = v.window_L;
    cfg.limits.radius = s.config.search_radius;
    out.reports.push_back(prop31_verify(reg.get(v.model).model, reg.alphabet(), reg.generating_set(v.S), cfg));
  } else if (n == "lemma25") {
    Lemma25Config cfg;
    cfg.n = v.n;
    cfg.ball_radius = v.ball_radius;
    out.reports.push_back(lemma25_check(reg.get(v.model).model, cfg).report);
  } else if (n == "lemma32") {
    Lemma32Config cfg;
    cfg.ball_radius = v.ball_radius;
    cfg.F_radius = v.F_radius;
    cfg.tol = s.config.tolerance;
    out.reports.push_back(lemma32_search(reg.get(v.model).model, cfg).report);
  } else {
    throw InputError("unknown verifier \"" + n + "\"");
  }
}

json num(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

json bracket_json(const LengthBracket& b) { return {{"lo", num(b.lo)}, {"hi", num(b.hi)}, {"exact", b.exact}}; }

std::string fmt(double x) {
  if (!std::isfinite(x)) return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

}  // namespace

ModelRegistry::ModelRegistry(const Scenario& s) : alphabet_(s.rank) {
  for (const auto& g : s.generating_sets) {
    if (g.standard) {
      sets_.emplace(g.name, GeneratingSet::standard(alphabet_, g.weights));
    } else {
      std::vector<Generator> els;
      for (const auto& [w, wt] : g.elements) els.push_back({Word::parse(w, alphabet_), wt});
      sets_.emplace(g.name, GeneratingSet(std::move(els)));
    }
  }
  for (const auto& m : s.models) models_.emplace(m.name, build_model(m, s, alphabet_, models_, sets_));
}

const BuiltModel& ModelRegistry::get(const std::string& name) const {
  auto it = models_.find(name);
  if (it == models_.end()) throw InputError("no model named \"" + name + "\"");
  return it->second;
}

GeneratingSet ModelRegistry::generating_set(const std::string& name) const {
  auto it = sets_.find(name);
  if (it == sets_.end()) throw InputError("no generating set named \"" + name + "\"");
  return it->second;
}

std::vector<std::string> ModelRegistry::warnings() const {
  std::vector<std::string> out;
  for (const auto& [_, m] : models_)
    out.insert(out.end(), m.warnings.begin(), m.warnings.end());
  return out;
}

bool RunReport::any_violation() const {
  for (const auto& o : outcomes)
    for (const auto& r : o.reports)
      if (r.verdict == Verdict::violated) return true;
  return false;
}

int RunReport::exit_code() const {
  if (any_violation()) return 1;
  bool resource = false, input = false;
  for (const auto& o : outcomes) {
    if (o.status == "resource-error") resource = true;
    if (o.status == "input-error" || o.status == "numeric-error") input = true;
  }
  if (resource) return 3;
  if (input) return 2;
  return 0;
}

RunReport run_scenario(const Scenario& s, const std::string& only) {
  RunReport report;
  report.scenario = s;
  const ModelRegistry reg(s);
  report.warnings = reg.warnings();
  for (const auto& v : s.verifiers) {
    const bool selected = only.empty() || only == "all" || only == v.name;
    if (!selected) continue;
    VerifierOutcome out;
    out.name = v.name;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      run_one(s, v, reg, out);
    } catch (const PreconditionError& e) {
      out.status = "input-error";
      out.message = std::string("precondition: ") + e.what();
    } catch (const InputError& e) {
      out.status = "input-error";
      out.message = e.what();
    } catch (const ResourceError& e) {
      out.status = "resource-error";
      out.message = e.what();
    } catch (const SearchExhausted& e) {
      out.status = "resource-error";
      out.message = e.what();
    } catch (const NumericError& e) {
      out.status = "numeric-error";
      out.message = e.what();
    }
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report.outcomes.push_back(std::move(out));
  }
  return report;
}

std::string emit_report_json(const RunReport& r) {
  json j;
  j["version"] = kVersion;
  j["seed"] = r.scenario.seed;
  const RunConfig& c = r.scenario.config;
  j["caps"] = {{"radius_cap", c.radius_cap},
               {"max_frontier", c.max_frontier},
               {"search_radius", c.search_radius},
               {"reference_n_max", c.reference_n_max}};
  j["scenario"] = json::parse(emit_scenario(r.scenario));
  j["warnings"] = r.warnings;
  std::map<std::string, int> counts{{"holds", 0}, {"violated", 0}, {"inconclusive", 0}, {"hypothesis-failed", 0}};
  int errors = 0;
  json outs = json::array();
  for (const auto& o : r.outcomes) {
    json e{{"name", o.name}, {"status", o.status}};
    if (!o.message.empty()) e["message"] = o.message;
    if (o.status != "ok") ++errors;
    json reps = json::array();
    for (const auto& rep : o.reports) {
      ++counts[to_string(rep.verdict)];
      json values = json::object();
      for (const auto& [k, v] : rep.values) values[k] = num(v);
      json rj{{"verifier", rep.verifier},
              {"L", num(rep.window_L)},
              {"verdict", to_string(rep.verdict)},
              {"window_sup", bracket_json(rep.window_sup)},
              {"bound", num(rep.bound_value)},
              {"bound_at_lo", num(rep.bound_at_lo)},
              {"reference", bracket_json(rep.reference)},
              {"covered", rep.covered},
              {"values", values},
              {"notes", rep.notes},
              {"class_rows", rep.diagnostics.size()}};
      reps.push_back(rj);
    }
    e["reports"] = reps;
    if (!o.table.empty()) {
      json t{{"header", o.table_header}, {"rows", json::array()}};
      for (const auto& row : o.table) {
        json jr = json::array();
        for (double x : row) jr.push_back(num(x));
        t["rows"].push_back(jr);
      }
      e["table"] = t;
    }
    outs.push_back(e);
  }
  j["verifiers"] = outs;
  j["summary"] = {{"holds", counts["holds"]},
                  {"violated", counts["violated"]},
                  {"inconclusive", counts["inconclusive"]},
                  {"hypothesis-failed", counts["hypothesis-failed"]},
                  {"errors", errors},
                  {"exit_code", r.exit_code()}};
  return j.dump(2) + "\n";
}

std::string emit_report_csv(const RunReport& r) {
  std::ostringstream os;
  os << "verifier,report,L,class,ell_x_lo,ell_x_hi,ell_star_lo,ell_star_hi,ratio_lo,ratio_hi,straddles\n";
  for (std::size_t i = 0; i < r.outcomes.size(); ++i) {
    const auto& o = r.outcomes[i];
    for (std::size_t k = 0; k < o.reports.size(); ++k) {
      const auto& rep = o.reports[k];
      for (const auto& row : rep.diagnostics) {
        os << o.name << ',' << k << ',' << fmt(rep.window_L) << ',' << row.rep.str() << ',' << fmt(row.ell_x.lo)
           << ',' << fmt(row.ell_x.hi) << ',' << fmt(row.ell_star.lo) << ',' << fmt(row.ell_star.hi) << ','
           << fmt(row.ratio.lo) << ',' << fmt(row.ratio.hi) << ',' << (row.straddles ? 1 : 0) << '\n';
      }
    }
  }
  return os.str();
}

std::string emit_timing_json(const RunReport& r) {
  json j = json::array();
  for (const auto& o : r.outcomes) j.push_back({{"name", o.name}, {"seconds", o.seconds}});
  return j.dump(2) + "\n";
}

}  // namespace lenspec
