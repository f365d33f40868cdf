#pragma once

// Windowed dilations and the verifiers that compare each inequality's
// right-hand side against a large-window reference dilation.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lenspec/action.hpp"
#include "lenspec/jsl.hpp"
#include "lenspec/matrix_rep.hpp"
#include "lenspec/word_metric.hpp"

namespace lenspec {

enum class Verdict { holds, violated, inconclusive, hypothesis_failed };

std::string to_string(Verdict v);
Verdict verdict_from_string(const std::string& s);

struct ClassRow {
  Word rep;
  LengthBracket ell_x;
  LengthBracket ell_star;
  LengthBracket ratio;
  bool straddles = false;  // ell_x bracket contains the window edge
};

struct WindowOptions {
  double epsilon = 1e-9;
  int radius_cap = 16;
  std::size_t row_limit = 0;  // rows kept per window (0: none)
  BracketOptions bracket;
};

struct WindowResult {
  double L = 0.0;
  LengthBracket sup{0.0, 0.0, true};  // sup of ratio brackets over the window
  LengthBracket inf{0.0, 0.0, true};  // inf of ratio brackets over the window
  int radius = 0;                     // standard length enumerated
  double required_radius = 0.0;       // radius needed for full coverage
  bool covered = false;               // every class with ell_X <= L was enumerated
  std::size_t classes = 0;            // classes enumerated
  std::size_t members = 0;            // classes inside the window
  std::size_t excluded_zero = 0;      // ell_X lo below epsilon
  std::size_t straddling = 0;
  std::optional<Word> argmax;
  std::vector<ClassRow> rows;
};

// sup over classes with 0 < ell_X and ell_X lo <= L of ell_X* / ell_X. The
// enumeration depth is chosen from X's comparison rate to the standard tree
// and truncated at the radius cap (then `covered` is false).
WindowResult dilation_window(const ActionModel& Astar, const ActionModel& A, double L, WindowOptions opts = {});

// Several windows from one enumeration pass.
std::vector<WindowResult> dilation_windows(const ActionModel& Astar, const ActionModel& A,
                                           const std::vector<double>& Ls, WindowOptions opts = {});

// The same statistics over an explicit class list (no coverage claim).
WindowResult dilation_window(const ActionModel& Astar, const ActionModel& A, const std::vector<ConjClass>& classes,
                             double L, WindowOptions opts = {});

struct DilationReport {
  std::string verifier;
  double window_L = 0.0;
  LengthBracket window_sup{0.0, 0.0, true};
  double bound_value = 0.0;  // bound evaluated at window_sup.hi
  double bound_at_lo = 0.0;  // bound evaluated at window_sup.lo
  LengthBracket reference{0.0, 0.0, true};
  Verdict verdict = Verdict::inconclusive;
  bool covered = false;
  std::vector<ClassRow> diagnostics;
  std::vector<std::pair<std::string, double>> values;
  std::vector<std::string> notes;

  std::optional<double> value(const std::string& key) const;
};

// holds: reference.hi <= bound_at_lo + tol. violated: the window is covered
// and reference.lo > bound_at_hi + tol. Otherwise inconclusive.
Verdict decide(const LengthBracket& reference, double bound_at_lo, double bound_at_hi, bool covered, double tol);

enum class Thm13Variant { thm13, cor17 };

// thm13: sup (L-2D)/(L-6D) + 2 K delta/(L-6D); cor17: sup L/(L-6D) + 2 K log 4/(L-6D).
// Throws PreconditionError unless L > 6D.
double thm13_bound(double window_sup, double L, double D, double delta, double K,
                   Thm13Variant variant = Thm13Variant::thm13);

struct VerifyConfig {
  double K = 1e4;
  double tol = 1e-9;
  double reference_factor = 2.0;  // reference window = factor * test window
  int reference_n_max = 10;       // depth for the joint stable length upper bound
  std::size_t frontier_cap = 1'000'000;
  WindowOptions window;
};

struct Thm13Config : VerifyConfig {
  std::vector<double> Ls{4.0, 6.0, 8.0, 12.0};
  std::optional<double> delta;  // of X*; default: the model's
  std::optional<double> D;      // of X; default: the model's
  Thm13Variant variant = Thm13Variant::thm13;
};

std::vector<DilationReport> thm13_verify(const ActionModel& Astar, const ActionModel& A, const Thm13Config& cfg);

struct Thm15Config : VerifyConfig {
  std::vector<int> Ls{1, 2, 4, 8};
  std::optional<double> delta;
  int stable_k_max = 4;  // powers used for word-metric stable length upper bounds
  SearchLimits limits;
};

std::vector<DilationReport> thm15_verify(const ActionModel& Astar, const Alphabet& alphabet, const GeneratingSet& S,
                                         const Thm15Config& cfg);

struct AnosovConfig : VerifyConfig {
  std::vector<double> Ls{64.0, 128.0};
  double alpha = 0.0;
  std::optional<BochiConstants> constants;  // default: caps for rho's dimension
  int cert_radius = 6;
};

std::vector<DilationReport> anosov_verify(const LinearRep& rho, const LinearRep& tau, const AnosovConfig& cfg);

struct Cor14Config : VerifyConfig {
  std::vector<double> Ls{4.0, 8.0};
  std::optional<double> alpha;  // default: window inf
  std::optional<double> beta;   // default: window sup
  std::optional<double> C0;
};

std::vector<DilationReport> cor14_verify(const ActionModel& Astar, const ActionModel& A, const Cor14Config& cfg);

struct BfConfig : VerifyConfig {
  int n_max = 12;
  std::optional<double> delta;
};

// half s_2 <= jsl <= K delta + half s_2 on one subset: the K-free half is
// pass/fail, the upper half is checked with the configured K and reported
// with its minimal K.
DilationReport bf_verify(const ActionModel& A, const std::vector<Word>& S, const BfConfig& cfg);

struct Prop31Config : VerifyConfig {
  int n_max = 12;
  double window_L = 4.0;
  int stable_k_max = 4;
  SearchLimits limits;
};

DilationReport prop31_verify(const ActionModel& A, const Alphabet& alphabet, const GeneratingSet& S,
                             const Prop31Config& cfg);

struct Lemma25Config {
  int n = 4;
  int ball_radius = 9;
  std::optional<int> use_case;  // 1 (coboundedness) or 2 (rough geodesic); default by model
  std::size_t node_cap = 5'000'000;
  double tol = 0.0;
};

struct Lemma25Result {
  DilationReport report;
  GeneratingSet S_n;
};

Lemma25Result lemma25_check(const ActionModel& A, const Lemma25Config& cfg);

struct Lemma32Config {
  int ball_radius = 8;
  int F_radius = 1;
  double tol = 1e-9;
};

struct Lemma32Result {
  DilationReport report;
  std::vector<Word> F;
  double C = 0.0;
};

Lemma32Result lemma32_search(const ActionModel& A, const Lemma32Config& cfg);

struct DeltaResult {
  LengthBracket delta;  // log(Dil(d1,d2) Dil(d2,d1))
  LengthBracket dil12;
  LengthBracket dil21;
  bool degenerate = false;  // some class has zero length in one model only
};

// Dilations over every class of standard length <= radius.
DeltaResult delta_metric(const ActionModel& d1, const ActionModel& d2, int radius, WindowOptions opts = {});

}  // namespace lenspec
