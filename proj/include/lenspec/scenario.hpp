#pragma once

// Scenario files (JSON) and the batch runner behind the command-line tool.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lenspec/bounds.hpp"

namespace lenspec {

inline constexpr const char* kVersion = "0.1.0";

struct RunConfig {
  double K = 1e4;
  double c_delta = 4.0;
  double tolerance = 1e-9;
  double window_epsilon = 1e-9;
  int radius_cap = 16;
  double reference_factor = 2.0;
  int reference_n_max = 10;
  std::size_t max_frontier = 1'000'000;
  double search_radius = 32.0;
  int k_max = 8;
  std::size_t row_limit = 200;

  bool operator==(const RunConfig&) const = default;
};

struct GeneratingSetSpec {
  std::string name;
  bool standard = false;
  std::vector<double> weights;  // standard sets only
  std::vector<std::pair<std::string, double>> elements;  // word text, weight

  bool operator==(const GeneratingSetSpec&) const = default;
};

// One entry per field any model kind uses; `kind` decides which are read.
struct ModelSpec {
  std::string name;
  std::string kind;  // tree | word_metric | mobius | linear | schottky | scaled
  std::optional<std::string> preset;
  std::vector<double> weights;
  std::string generating_set;
  int dim = 2;
  // Real matrices as rows; for 3-space, entries are [re, im] pairs.
  std::vector<std::vector<std::vector<double>>> generators;
  std::vector<std::vector<std::vector<std::vector<double>>>> complex_generators;
  std::vector<double> stretch;
  std::vector<double> angles;
  std::vector<double> twists;
  std::optional<double> delta;
  int cert_radius = 6;
  std::string view = "mobius";  // schottky: mobius | linear
  std::string base;
  double factor = 1.0;

  bool operator==(const ModelSpec&) const = default;
};

struct SweepSpec {
  int max_size = 3;
  int max_length = 3;

  bool operator==(const SweepSpec&) const = default;
};

struct VerifierSpec {
  std::string name;  // thm13 | thm15 | cor14 | cor17 | anosov | bf | bochi | prop31 | lemma25 | lemma32
  std::string X, Xstar, model, S, rho, tau;
  std::vector<double> L;
  double K = 1e4;
  std::optional<double> delta, D, alpha, beta, C0;
  int n_max = 12;
  double window_L = 4.0;
  int n = 4;
  int ball_radius = 9;
  int F_radius = 1;
  std::vector<std::vector<std::string>> subsets;
  std::optional<SweepSpec> sweep;
  int dim = 2;
  int count = 100;
  std::optional<int> probe_j;

  bool operator==(const VerifierSpec&) const = default;
};

struct Scenario {
  int rank = 2;
  std::uint64_t seed = 0;
  RunConfig config;
  std::vector<GeneratingSetSpec> generating_sets;
  std::vector<ModelSpec> models;
  std::vector<VerifierSpec> verifiers;

  bool operator==(const Scenario&) const = default;
};

// Validates and fills defaults. Errors name the line (for syntax errors) or
// the field path (for schema errors).
Scenario parse_scenario(const std::string& text);
std::string emit_scenario(const Scenario& s);

const std::vector<std::string>& verifier_names();

// Builtin model presets, by name.
ModelSpec expand_preset(const std::string& preset, const std::string& name);

struct VerifierOutcome {
  std::string name;
  std::string status = "ok";  // ok | input-error | resource-error | numeric-error
  std::string message;
  std::vector<DilationReport> reports;
  // Summary table for verifiers that aggregate many instances (bf sweeps, bochi).
  std::vector<std::string> table_header;
  std::vector<std::vector<double>> table;
  double seconds = 0.0;
};

struct RunReport {
  Scenario scenario;
  std::vector<VerifierOutcome> outcomes;
  std::vector<std::string> warnings;

  bool any_violation() const;
  int exit_code() const;  // 0 ok, 1 violation, 2 input error, 3 resource cap
};

// Runs the scenario's verifiers whose name matches `only` ("all" or empty:
// every verifier; "cor17" also selects thm13 entries with a cor17 variant).
RunReport run_scenario(const Scenario& s, const std::string& only = "all");

// Deterministic report text (no timing).
std::string emit_report_json(const RunReport& r);
std::string emit_report_csv(const RunReport& r);
std::string emit_timing_json(const RunReport& r);

// Lower-level entry points used by the CLI subcommands.
struct BuiltModel {
  ActionModel model;
  std::optional<LinearRep> linear;
  std::vector<std::string> warnings;
};

class ModelRegistry {
 public:
  explicit ModelRegistry(const Scenario& s);
  const BuiltModel& get(const std::string& name) const;
  GeneratingSet generating_set(const std::string& name) const;
  const Alphabet& alphabet() const noexcept { return alphabet_; }
  std::vector<std::string> warnings() const;

 private:
  Alphabet alphabet_;
  std::map<std::string, BuiltModel> models_;
  std::map<std::string, GeneratingSet> sets_;
};

}  // namespace lenspec
