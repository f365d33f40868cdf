#include "lenspec/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <json.hpp>

#include "lenspec/errors.hpp"
#include "lenspec/spaces.hpp"

namespace lenspec {

using json = nlohmann::ordered_json;

namespace {

// A JSON object being read: remembers its path for messages and rejects keys
// nobody asked for.
class Obj {
 public:
  Obj(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail(path_, "expected an object");
  }

  [[noreturn]] static void fail(const std::string& path, const std::string& what) {
    throw InputError("scenario: " + (path.empty() ? std::string("<root>") : path) + ": " + what);
  }

  std::string at(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  const json* find(const std::string& key) {
    seen_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  template <typename T>
  void get(const std::string& key, T& out) {
    if (const json* v = find(key)) out = convert<T>(*v, at(key));
  }

  template <typename T>
  void get(const std::string& key, std::optional<T>& out) {
    if (const json* v = find(key)) out = convert<T>(*v, at(key));
  }

  template <typename T>
  T require(const std::string& key) {
    const json* v = find(key);
    if (!v) fail(at(key), "required field missing");
    return convert<T>(*v, at(key));
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key())) fail(at(it.key()), "unknown field");
  }

  template <typename T>
  static T convert(const json& v, const std::string& path) {
    if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) fail(path, "expected a boolean");
      return v.get<bool>();
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!v.is_string()) fail(path, "expected a string");
      return v.get<std::string>();
    } else if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) fail(path, "expected an integer");
      if constexpr (std::is_unsigned_v<T>) {
        if (v.is_number_integer() && !v.is_number_unsigned() && v.get<long long>() < 0)
          fail(path, "expected a nonnegative integer");
      }
      return v.get<T>();
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!v.is_number()) fail(path, "expected a number");
      const double x = v.get<double>();
      if (!std::isfinite(x)) fail(path, "expected a finite number");
      return x;
    } else {
      // vectors
      if (!v.is_array()) fail(path, "expected an array");
      T out;
      for (std::size_t i = 0; i < v.size(); ++i)
        out.push_back(convert<typename T::value_type>(v[i], path + "[" + std::to_string(i) + "]"));
      return out;
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

std::string position(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

const std::vector<std::string> kModelKinds{"tree", "word_metric", "mobius", "linear", "schottky", "scaled"};

std::vector<double> default_Ls(const std::string& verifier) {
  if (verifier == "thm13" || verifier == "cor17") return {4.0, 6.0, 8.0, 12.0};
  if (verifier == "thm15") return {1.0, 2.0, 4.0, 8.0};
  if (verifier == "cor14") return {4.0, 8.0};
  if (verifier == "anosov") return {64.0, 128.0};
  return {};
}

GeneratingSetSpec parse_set(const json& j, const std::string& path) {
  Obj o(j, path);
  GeneratingSetSpec g;
  g.name = o.require<std::string>("name");
  o.get("standard", g.standard);
  o.get("weights", g.weights);
  if (const json* els = o.find("elements")) {
    if (!els->is_array()) Obj::fail(o.at("elements"), "expected an array");
    for (std::size_t i = 0; i < els->size(); ++i) {
      const std::string p = o.at("elements") + "[" + std::to_string(i) + "]";
      Obj e((*els)[i], p);
      auto word = e.require<std::string>("word");
      double w = 1.0;
      e.get("weight", w);
      if (!(w > 0.0)) Obj::fail(e.at("weight"), "weights must be positive");
      e.finish();
      g.elements.emplace_back(std::move(word), w);
    }
  }
  o.finish();
  if (g.standard && !g.elements.empty()) Obj::fail(path, "a standard set takes weights, not elements");
  if (!g.standard && g.elements.empty()) Obj::fail(path, "needs \"standard\": true or a nonempty \"elements\" list");
  if (!g.standard && !g.weights.empty()) Obj::fail(o.at("weights"), "only standard sets take weights");
  for (std::size_t i = 0; i < g.weights.size(); ++i)
    if (!(g.weights[i] > 0.0)) Obj::fail(o.at("weights") + "[" + std::to_string(i) + "]", "weights must be positive");
  return g;
}

ModelSpec parse_model(const json& j, const std::string& path) {
  Obj o(j, path);
  ModelSpec m;
  m.name = o.require<std::string>("name");
  o.get("preset", m.preset);
  if (m.preset) {
    try {
      m = expand_preset(*m.preset, m.name);
    } catch (const InputError& e) {
      Obj::fail(o.at("preset"), e.what());
    }
  }
  o.get("kind", m.kind);
  if (m.kind.empty()) Obj::fail(o.at("kind"), "required field missing");
  if (std::find(kModelKinds.begin(), kModelKinds.end(), m.kind) == kModelKinds.end())
    Obj::fail(o.at("kind"), "unknown model kind \"" + m.kind + "\"");
  o.get("weights", m.weights);
  o.get("generating_set", m.generating_set);
  o.get("dim", m.dim);
  if (const json* g = o.find("generators")) {
    // Real entries for real matrices; [re, im] pairs for complex ones.
    bool complex = false;
    if (g->is_array() && !g->empty() && (*g)[0].is_array() && !(*g)[0].empty() && (*g)[0][0].is_array() &&
        !(*g)[0][0].empty() && (*g)[0][0][0].is_array())
      complex = true;
    if (complex)
      m.complex_generators = Obj::convert<decltype(m.complex_generators)>(*g, o.at("generators"));
    else
      m.generators = Obj::convert<decltype(m.generators)>(*g, o.at("generators"));
  }
  o.get("stretch", m.stretch);
  o.get("angles", m.angles);
  o.get("twists", m.twists);
  o.get("delta", m.delta);
  o.get("cert_radius", m.cert_radius);
  o.get("view", m.view);
  o.get("base", m.base);
  o.get("factor", m.factor);
  o.finish();

  if (m.view != "mobius" && m.view != "linear") Obj::fail(o.at("view"), "expected \"mobius\" or \"linear\"");
  if (m.dim != 2 && m.dim != 3 && m.kind != "linear") Obj::fail(o.at("dim"), "must be 2 or 3");
  if (m.kind == "word_metric" && m.generating_set.empty()) Obj::fail(o.at("generating_set"), "required field missing");
  if (m.kind == "scaled") {
    if (m.base.empty()) Obj::fail(o.at("base"), "required field missing");
    if (!(m.factor > 0.0)) Obj::fail(o.at("factor"), "must be positive");
  }
  if ((m.kind == "mobius" || m.kind == "linear") && m.generators.empty() && m.complex_generators.empty())
    Obj::fail(o.at("generators"), "required field missing");
  if (m.kind == "schottky") {
    if (m.stretch.empty()) m.stretch = {4.0};
    if (m.angles.empty()) m.angles = {0.0, 1.2};
  }
  if (m.delta && !(*m.delta >= 0.0)) Obj::fail(o.at("delta"), "must be nonnegative");
  if (!m.delta) {
    if (m.kind == "tree" || m.kind == "word_metric")
      m.delta = 0.0;
    else if (m.kind != "scaled")
      m.delta = kLog2;
  }
  return m;
}

VerifierSpec parse_verifier(const json& j, const std::string& path, const RunConfig& cfg) {
  Obj o(j, path);
  VerifierSpec v;
  v.name = o.require<std::string>("name");
  const auto& names = verifier_names();
  if (std::find(names.begin(), names.end(), v.name) == names.end())
    Obj::fail(o.at("name"), "unknown verifier \"" + v.name + "\"");
  v.K = cfg.K;
  o.get("X", v.X);
  o.get("Xstar", v.Xstar);
  o.get("model", v.model);
  o.get("S", v.S);
  o.get("rho", v.rho);
  o.get("tau", v.tau);
  o.get("L", v.L);
  o.get("K", v.K);
  o.get("delta", v.delta);
  o.get("D", v.D);
  o.get("alpha", v.alpha);
  o.get("beta", v.beta);
  o.get("C0", v.C0);
  o.get("n_max", v.n_max);
  o.get("window_L", v.window_L);
  o.get("n", v.n);
  o.get("ball_radius", v.ball_radius);
  o.get("F_radius", v.F_radius);
  o.get("subsets", v.subsets);
  if (const json* s = o.find("sweep")) {
    Obj so(*s, o.at("sweep"));
    SweepSpec sw;
    so.get("max_size", sw.max_size);
    so.get("max_length", sw.max_length);
    so.finish();
    if (sw.max_size < 1 || sw.max_length < 1) Obj::fail(o.at("sweep"), "sizes must be positive");
    v.sweep = sw;
  }
  o.get("dim", v.dim);
  o.get("count", v.count);
  o.get("probe_j", v.probe_j);
  o.finish();

  if (v.L.empty()) v.L = default_Ls(v.name);
  for (std::size_t i = 0; i < v.L.size(); ++i)
    if (!(v.L[i] > 0.0)) Obj::fail(o.at("L") + "[" + std::to_string(i) + "]", "window sizes must be positive");
  if (!(v.K >= 0.0)) Obj::fail(o.at("K"), "must be nonnegative");
  if (v.n_max < 1) Obj::fail(o.at("n_max"), "must be positive");

  auto need = [&](const std::string& key, const std::string& value) {
    if (value.empty()) Obj::fail(o.at(key), "required for verifier " + v.name);
  };
  if (v.name == "thm13" || v.name == "cor17" || v.name == "cor14") {
    need("X", v.X);
    need("Xstar", v.Xstar);
  } else if (v.name == "thm15") {
    need("Xstar", v.Xstar);
    need("S", v.S);
  } else if (v.name == "anosov") {
    need("rho", v.rho);
    need("tau", v.tau);
  } else if (v.name == "bf") {
    need("model", v.model);
    if (v.subsets.empty() && !v.sweep) Obj::fail(path, "bf needs \"subsets\" or \"sweep\"");
  } else if (v.name == "prop31") {
    need("model", v.model);
    need("S", v.S);
  } else if (v.name == "lemma25" || v.name == "lemma32") {
    need("model", v.model);
  } else if (v.name == "bochi") {
    if (v.dim != 2 && v.dim != 3) Obj::fail(o.at("dim"), "must be 2 or 3");
    if (v.count < 1) Obj::fail(o.at("count"), "must be positive");
  }
  return v;
}

RunConfig parse_config(const json& j, const std::string& path) {
  Obj o(j, path);
  RunConfig c;
  o.get("K", c.K);
  o.get("c_delta", c.c_delta);
  o.get("tolerance", c.tolerance);
  o.get("window_epsilon", c.window_epsilon);
  o.get("radius_cap", c.radius_cap);
  o.get("reference_factor", c.reference_factor);
  o.get("reference_n_max", c.reference_n_max);
  o.get("max_frontier", c.max_frontier);
  o.get("search_radius", c.search_radius);
  o.get("k_max", c.k_max);
  o.get("row_limit", c.row_limit);
  o.finish();
  if (c.radius_cap < 1) Obj::fail(o.at("radius_cap"), "must be positive");
  if (c.k_max < 1) Obj::fail(o.at("k_max"), "must be positive");
  if (!(c.reference_factor >= 1.0)) Obj::fail(o.at("reference_factor"), "must be at least 1");
  if (c.reference_n_max < 1) Obj::fail(o.at("reference_n_max"), "must be positive");
  if (!(c.tolerance >= 0.0)) Obj::fail(o.at("tolerance"), "must be nonnegative");
  return c;
}

template <typename T>
void put_opt(json& j, const char* key, const std::optional<T>& v) {
  if (v) j[key] = *v;
}

}  // namespace

const std::vector<std::string>& verifier_names() {
  static const std::vector<std::string> names{"thm13", "thm15",  "cor14",   "cor17",   "anosov",
                                              "bf",    "bochi", "prop31", "lemma25", "lemma32"};
  return names;
}

ModelSpec expand_preset(const std::string& preset, const std::string& name) {
  ModelSpec m;
  m.name = name;
  m.preset = preset;
  if (preset == "cor17-default") {
    m.kind = "schottky";
    m.stretch = {4.0};
    m.angles = {0.0, 1.2};
    m.dim = 2;
    m.delta = 2.0 * kLog2;
    return m;
  }
  if (preset == "unit-tree") {
    m.kind = "tree";
    return m;
  }
  throw InputError("unknown preset \"" + preset + "\"");
}

Scenario parse_scenario(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError("scenario: syntax error at " + position(text, e.byte > 0 ? e.byte - 1 : 0) + ": " +
                     std::string(e.what()));
  }
  Obj o(j, "");
  Scenario s;
  o.get("rank", s.rank);
  if (s.rank < 1 || s.rank > 26) Obj::fail("rank", "must be between 1 and 26");
  o.get("seed", s.seed);
  if (const json* c = o.find("config")) s.config = parse_config(*c, "config");

  auto list = [&](const char* key) -> const json* {
    const json* v = o.find(key);
    if (v && !v->is_array()) Obj::fail(key, "expected an array");
    return v;
  };
  if (const json* v = list("generating_sets"))
    for (std::size_t i = 0; i < v->size(); ++i)
      s.generating_sets.push_back(parse_set((*v)[i], "generating_sets[" + std::to_string(i) + "]"));
  if (const json* v = list("models"))
    for (std::size_t i = 0; i < v->size(); ++i)
      s.models.push_back(parse_model((*v)[i], "models[" + std::to_string(i) + "]"));
  if (const json* v = list("verifiers"))
    for (std::size_t i = 0; i < v->size(); ++i)
      s.verifiers.push_back(parse_verifier((*v)[i], "verifiers[" + std::to_string(i) + "]", s.config));
  o.finish();

  // Cross references.
  std::set<std::string> sets, models;
  for (std::size_t i = 0; i < s.generating_sets.size(); ++i) {
    const auto& g = s.generating_sets[i];
    const std::string p = "generating_sets[" + std::to_string(i) + "]";
    if (!sets.insert(g.name).second) Obj::fail(p + ".name", "duplicate name \"" + g.name + "\"");
    if (g.standard && !g.weights.empty() && g.weights.size() != static_cast<std::size_t>(s.rank))
      Obj::fail(p + ".weights", "expected one weight per generator");
    const Alphabet alphabet(s.rank);
    for (std::size_t k = 0; k < g.elements.size(); ++k) {
      try {
        if (Word::parse(g.elements[k].first, alphabet).empty()) throw InputError("identity is not allowed");
      } catch (const InputError& e) {
        Obj::fail(p + ".elements[" + std::to_string(k) + "].word", e.what());
      }
    }
  }
  for (std::size_t i = 0; i < s.models.size(); ++i) {
    const auto& m = s.models[i];
    const std::string p = "models[" + std::to_string(i) + "]";
    if (!models.insert(m.name).second) Obj::fail(p + ".name", "duplicate name \"" + m.name + "\"");
    if (!m.generating_set.empty() && !sets.count(m.generating_set))
      Obj::fail(p + ".generating_set", "no generating set named \"" + m.generating_set + "\"");
    if (m.kind == "scaled" && !models.count(m.base))
      Obj::fail(p + ".base", "no earlier model named \"" + m.base + "\"");
  }
  for (std::size_t i = 0; i < s.verifiers.size(); ++i) {
    const auto& v = s.verifiers[i];
    const std::string p = "verifiers[" + std::to_string(i) + "]";
    for (const auto& [key, value] : {std::pair<const char*, const std::string*>{"X", &v.X},
                                     {"Xstar", &v.Xstar},
                                     {"model", &v.model},
                                     {"rho", &v.rho},
                                     {"tau", &v.tau}})
      if (!value->empty() && !models.count(*value))
        Obj::fail(p + "." + key, "no model named \"" + *value + "\"");
    if (!v.S.empty() && !sets.count(v.S)) Obj::fail(p + ".S", "no generating set named \"" + v.S + "\"");
  }
  return s;
}

std::string emit_scenario(const Scenario& s) {
  json j;
  j["rank"] = s.rank;
  j["seed"] = s.seed;
  const RunConfig& c = s.config;
  j["config"] = {{"K", c.K},
                 {"c_delta", c.c_delta},
                 {"tolerance", c.tolerance},
                 {"window_epsilon", c.window_epsilon},
                 {"radius_cap", c.radius_cap},
                 {"reference_factor", c.reference_factor},
                 {"reference_n_max", c.reference_n_max},
                 {"max_frontier", c.max_frontier},
                 {"search_radius", c.search_radius},
                 {"k_max", c.k_max},
                 {"row_limit", c.row_limit}};
  j["generating_sets"] = json::array();
  for (const auto& g : s.generating_sets) {
    json e{{"name", g.name}};
    if (g.standard) {
      e["standard"] = true;
      if (!g.weights.empty()) e["weights"] = g.weights;
    } else {
      json els = json::array();
      for (const auto& [w, wt] : g.elements) els.push_back({{"word", w}, {"weight", wt}});
      e["elements"] = els;
    }
    j["generating_sets"].push_back(e);
  }
  j["models"] = json::array();
  for (const auto& m : s.models) {
    json e{{"name", m.name}};
    put_opt(e, "preset", m.preset);
    e["kind"] = m.kind;
    if (!m.weights.empty()) e["weights"] = m.weights;
    if (!m.generating_set.empty()) e["generating_set"] = m.generating_set;
    e["dim"] = m.dim;
    if (!m.generators.empty()) e["generators"] = m.generators;
    if (!m.complex_generators.empty()) e["generators"] = m.complex_generators;
    if (!m.stretch.empty()) e["stretch"] = m.stretch;
    if (!m.angles.empty()) e["angles"] = m.angles;
    if (!m.twists.empty()) e["twists"] = m.twists;
    put_opt(e, "delta", m.delta);
    e["cert_radius"] = m.cert_radius;
    e["view"] = m.view;
    if (!m.base.empty()) e["base"] = m.base;
    e["factor"] = m.factor;
    j["models"].push_back(e);
  }
  j["verifiers"] = json::array();
  for (const auto& v : s.verifiers) {
    json e{{"name", v.name}};
    for (const auto& [key, value] : {std::pair<const char*, const std::string*>{"X", &v.X},
                                     {"Xstar", &v.Xstar},
                                     {"model", &v.model},
                                     {"S", &v.S},
                                     {"rho", &v.rho},
                                     {"tau", &v.tau}})
      if (!value->empty()) e[key] = *value;
    if (!v.L.empty()) e["L"] = v.L;
    e["K"] = v.K;
    put_opt(e, "delta", v.delta);
    put_opt(e, "D", v.D);
    put_opt(e, "alpha", v.alpha);
    put_opt(e, "beta", v.beta);
    put_opt(e, "C0", v.C0);
    e["n_max"] = v.n_max;
    e["window_L"] = v.window_L;
    e["n"] = v.n;
    e["ball_radius"] = v.ball_radius;
    e["F_radius"] = v.F_radius;
    if (!v.subsets.empty()) e["subsets"] = v.subsets;
    if (v.sweep) e["sweep"] = {{"max_size", v.sweep->max_size}, {"max_length", v.sweep->max_length}};
    e["dim"] = v.dim;
    e["count"] = v.count;
    put_opt(e, "probe_j", v.probe_j);
    j["verifiers"].push_back(e);
  }
  return j.dump(2) + "\n";
}

}  // namespace lenspec
