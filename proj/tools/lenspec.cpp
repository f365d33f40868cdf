#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "lenspec/errors.hpp"
#include "lenspec/scenario.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace lenspec;

namespace {

struct Common {
  std::string scenario;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> max_frontier;
  std::string format = "json";
};

Scenario load(const Common& c) {
  if (c.scenario.empty()) throw InputError("--scenario is required");
  std::ifstream in(c.scenario);
  if (!in) throw InputError("cannot read scenario file " + c.scenario);
  std::stringstream ss;
  ss << in.rdbuf();
  Scenario s = parse_scenario(ss.str());
  if (c.seed) s.seed = *c.seed;
  if (c.max_frontier) s.config.max_frontier = *c.max_frontier;
  return s;
}

void write(const Common& c, const std::string& file, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  fs::create_directories(c.out);
  std::ofstream(fs::path(c.out) / file) << text;
}

std::string num(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

json jnum(double x) {
  if (std::isfinite(x)) return x;
  return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
}

int spectrum(const Common& c, const std::string& model, int radius) {
  const Scenario s = load(c);
  const ModelRegistry reg(s);
  const ActionModel& A = reg.get(model).model;
  BracketOptions b{s.config.k_max, s.config.c_delta};
  const auto classes = enumerate_conj_classes(reg.alphabet(), radius);
  if (c.format == "csv") {
    std::string text = "class,length,ell_lo,ell_hi\n";
    for (const auto& cl : classes) {
      const auto l = stable_length(A, cl, b);
      text += cl.rep.str() + "," + std::to_string(cl.rep.size()) + "," + num(l.lo) + "," + num(l.hi) + "\n";
    }
    write(c, "spectrum.csv", text);
  } else {
    json rows = json::array();
    for (const auto& cl : classes) {
      const auto l = stable_length(A, cl, b);
      rows.push_back({{"class", cl.rep.str()}, {"ell", {{"lo", jnum(l.lo)}, {"hi", jnum(l.hi)}, {"exact", l.exact}}}});
    }
    json j{{"model", model}, {"radius", radius}, {"classes", rows}};
    write(c, "spectrum.json", j.dump(2) + "\n");
  }
  return 0;
}

int dilation(const Common& c, const std::string& X, const std::string& Xstar, const std::vector<double>& Ls) {
  const Scenario s = load(c);
  const ModelRegistry reg(s);
  WindowOptions o;
  o.epsilon = s.config.window_epsilon;
  o.radius_cap = s.config.radius_cap;
  o.row_limit = s.config.row_limit;
  o.bracket = {s.config.k_max, s.config.c_delta};
  const auto ws = dilation_windows(reg.get(Xstar).model, reg.get(X).model, Ls, o);
  if (c.format == "csv") {
    std::string text = "L,sup_lo,sup_hi,inf_lo,inf_hi,radius,covered,members\n";
    for (const auto& w : ws)
      text += num(w.L) + "," + num(w.sup.lo) + "," + num(w.sup.hi) + "," + num(w.inf.lo) + "," + num(w.inf.hi) + "," +
              std::to_string(w.radius) + "," + (w.covered ? "1" : "0") + "," + std::to_string(w.members) + "\n";
    write(c, "dilation.csv", text);
  } else {
    json rows = json::array();
    for (const auto& w : ws)
      rows.push_back({{"L", w.L},
                      {"sup", {{"lo", jnum(w.sup.lo)}, {"hi", jnum(w.sup.hi)}}},
                      {"inf", {{"lo", jnum(w.inf.lo)}, {"hi", jnum(w.inf.hi)}}},
                      {"radius", w.radius},
                      {"covered", w.covered},
                      {"members", w.members},
                      {"argmax", w.argmax ? w.argmax->str() : ""}});
    json j{{"X", X}, {"Xstar", Xstar}, {"windows", rows}};
    write(c, "dilation.json", j.dump(2) + "\n");
  }
  return 0;
}

int verify(const Common& c, const std::string& name) {
  const Scenario s = load(c);
  const RunReport r = run_scenario(s, name);
  if (c.format == "csv") {
    write(c, "classes.csv", emit_report_csv(r));
  } else {
    write(c, "report.json", emit_report_json(r));
  }
  if (!c.out.empty()) {
    write(c, "timing.json", emit_timing_json(r));
    if (c.format == "json") write(c, "classes.csv", emit_report_csv(r));
  }
  for (const auto& o : r.outcomes)
    if (o.status != "ok") std::cerr << o.name << ": " << o.status << ": " << o.message << "\n";
  for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
  return r.exit_code();
}

int jsr(const Common& c, const std::string& model, int n_max) {
  const Scenario s = load(c);
  const ModelRegistry reg(s);
  const auto& m = reg.get(model);
  if (!m.linear) throw InputError("model \"" + model + "\" is not linear");
  std::vector<Eigen::MatrixXd> S(m.linear->generators().begin(), m.linear->generators().end());
  const auto r = jsr_bracket(S, n_max, s.config.max_frontier);
  json j{{"model", model}, {"n_max", n_max}, {"log_jsr", {{"lo", jnum(r.log_jsr.lo)}, {"hi", jnum(r.log_jsr.hi)}}}};
  json sig = json::array(), lam = json::array();
  for (double x : r.log_sigma) sig.push_back(jnum(x));
  for (double x : r.log_lambda) lam.push_back(jnum(x));
  j["log_sigma"] = sig;
  j["log_lambda"] = lam;
  write(c, "jsr.json", j.dump(2) + "\n");
  return 0;
}

int delta(const Common& c, const std::string& d1, const std::string& d2, int radius) {
  const Scenario s = load(c);
  const ModelRegistry reg(s);
  WindowOptions o;
  o.epsilon = s.config.window_epsilon;
  o.bracket = {s.config.k_max, s.config.c_delta};
  const auto r = delta_metric(reg.get(d1).model, reg.get(d2).model, radius, o);
  auto b = [](const LengthBracket& x) { return json{{"lo", jnum(x.lo)}, {"hi", jnum(x.hi)}}; };
  json j{{"d1", d1}, {"d2", d2},           {"radius", radius},         {"delta", b(r.delta)},
         {"dil12", b(r.dil12)}, {"dil21", b(r.dil21)}, {"degenerate", r.degenerate}};
  write(c, "delta.json", j.dump(2) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stable lengths, dilations and joint stable lengths for free-group actions"};
  app.require_subcommand(1);
  Common c;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--scenario", c.scenario, "Scenario file (JSON)")->required();
    sub->add_option("--out", c.out, "Output directory (default: stdout)");
    sub->add_option("--seed", c.seed, "Override the scenario seed");
    sub->add_option("--max-frontier", c.max_frontier, "Override the enumeration frontier cap");
    sub->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  };

  std::string model, X, Xstar, name;
  std::vector<double> Ls{4.0};
  int radius = 6, n_max = 10;

  auto* spec = app.add_subcommand("spectrum", "Enumerate conjugacy classes with stable lengths");
  common(spec);
  spec->add_option("--model", model)->required();
  spec->add_option("--radius", radius, "Maximal cyclic length");

  auto* dil = app.add_subcommand("dilation", "Windowed dilation sup of Xstar over X");
  common(dil);
  dil->add_option("--X", X)->required();
  dil->add_option("--Xstar", Xstar)->required();
  dil->add_option("--L", Ls, "Window sizes");

  auto* ver = app.add_subcommand("verify", "Run the scenario's verifiers");
  common(ver);
  ver->add_option("name", name, "Verifier, or all")
      ->required()
      ->check(CLI::IsMember([] {
        auto v = verifier_names();
        v.push_back("all");
        return v;
      }()));

  auto* js = app.add_subcommand("jsr", "Joint spectral radius bracket of a linear model");
  common(js);
  js->add_option("--model", model)->required();
  js->add_option("--n-max", n_max, "Product length");

  std::string d1, d2;
  auto* dm = app.add_subcommand("delta", "Log of the two-sided dilation between two models");
  common(dm);
  dm->add_option("--d1", d1)->required();
  dm->add_option("--d2", d2)->required();
  dm->add_option("--radius", radius, "Maximal cyclic length");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*spec) return spectrum(c, model, radius);
    if (*dil) return dilation(c, X, Xstar, Ls);
    if (*ver) return verify(c, name);
    if (*js) return jsr(c, model, n_max);
    if (*dm) return delta(c, d1, d2, radius);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ResourceError& e) {
    std::cerr << "resource cap: " << e.what() << "\n";
    return 3;
  } catch (const SearchExhausted& e) {
    std::cerr << "resource cap: " << e.what() << "\n";
    return 3;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
