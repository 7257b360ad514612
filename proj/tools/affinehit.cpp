// Command-line front end: eval, table, verify, mc, figures.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "affinehit/bes_hitting.hpp"
#include "affinehit/errors.hpp"
#include "affinehit/figures.hpp"
#include "affinehit/mc/oracle.hpp"
#include "affinehit/rbm_hitting.hpp"
#include "affinehit/registry.hpp"
#include "affinehit/verify.hpp"

namespace {

using namespace affinehit;
using nlohmann::ordered_json;

constexpr int kOk = 0;
constexpr int kInvalid = 2;
constexpr int kNoConvergence = 3;
constexpr int kVerifyFailed = 4;

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string params_text(const registry::Formula& f, const registry::Bindings& b) {
  std::string s;
  for (const auto& p : f.params) {
    if (!s.empty()) s += ", ";
    s += p + "=" + num(b.find(p)->second);
  }
  return s;
}

// Default < AFFINEHIT_SEED < --seed.
std::uint64_t default_seed() {
  if (const char* env = std::getenv("AFFINEHIT_SEED"); env && *env) {
    try {
      std::size_t used = 0;
      const std::uint64_t s = std::stoull(env, &used, 0);
      if (used == std::string(env).size()) return s;
    } catch (const std::exception&) {
    }
    throw DomainError(std::string("AFFINEHIT_SEED is not an unsigned integer: ") + env);
  }
  return mc::McConfig{}.seed;
}

struct McFlags {
  std::size_t paths = mc::McConfig{}.paths;
  double dt = mc::McConfig{}.dt;
  double dt_max = mc::McConfig{}.dt_max;
  std::optional<std::uint64_t> seed;
  double horizon = 0.0;
  unsigned threads = 0;
  bool no_correction = false;
  bool fixed_step = false;

  void attach(CLI::App* app) {
    app->add_option("--paths", paths, "number of simulated paths")->check(CLI::PositiveNumber);
    app->add_option("--dt", dt, "smallest time step")->check(CLI::PositiveNumber);
    app->add_option("--dt-max", dt_max, "largest time step")->check(CLI::PositiveNumber);
    app->add_option("--seed", seed, "RNG seed (default: $AFFINEHIT_SEED or built-in)");
    app->add_option("--horizon", horizon, "simulation horizon, 0 for the estimator default")
        ->check(CLI::NonNegativeNumber);
    app->add_option("--threads", threads, "worker threads, 0 for one per core");
    app->add_flag("--no-correction", no_correction, "disable the bridge crossing correction");
    app->add_flag("--fixed-step", fixed_step, "use dt everywhere");
  }

  mc::McConfig config() const {
    mc::McConfig c;
    c.paths = paths;
    c.dt = dt;
    c.dt_max = dt_max;
    c.seed = seed ? *seed : default_seed();
    c.horizon = horizon;
    c.threads = threads;
    c.crossing_correction = !no_correction;
    c.adaptive = !fixed_step;
    return c;
  }
};

void add_param_flags(CLI::App* app, registry::Bindings& bindings) {
  for (const std::string& name : registry::parameter_names()) {
    app->add_option_function<double>(
        "--" + name, [&bindings, name](double v) { bindings[name] = v; }, name);
  }
}

// ---------------------------------------------------------------- eval

int run_eval(const std::string& id, const registry::Bindings& bindings,
             const SeriesOptions& opt, const std::string& format) {
  const registry::Formula* f = registry::find(id);
  if (!f) throw DomainError("unknown formula '" + id + "'; see `eval --list`");
  const SeriesResult r = registry::evaluate(*f, bindings, opt);
  const std::optional<double> mass = f->total_mass ? f->total_mass(bindings) : std::nullopt;

  if (format == "json") {
    ordered_json j;
    j["formula"] = f->id;
    ordered_json p = ordered_json::object();
    for (const auto& name : f->params) p[name] = bindings.find(name)->second;
    j["params"] = p;
    j["value"] = r.value;
    j["terms_used"] = r.terms_used;
    j["tail_bound"] = r.tail_bound;
    j["continuity_limit"] = r.continuity_limit;
    if (mass) j["total_mass"] = *mass;
    std::cout << j.dump(2) << "\n";
  } else if (format == "csv") {
    std::cout << "formula,value,terms_used,tail_bound" << (mass ? ",total_mass" : "") << "\n"
              << f->id << "," << num(r.value) << "," << r.terms_used << ","
              << num(r.tail_bound) << (mass ? "," + num(*mass) : "") << "\n";
  } else {
    std::cout << f->id << "(" << params_text(*f, bindings) << ") = " << num(r.value) << "\n"
              << "terms_used = " << r.terms_used << "\n"
              << "tail_bound = " << num(r.tail_bound) << "\n";
    if (r.continuity_limit) std::cout << "note: value is a limit by continuity\n";
    if (mass) {
      std::cout << "total_mass = " << num(*mass)
                << " (defective law: the line is missed with probability "
                << num(1.0 - *mass) << ")\n";
    }
  }
  return kOk;
}

int list_formulas(const std::string& format) {
  if (format == "json") {
    ordered_json arr = ordered_json::array();
    for (const auto& f : registry::formulas()) {
      arr.push_back({{"id", f.id}, {"aliases", f.aliases}, {"params", f.params},
                     {"symbols", f.symbols}, {"summary", f.summary}});
    }
    std::cout << arr.dump(2) << "\n";
    return kOk;
  }
  for (const auto& f : registry::formulas()) {
    std::string flags;
    for (const auto& p : f.params) flags += " --" + p;
    std::cout << f.id << flags << "\n    " << f.summary;
    if (!f.aliases.empty()) {
      std::cout << " (alias:";
      for (const auto& a : f.aliases) std::cout << " " << a;
      std::cout << ")";
    }
    std::cout << "\n";
  }
  return kOk;
}

// ---------------------------------------------------------------- table

struct TableArgs {
  std::string process = "rbm";
  double a = NAN, b = 0.0, delta = 3.0, x = 0.0;
  double to = 0.0;
  int points = 600;
  std::string out;
};

std::vector<double> table_grid(const AffineBoundary& bdy, double to, int n) {
  std::vector<double> g;
  const double end = bdy.window_end();
  if (to <= 0.0) {
    to = std::isfinite(end) ? end : 10.0 * bdy.a * std::max(1.0, bdy.a);
  }
  // A finite window is open at its end.
  const bool open = std::isfinite(end) && to >= end;
  const double h = open ? end / (n + 1) : to / n;
  for (int i = 1; i <= n; ++i) g.push_back(h * i);
  return g;
}

int run_table(const TableArgs& t, std::ostream& os) {
  if (!(t.a > 0.0)) throw DomainError("table: --a must be > 0");
  if (t.points < 1) throw DomainError("table: --points must be >= 1");
  const AffineBoundary bdy{t.a, t.b};
  const auto grid = table_grid(bdy, t.to, t.points);
  auto cell = [](std::optional<double> v) { return v ? num(*v) : std::string(); };

  if (t.process == "rbm") {
    os << "u,survival,density_delta,density_ap\n";
    for (double u : grid) {
      os << num(u) << "," << num(rbm_survival(bdy, u).value) << ","
         << num(rbm_density_delta(bdy, u).value) << "," << num(rbm_density_ap(bdy, u).value)
         << "\n";
    }
    return kOk;
  }
  // BES(delta) from x.
  if (!(t.delta > 0.0)) throw DomainError("table: --delta must be > 0");
  const bool three = t.delta == 3.0;
  const bool above = t.x > t.a;
  if (above && !three) throw DomainError("table: a start above the line needs --delta 3");
  os << "t,survival,density_ap,density_closed\n";
  for (double u : grid) {
    std::optional<double> surv, ap, closed;
    if (three && t.x == 0.0) surv = bes3_survival(bdy, u).value;
    if (above) {
      closed = bes3_above_line_density(t.x, t.a, t.b, u);
    } else {
      ap = bessel_ap_density(t.delta, t.x, bdy, u).value;
      if (three && t.x == 0.0 && t.b == 0.0) closed = bes3_level_density(t.a, u).value;
    }
    os << num(u) << "," << cell(surv) << "," << cell(ap) << "," << cell(closed) << "\n";
  }
  return kOk;
}

// ---------------------------------------------------------------- verify

ordered_json check_json(const verify::Check& c) {
  ordered_json p = ordered_json::object();
  for (const auto& [k, v] : c.params) p[k] = v;
  ordered_json j{{"name", c.name}, {"params", p}, {"expected", c.expected},
                 {"got", c.got},   {"tolerance", c.tolerance}};
  if (c.statistical()) {
    j["std_error"] = c.std_error;
    j["z"] = c.z;
  }
  j["passed"] = c.passed;
  return j;
}

int emit_reports(const std::vector<verify::Report>& reports, const std::string& format,
                 bool timing, bool failures_only) {
  bool ok = true;
  for (const auto& r : reports) ok = ok && r.passed;
  if (format == "plain") {
    for (const auto& r : reports) {
      std::size_t failed = 0;
      for (const auto& c : r.checks) failed += !c.passed;
      std::cout << r.name << ": " << (r.passed ? "PASS" : "FAIL") << " (" << r.checks.size()
                << " checks, " << failed << " failed)";
      if (timing) std::cout << " " << num(r.seconds) << " s";
      std::cout << "\n";
      for (const auto& c : r.checks) {
        if (failures_only && c.passed) continue;
        std::cout << "  " << (c.passed ? "ok   " : "FAIL ") << c.name;
        for (const auto& [k, v] : c.params) std::cout << " " << k << "=" << num(v);
        std::cout << " expected=" << num(c.expected) << " got=" << num(c.got);
        if (c.statistical()) std::cout << " z=" << num(c.z);
        else std::cout << " tol=" << num(c.tolerance);
        std::cout << "\n";
      }
      for (const auto& n : r.notes) std::cout << "  note: " << n << "\n";
    }
  } else {
    ordered_json arr = ordered_json::array();
    for (const auto& r : reports) {
      ordered_json checks = ordered_json::array();
      std::size_t failed = 0;
      for (const auto& c : r.checks) {
        failed += !c.passed;
        if (!failures_only || !c.passed) checks.push_back(check_json(c));
      }
      ordered_json j{{"name", r.name}, {"passed", r.passed}, {"checks_total", r.checks.size()},
                     {"checks_failed", failed}};
      if (timing) j["seconds"] = r.seconds;
      j["checks"] = checks;
      j["notes"] = r.notes;
      arr.push_back(j);
    }
    std::cout << ordered_json{{"passed", ok}, {"reports", arr}}.dump(2) << "\n";
  }
  return ok ? kOk : kVerifyFailed;
}

// ---------------------------------------------------------------- mc

struct McTarget {
  std::string closed_form;  // registry id
  std::function<mc::McEstimate(const registry::Bindings&, const mc::McConfig&)> run;
};

const std::map<std::string, McTarget>& mc_targets() {
  using B = const registry::Bindings&;
  using C = const mc::McConfig&;
  auto g = [](B b, const char* k) { return b.find(k)->second; };
  auto process = [g](B b) {
    const double d = g(b, "delta");
    return d == 1.0 ? ProcessSpec::rbm() : ProcessSpec::bes(d);
  };
  static const std::map<std::string, McTarget> t{
      {"hit-survival",
       {"hit-survival",
        [=](B b, C c) {
          return mc::estimate_hit_survival(process(b), {g(b, "a"), g(b, "b")}, g(b, "u"), c);
        }}},
      {"wedge",
       {"wedge-survival",
        [=](B b, C c) {
          return mc::estimate_wedge_survival({g(b, "alpha"), g(b, "beta"), g(b, "a"), g(b, "b")},
                                             c);
        }}},
      {"bridge-wedge",
       {"bridge-wedge",
        [=](B b, C c) {
          const WedgeSpec w{g(b, "alpha"), g(b, "beta"), g(b, "a"), g(b, "b")};
          return mc::estimate_bridge_event({ProcessSpec::bm(), g(b, "u"), g(b, "y")},
                                           mc::BridgeEvent::stays_in_wedge(w), c);
        }}},
      {"bes3-bridge-below-line",
       {"bes3-bridge-below-line",
        [=](B b, C c) {
          const double y = g(b, "y"), u = g(b, "u"), a = g(b, "a"), s = g(b, "sign");
          if (s == 1.0) {
            return mc::estimate_bridge_event({ProcessSpec::bes(3.0), u, y},
                                             mc::BridgeEvent::stays_below_line(a, 1.0), c);
          }
          if (s != -1.0) throw DomainError("--sign must be +1 or -1");
          return mc::estimate_bridge_event({ProcessSpec::bes(3.0, y), u, 0.0},
                                           mc::BridgeEvent::stays_below_line(a - u, 1.0), c);
        }}},
      {"bridge-max",
       {"bridge-max",
        [=](B b, C c) {
          return mc::estimate_bridge_event({process(b), g(b, "u"), 0.0},
                                           mc::BridgeEvent::max_below(g(b, "y")), c);
        }}},
      {"bridge-sup-affine",
       {"bridge-sup-affine",
        [=](B b, C c) {
          return mc::estimate_bridge_event({process(b), g(b, "u"), 0.0},
                                           mc::BridgeEvent::stays_below_line(g(b, "a"), -g(b, "b")),
                                           c);
        }}},
      {"hit-location",
       {"rbm-hit-location-tail",
        [=](B b, C c) {
          return mc::estimate_hit_location_cdf(ProcessSpec::rbm(), {g(b, "a"), g(b, "b")},
                                               g(b, "y"), c);
        }}},
      {"last-hit",
       {"last-hit",
        [=](B b, C c) {
          return mc::estimate_last_hit_cdf(process(b), g(b, "b"), g(b, "a"), g(b, "t"), c);
        }}},
  };
  return t;
}

int run_mc(const std::string& name, const registry::Bindings& bindings, const mc::McConfig& cfg) {
  const auto it = mc_targets().find(name);
  if (it == mc_targets().end()) {
    std::string known;
    for (const auto& [k, v] : mc_targets()) known += " " + k;
    throw DomainError("unknown mc target '" + name + "'; known:" + known);
  }
  const registry::Formula* f = registry::find(it->second.closed_form);
  for (const auto& p : f->params) {
    if (!bindings.count(p)) throw DomainError("mc " + name + ": missing --" + p);
  }
  std::optional<double> closed;
  try {
    closed = registry::evaluate(*f, bindings).value;
  } catch (const UnsupportedError&) {
  }
  const mc::McEstimate e = it->second.run(bindings, cfg);

  ordered_json p = ordered_json::object();
  for (const auto& k : f->params) p[k] = bindings.find(k)->second;
  ordered_json j{{"target", name}, {"params", p}, {"estimate", e.value}, {"stderr", e.std_error}};
  if (closed) {
    // Binomial standard error at the closed-form value, floored at 1/n.
    const double n = static_cast<double>(e.paths);
    const double se = std::max(std::sqrt(*closed * (1.0 - *closed) / n), 1.0 / n);
    j["closed_form"] = *closed;
    j["z_score"] = (e.value - *closed) / se;
  } else {
    j["closed_form"] = nullptr;
    j["z_score"] = nullptr;
  }
  j["unresolved"] = e.unresolved;
  j["config"] = {{"paths", e.config.paths},
                 {"dt", e.config.dt},
                 {"dt_max", e.config.dt_max},
                 {"seed", e.config.seed},
                 {"horizon", e.config.horizon},
                 {"crossing_correction", e.config.crossing_correction},
                 {"adaptive", e.config.adaptive}};
  std::cout << j.dump(2) << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Crossing-time distributions for straight-line barriers"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string format;
  app.add_option("--format", format, "plain, csv or json (default: json for verify, else plain)")
      ->check(CLI::IsMember({"plain", "csv", "json"}));

  // eval
  auto* eval = app.add_subcommand("eval", "evaluate a formula");
  std::string formula_id;
  bool list = false;
  registry::Bindings eval_bindings;
  SeriesOptions series_opt;
  eval->add_option("formula", formula_id, "formula id (see --list)");
  eval->add_flag("--list", list, "list formula ids and their parameters");
  eval->add_option("--tol", series_opt.tol, "series truncation tolerance")
      ->check(CLI::PositiveNumber);
  eval->add_option("--max-terms", series_opt.max_terms, "series term budget");
  add_param_flags(eval, eval_bindings);

  // table
  auto* table = app.add_subcommand("table", "CSV table of a hitting-time law on a time grid");
  TableArgs targs;
  table->add_option("process", targs.process, "rbm or bes")
      ->check(CLI::IsMember({"rbm", "bes"}))
      ->capture_default_str();
  table->add_option("--a", targs.a, "intercept")->required();
  table->add_option("--b", targs.b, "slope");
  table->add_option("--delta", targs.delta, "Bessel dimension (bes)");
  table->add_option("--x", targs.x, "starting point (bes)");
  table->add_option("--to", targs.to, "grid end (default: window end or 10 a max(1, a))");
  table->add_option("--points", targs.points, "grid size");
  table->add_option("--out", targs.out, "output file (default: stdout)");

  // verify
  auto* ver = app.add_subcommand("verify", "run a verification suite");
  std::string suite = "identities";
  int criterion = 0;
  bool timing = false, failures_only = false;
  std::string figures_dir;
  McFlags vflags;
  ver->add_option("--suite", suite, "identities, symmetry, scaling, special, mc or all")
      ->capture_default_str();
  ver->add_option("--criterion", criterion, "run acceptance criterion 1..9 instead")
      ->check(CLI::Range(1, 9));
  ver->add_option("--figures-dir", figures_dir, "where criterion 8 writes its CSV files");
  ver->add_flag("--timing", timing, "include wall-clock seconds");
  ver->add_flag("--failures-only", failures_only, "list failing checks only");
  vflags.attach(ver);

  // mc
  auto* mcc = app.add_subcommand("mc", "Monte-Carlo estimate against the closed form");
  std::string mc_target;
  registry::Bindings mc_bindings;
  McFlags mflags;
  mcc->add_option("target", mc_target,
                  "hit-survival, wedge, bridge-wedge, bes3-bridge-below-line, bridge-max, "
                  "bridge-sup-affine, hit-location or last-hit")
      ->required();
  add_param_flags(mcc, mc_bindings);
  mflags.attach(mcc);

  // figures
  auto* fig = app.add_subcommand("figures", "write fig1.csv and fig2.csv");
  std::string fig_out;
  fig->add_option("--out", fig_out, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInvalid;
  }

  if (format.empty()) format = *ver ? "json" : "plain";

  try {
    if (*eval) {
      if (list) return list_formulas(format);
      if (formula_id.empty()) throw DomainError("eval: a formula id is required");
      return run_eval(formula_id, eval_bindings, series_opt, format);
    }
    if (*table) {
      if (targs.out.empty()) return run_table(targs, std::cout);
      std::ofstream os(targs.out);
      if (!os) throw std::runtime_error("cannot open " + targs.out);
      const int rc = run_table(targs, os);
      if (!os.flush()) throw std::runtime_error("write failed: " + targs.out);
      return rc;
    }
    if (*ver) {
      verify::Options opt;
      opt.mc = vflags.config();
      opt.figures_dir = figures_dir;
      std::vector<verify::Report> reports;
      if (criterion) {
        reports.push_back(verify::run_criterion(criterion, opt));
      } else if (suite == "all") {
        for (const char* s : {"identities", "symmetry", "scaling", "special", "mc"}) {
          reports.push_back(verify::run_suite(verify::parse_suite(s), opt));
        }
      } else {
        reports.push_back(verify::run_suite(verify::parse_suite(suite), opt));
      }
      return emit_reports(reports, format, timing, failures_only);
    }
    if (*mcc) return run_mc(mc_target, mc_bindings, mflags.config());
    if (*fig) {
      for (const auto& p : write_figures(fig_out)) std::cout << p.string() << "\n";
      return kOk;
    }
  } catch (const ConvergenceError& e) {
    std::cerr << "error: " << e.what() << " (partial value " << num(e.partial_value())
              << ", bound " << num(e.achieved_bound()) << " after " << e.terms()
              << " terms)\n";
    return kNoConvergence;
  } catch (const UnsupportedError& e) {
    std::cerr << "unsupported: " << e.what() << "\n";
    return kInvalid;
  } catch (const DomainError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kOk;
}
