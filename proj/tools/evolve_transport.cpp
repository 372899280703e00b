// Command-line front end of the transport verification lab.
//
//   evolve_transport list
//   evolve_transport run <scenario> --field one --t 0 [--h] [--order] [--tol]
//   evolve_transport sweep <scenario> --param h|order|mc --grid 0.1,0.01,...
//   evolve_transport validate <scenario> [--t] [--samples]
//   evolve_transport all
//
// Exit status: 0 when every check passes, 1 when a residual is over its
// tolerance, 2 on configuration or scenario errors.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "evolve/config.hpp"
#include "evolve/evolve.hpp"
#include "evolve/report_io.hpp"

namespace {

using namespace evolve;

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kConfig = 2;

struct CommonFlags {
  std::string config;
  std::string out;
  std::string format;
};

// CLI11 leaves unset options untouched; these sentinels mark "not given".
struct CliValues {
  std::string scenario;
  std::string field;
  double t = std::numeric_limits<double>::quiet_NaN();
  double h = 0.0;
  int order = 0;
  double tol = 0.0;
  int samples = 0;
  long seed = -1;
  std::string param;
  std::string grid;
  int replicates = 16;
};

RunSettings cli_settings(const CliValues& v, const CommonFlags& c) {
  RunSettings s;
  if (v.h > 0.0) s.h = v.h;
  if (!std::isnan(v.t)) s.t = v.t;
  if (v.tol > 0.0) s.tol = v.tol;
  if (v.order > 0) s.order = v.order;
  if (!v.field.empty()) s.field = v.field;
  if (!c.out.empty()) s.out = c.out;
  if (!c.format.empty()) s.format = c.format;
  if (v.seed >= 0) s.seed = static_cast<std::uint64_t>(v.seed);
  if (v.samples > 0) s.samples = v.samples;
  return s;
}

struct Resolved {
  RunSettings settings;
  RunConfig file;
};

Resolved resolve(const CliValues& v, const CommonFlags& c) {
  Resolved r;
  if (auto path = resolve_config_path(c.config)) r.file = load_config(*path);
  r.settings = merge(r.file.settings, cli_settings(v, c));
  return r;
}

// Scenario-specific values: command line, then the scenario's config block,
// then the top-level config, then the built-in default.
struct ScenarioSettings {
  double h;
  double tol;
  int order;
};

ScenarioSettings for_scenario(const Resolved& r, const CliValues& v, const Scenario& sc) {
  ScenarioSettings s{sc.default_h(), sc.tolerance, 16};
  if (r.file.settings.h) s.h = *r.file.settings.h;
  if (r.file.settings.tol) s.tol = *r.file.settings.tol;
  if (r.file.settings.order) s.order = *r.file.settings.order;
  if (auto it = r.file.scenarios.find(sc.name); it != r.file.scenarios.end()) {
    if (it->second.h) s.h = *it->second.h;
    if (it->second.tol) s.tol = *it->second.tol;
    if (it->second.order) s.order = *it->second.order;
  }
  if (v.h > 0.0) s.h = v.h;
  if (v.tol > 0.0) s.tol = v.tol;
  if (v.order > 0) s.order = v.order;
  return s;
}

void write_output(const RunSettings& s, const std::string& json, const std::string& csv) {
  if (!s.out) return;
  const std::string format = s.format.value_or("json");
  if (format != "json" && format != "csv") {
    throw ConfigError("--format must be json or csv");
  }
  std::ofstream os(*s.out, std::ios::binary);
  if (!os) throw ConfigError("cannot write '" + *s.out + "'");
  os << (format == "json" ? json : csv);
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("bad grid value '" + item + "'");
    }
  }
  return out;
}

int cmd_list() {
  for (const auto& sc : scenarios::registry()) {
    std::cout << sc.name << "  [" << sc.time_window().lower << ", " << sc.time_window().upper
              << "]  tol " << sc.tolerance << "\n    " << sc.description << "\n    fields:";
    for (const auto& [key, f] : sc.fields) {
      std::cout << ' ' << key << (sc.reference_for(key) ? "*" : "");
    }
    std::cout << "\n    vector fields:";
    for (const auto& [key, a] : sc.vector_fields) std::cout << ' ' << key;
    std::cout << (sc.paired ? "\n    has a paired parametrization" : "") << "\n";
  }
  std::cout << "(* = closed-form reference available)\n";
  return kPass;
}

int cmd_run(const CliValues& v, const CommonFlags& c) {
  const Resolved r = resolve(v, c);
  const Scenario sc = scenarios::make(v.scenario);
  const ScenarioSettings ss = for_scenario(r, v, sc);
  const std::string field = r.settings.field.value_or("one");
  sc.field(field);
  const double t = r.settings.t.value_or(0.5 * (sc.time_window().lower + sc.time_window().upper));
  const TransportReport rep =
      verify_transport(sc, field, t, ss.h, QuadratureRule::gauss(ss.order), ss.tol);
  io::print_table(std::cout, {rep});
  write_output(r.settings, io::dump(io::to_json(std::vector<TransportReport>{rep})),
               io::to_csv(std::vector<TransportReport>{rep}));
  if (!rep.failure.empty()) return kConfig;
  return rep.passed ? kPass : kFail;
}

int cmd_sweep(const CliValues& v, const CommonFlags& c) {
  const Resolved r = resolve(v, c);
  const Scenario sc = scenarios::make(v.scenario);
  const ScenarioSettings ss = for_scenario(r, v, sc);
  const SweepParameter param = parse_sweep_parameter(v.param);
  const std::string field = r.settings.field.value_or("one");
  sc.field(field);
  const double t = r.settings.t.value_or(0.5 * (sc.time_window().lower + sc.time_window().upper));
  SweepOptions opt;
  opt.order = ss.order;
  opt.h = ss.h;
  opt.replicates = v.replicates;
  opt.seed = r.settings.seed.value_or(1);
  const SweepResult res = run_sweep(sc, field, t, param, parse_grid(v.grid), opt);

  std::cout << "sweep " << to_string(param) << " on " << sc.name << " / " << field
            << " at t=" << t << "\n  metric: " << res.error_metric << "\n";
  for (const auto& p : res.points) {
    std::cout << "  " << std::setw(12) << p.value << "  " << std::setw(14) << p.error << "\n";
  }
  std::cout << "  fitted slope " << res.slope << (res.monotone ? "" : " (not monotone)") << "\n";
  write_output(r.settings, io::dump(io::to_json(res)), io::to_csv(res));
  return kPass;
}

int cmd_validate(const CliValues& v, const CommonFlags& c) {
  const Resolved r = resolve(v, c);
  const Scenario sc = scenarios::make(v.scenario);
  const int samples = r.settings.samples.value_or(500);
  std::vector<double> times;
  if (r.settings.t) {
    times.push_back(*r.settings.t);
  } else {
    times = sc.time_window().interior_times(5);
  }
  ValidationOptions opt;
  opt.seed = r.settings.seed.value_or(7);
  opt.fields = &sc.fields;
  bool ok = true;
  std::vector<ValidationReport> reports;
  for (double t : times) {
    const ValidationReport rep = validate_scene(sc.domain, t, samples, opt);
    std::cout << sc.name << " t=" << t << (rep.passed() ? "  pass" : "  FAIL")
              << "  (exceptional set size " << sc.domain.exceptional_set_size(t) << ")\n";
    for (const auto& ch : rep.checks) {
      std::cout << "  " << std::left << std::setw(34) << ch.name << std::right
                << (ch.passed ? " pass " : " FAIL ") << " max " << std::setw(11)
                << ch.max_violation << "  tol " << ch.tolerance << "  n=" << ch.samples
                << (ch.skipped ? "  skipped " + std::to_string(ch.skipped) : "") << "\n";
    }
    ok = ok && rep.passed();
    reports.push_back(rep);
  }
  io::Json doc;
  doc["passed"] = ok;
  doc["validation"] = io::Json::array();
  for (const auto& rep : reports) doc["validation"].push_back(io::to_json(sc.name, rep));
  write_output(r.settings, io::dump(doc), io::to_csv(sc.name, reports));
  return ok ? kPass : kFail;
}

int cmd_all(const CliValues& v, const CommonFlags& c) {
  const Resolved r = resolve(v, c);
  SuiteOptions opt;
  if (r.settings.order) opt.order = *r.settings.order;
  if (r.settings.h) opt.h = *r.settings.h;
  if (r.settings.tol) opt.tolerance = *r.settings.tol;
  if (r.settings.field) opt.field = *r.settings.field;
  if (r.settings.seed) opt.seed = *r.settings.seed;
  if (r.settings.samples) opt.validation_samples = *r.settings.samples;
  for (const auto& [name, o] : r.file.scenarios) {
    if (o.tol) opt.tolerance_overrides[name] = *o.tol;
  }
  if (v.tol > 0.0) opt.tolerance = v.tol;
  const SuiteResult res = run_all(opt);

  io::print_table(std::cout, res.transport);
  int failed_validation = 0;
  for (const auto& [name, rep] : res.validation) {
    if (!rep.passed()) {
      ++failed_validation;
      std::cout << "validation FAIL: " << name << " t=" << rep.t << "\n";
    }
  }
  std::cout << res.validation.size() - failed_validation << "/" << res.validation.size()
            << " scene validations pass\n";
  for (const auto& ch : res.checks) {
    std::cout << (ch.passed ? "pass  " : "FAIL  ") << std::left << std::setw(30) << ch.check
              << std::setw(20) << ch.scenario << std::setw(16) << ch.detail << std::right
              << " err " << ch.error << " (tol " << ch.tolerance << ")\n";
  }
  write_output(r.settings, io::dump(io::to_json(res)), io::to_csv(res.transport));
  return res.passed() ? kPass : kFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Transport-theorem verification lab for evolving domains"};
  app.require_subcommand(1);
  // "-h" would collide with the finite-difference step option.
  app.set_help_flag("--help", "print this help message and exit");
  CommonFlags common;
  CliValues v;
  app.add_option("--config", common.config,
                 "JSON config file (default: $EVOLVE_TRANSPORT_CONFIG)");
  app.add_option("--out", common.out, "write machine-readable reports here");
  app.add_option("--format", common.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  auto* list = app.add_subcommand("list", "list scenarios and fields");

  auto* run = app.add_subcommand("run", "verify the transport identity once");
  run->add_option("scenario", v.scenario)->required();
  run->add_option("--field", v.field);
  run->add_option("--t", v.t);
  run->add_option("--h", v.h);
  run->add_option("--order", v.order);
  run->add_option("--tol", v.tol);

  auto* sweep = app.add_subcommand("sweep", "convergence sweep over h, order or Monte Carlo samples");
  sweep->add_option("scenario", v.scenario)->required();
  sweep->add_option("--param", v.param)->required()->check(
      CLI::IsMember({"h", "order", "mc"}));
  sweep->add_option("--grid", v.grid, "comma-separated values")->required();
  sweep->add_option("--field", v.field);
  sweep->add_option("--t", v.t);
  sweep->add_option("--h", v.h);
  sweep->add_option("--order", v.order);
  sweep->add_option("--seed", v.seed);
  sweep->add_option("--replicates", v.replicates);

  auto* validate = app.add_subcommand("validate", "sampled checks of a scenario's contracts");
  validate->add_option("scenario", v.scenario)->required();
  validate->add_option("--t", v.t);
  validate->add_option("--samples", v.samples);
  validate->add_option("--seed", v.seed);

  auto* all = app.add_subcommand("all", "full suite over the registry");
  all->add_option("--order", v.order);
  all->add_option("--h", v.h);
  all->add_option("--tol", v.tol);
  all->add_option("--field", v.field);
  all->add_option("--samples", v.samples);
  all->add_option("--seed", v.seed);

  // Common flags are accepted after the subcommand as well.
  for (auto* sub : {list, run, sweep, validate, all}) {
    sub->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kConfig;
  }

  try {
    if (*list) return cmd_list();
    if (*run) return cmd_run(v, common);
    if (*sweep) return cmd_sweep(v, common);
    if (*validate) return cmd_validate(v, common);
    if (*all) return cmd_all(v, common);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kConfig;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfig;
  }
  return kConfig;
}
