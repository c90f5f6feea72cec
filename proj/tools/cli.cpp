#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "sdftest/equality_test.hpp"
#include "sdftest/error.hpp"
#include "sdftest/experiment.hpp"
#include "sdftest/series_io.hpp"
#include "sdftest/simulator.hpp"
#include "sdftest/version.hpp"

namespace sdftest::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

const std::vector<std::string> kCommands = {"test",  "estimate", "simulate",
                                            "power", "type1",    "roc"};

bool is_command(const std::string& s) {
  return std::find(kCommands.begin(), kCommands.end(), s) != kCommands.end();
}

std::string token_of(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  return v.dump();
}

fs::path default_manifest(const fs::path& output) {
  fs::path p = output;
  p.replace_extension(".manifest.json");
  return p;
}

void write_manifest(const fs::path& path, const std::string& command, const json& config,
                    std::uint64_t seed, const json& outputs) {
  const json manifest = {{"command", command},
                         {"config", config},
                         {"seed", seed},
                         {"versions", build_versions()},
                         {"outputs", outputs}};
  std::ofstream out(path);
  if (!out) throw InputError("cannot write manifest '" + path.string() + "'");
  out << manifest.dump(2) << '\n';
}

Selection selection_from(const std::string& name) { return parse_selection(name); }

std::vector<double> parse_deltas(const std::string& text) {
  std::vector<double> out;
  std::stringstream s(text);
  std::string cell;
  while (std::getline(s, cell, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(cell, &used));
      if (cell.find_first_not_of(" ", used) != std::string::npos) throw std::invalid_argument(cell);
    } catch (const std::logic_error&) {
      throw ParameterError("invalid delta '" + cell + "'");
    }
  }
  return out;
}

std::string join_deltas(const std::vector<double>& deltas) {
  std::ostringstream s;
  s << std::setprecision(17);
  for (std::size_t i = 0; i < deltas.size(); ++i) s << (i ? "," : "") << deltas[i];
  return s.str();
}

// ---------------------------------------------------------------- test

struct TestArgs {
  std::string x1, x2, column;
  double alpha = 0.05;
  int q = 4;
  int bins = 0;
  int mc = 500;
  std::string select = "gcv";
  double h1 = 0.0, h2 = 0.0, h = 0.0;
  std::uint64_t seed = 42;
  bool center = true;
  double clip_sd = 0.0;
  std::string pool = "longest";
  int threads = 0;
  std::string output = "test_report.json";
  std::string null_csv;
  std::string manifest;
};

void add_test(CLI::App& app, TestArgs& a) {
  auto* c = app.add_subcommand("test", "Test equality of the spectral densities of two series");
  c->add_option("x1,--x1", a.x1, "First series (CSV)")->required();
  c->add_option("x2,--x2", a.x2, "Second series (CSV)")->required();
  c->add_option("--column", a.column, "Column name or 0-based index");
  c->add_option("--alpha", a.alpha, "Significance level")->capture_default_str();
  c->add_option("--q", a.q, "Penalty order")->capture_default_str();
  c->add_option("--bins", a.bins, "Number of bins T (0: automatic)");
  c->add_option("--mc", a.mc, "Monte Carlo replicates M")->capture_default_str();
  c->add_option("--select", a.select, "gcv, gml or fixed")->capture_default_str();
  c->add_option("--h1", a.h1, "Fixed bandwidth for series 1");
  c->add_option("--h2", a.h2, "Fixed bandwidth for series 2");
  c->add_option("--h", a.h, "Fixed bandwidth for both series (implies --select fixed)");
  c->add_option("--seed", a.seed, "Monte Carlo seed")->capture_default_str();
  c->add_option("--center", a.center, "Subtract sample means")->capture_default_str();
  c->add_option("--clip-sd", a.clip_sd, "Drop observations beyond this many SDs (0: off)");
  c->add_option("--pool", a.pool, "Null density from the longest series or the average")
      ->capture_default_str();
  c->add_option("--threads", a.threads, "Worker threads (0: all cores)");
  c->add_option("-o,--output", a.output, "JSON report")->capture_default_str();
  c->add_option("--null-csv", a.null_csv, "Also write the sorted null sample");
  c->add_option("--manifest", a.manifest, "Manifest path (default: next to the output)");
}

int cmd_test(const TestArgs& a, std::ostream& out) {
  TestConfig config;
  config.alpha = a.alpha;
  config.q = a.q;
  if (a.bins > 0) config.bins = a.bins;
  config.mc_replicates = a.mc;
  config.selection = selection_from(a.select);
  config.h1 = a.h1;
  config.h2 = a.h2;
  if (a.h > 0.0) {
    config.selection = Selection::fixed;
    config.h1 = config.h2 = a.h;
  }
  config.seed = a.seed;
  config.center = a.center;
  if (a.clip_sd > 0.0) config.clip_sd = a.clip_sd;
  config.pool = parse_pool_mode(a.pool);
  config.threads = a.threads;

  const auto x1 = read_series(a.x1, a.column);
  const auto x2 = read_series(a.x2, a.column);
  const auto outcome = run_test(x1, x2, config);

  json report = outcome;
  report["inputs"] = {a.x1, a.x2};
  {
    std::ofstream f(a.output);
    if (!f) throw InputError("cannot write '" + a.output + "'");
    f << report.dump(2) << '\n';
  }
  json outputs = {{"report", a.output}};
  if (!a.null_csv.empty()) {
    write_columns(a.null_csv, {"statistic"}, {outcome.null_sample});
    outputs["null_csv"] = a.null_csv;
  }
  json cfg = {{"x1", a.x1},
              {"x2", a.x2},
              {"column", a.column},
              {"alpha", config.alpha},
              {"q", config.q},
              {"bins", a.bins},
              {"mc", config.mc_replicates},
              {"select", to_string(config.selection)},
              {"h1", config.h1},
              {"h2", config.h2},
              {"seed", config.seed},
              {"center", config.center},
              {"clip-sd", a.clip_sd},
              {"pool", to_string(config.pool)}};
  const fs::path manifest = a.manifest.empty() ? default_manifest(a.output) : fs::path(a.manifest);
  outputs["manifest"] = manifest.string();
  write_manifest(manifest, "test", cfg, config.seed, outputs);

  for (const auto& w : outcome.warnings) out << "warning: " << w << '\n';
  out << std::setprecision(6) << "S = " << outcome.statistic
      << "\nH_alpha = " << outcome.critical_value << " (rank " << outcome.critical_rank
      << " of " << config.mc_replicates << ")"
      << "\np-value = " << outcome.p_value << "\nT = " << outcome.plan.bins
      << ", h1 = " << outcome.h1 << ", h2 = " << outcome.h2 << "\ndecision: "
      << (outcome.reject ? "reject equality" : "do not reject equality") << " at alpha = "
      << config.alpha << '\n';
  return kCompleted;
}

// ---------------------------------------------------------------- estimate

struct EstimateArgs {
  std::string input, column;
  int bins = 0;
  int q = 4;
  std::string select = "gcv";
  double h = 0.0;
  bool center = true;
  double clip_sd = 0.0;
  std::string output = "estimate.csv";
  std::string manifest;
};

void add_estimate(CLI::App& app, EstimateArgs& a) {
  auto* c = app.add_subcommand("estimate", "Estimate the spectral density of one series");
  c->add_option("input,--input", a.input, "Series (CSV)")->required();
  c->add_option("--column", a.column, "Column name or 0-based index");
  c->add_option("--bins", a.bins, "Number of bins T (0: automatic)");
  c->add_option("--q", a.q, "Penalty order")->capture_default_str();
  c->add_option("--select", a.select, "gcv or gml")->capture_default_str();
  c->add_option("--h", a.h, "Fixed bandwidth (bypasses selection)");
  c->add_option("--center", a.center, "Subtract the sample mean")->capture_default_str();
  c->add_option("--clip-sd", a.clip_sd, "Drop observations beyond this many SDs (0: off)");
  c->add_option("-o,--output", a.output, "CSV of x, ghat, fhat")->capture_default_str();
  c->add_option("--manifest", a.manifest, "Manifest path (default: next to the output)");
}

int cmd_estimate(const EstimateArgs& a, std::ostream& out) {
  auto x = read_series(a.input, a.column);
  if (a.clip_sd > 0.0) x = clip_outliers(x, a.clip_sd);
  if (a.center && !x.empty()) {
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(x.size());
    for (auto& v : x) v -= mean;
  }
  const int n = static_cast<int>(x.size());
  const auto plan = plan_bins(n, n, a.bins > 0 ? std::optional<int>(a.bins) : std::nullopt);
  const auto sample = transform(x, plan, 0);
  const Selection method = a.h > 0.0 ? Selection::fixed : selection_from(a.select);
  if (method == Selection::fixed && a.h <= 0.0) {
    throw ParameterError("--select fixed needs a positive --h");
  }
  const auto estimate = estimate_log_sdf(sample, a.q, method, a.h);

  const auto ghat = unmirror(estimate.ghat);
  const auto fhat = frequency_profile(estimate);
  std::vector<double> grid(ghat.size());
  for (std::size_t t = 0; t < grid.size(); ++t) {
    grid[t] = static_cast<double>(t) / static_cast<double>(grid.size() - 1);
  }
  write_columns(a.output, {"x", "ghat", "fhat"}, {grid, ghat, fhat});

  json cfg = {{"input", a.input},  {"column", a.column}, {"bins", plan.bins},
              {"q", a.q},          {"select", to_string(method)},
              {"h", a.h},          {"center", a.center}, {"clip-sd", a.clip_sd}};
  const fs::path manifest = a.manifest.empty() ? default_manifest(a.output) : fs::path(a.manifest);
  write_manifest(manifest, "estimate", cfg, 0,
                 {{"estimate", a.output}, {"manifest", manifest.string()}, {"selected_h", estimate.h}});
  out << "T = " << plan.bins << ", m = " << plan.bin_mass[0] << ", method = "
      << to_string(method) << ", h = " << std::setprecision(6) << estimate.h << '\n';
  return kCompleted;
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
  std::string model;
  double phi = 0.5, phi1 = 0.0, phi2 = 0.0, theta = 0.0;
  double exponent = 1.0, phase = 0.0, offset = 0.0, scale = kInvTwoPi;
  int setting = 0;
  std::string source = "main";
  double delta = 0.0;
  int which = 1;
  int n = 1024;
  std::uint64_t seed = 42;
  std::uint64_t stream = 0;
  int count = 1;
  std::string output = "simulated.csv";
  std::string manifest;
};

void add_simulate(CLI::App& app, SimulateArgs& a) {
  auto* c = app.add_subcommand("simulate", "Draw a Gaussian series with a given spectral density");
  c->add_option("--model", a.model, "ar1, ar2, ma1, cosine_power or white");
  c->add_option("--phi", a.phi, "AR(1) coefficient")->capture_default_str();
  c->add_option("--phi1", a.phi1, "AR(2) first coefficient");
  c->add_option("--phi2", a.phi2, "AR(2) second coefficient");
  c->add_option("--theta", a.theta, "MA(1) coefficient");
  c->add_option("--exponent", a.exponent, "Cosine-power exponent");
  c->add_option("--phase", a.phase, "Cosine-power phase shift");
  c->add_option("--offset", a.offset, "Cosine-power offset");
  c->add_option("--scale", a.scale, "Cosine-power scale (also white-noise level)");
  c->add_option("--setting", a.setting, "Simulation setting 1-3 instead of --model");
  c->add_option("--source", a.source, "main or supplement settings")->capture_default_str();
  c->add_option("--delta", a.delta, "Mixture weight of the alternative");
  c->add_option("--which", a.which, "1: f1, 2: f2 at --delta")->capture_default_str();
  c->add_option("--n", a.n, "Length")->capture_default_str();
  c->add_option("--seed", a.seed, "Seed")->capture_default_str();
  c->add_option("--stream", a.stream, "Stream id of the first series");
  c->add_option("--count", a.count, "Number of series (one column each)")->capture_default_str();
  c->add_option("-o,--output", a.output, "CSV output")->capture_default_str();
  c->add_option("--manifest", a.manifest, "Manifest path (default: next to the output)");
}

SpectralModel simulate_model(const SimulateArgs& a) {
  if (a.setting > 0) {
    if (!a.model.empty()) throw ParameterError("give either --model or --setting, not both");
    if (a.which != 1 && a.which != 2) throw ParameterError("--which must be 1 or 2");
    auto [f1, f2] = make_setting(a.setting, parse_setting_source(a.source), a.delta);
    return a.which == 1 ? f1 : f2;
  }
  if (a.model == "ar1") return SpectralModel::ar1(a.phi);
  if (a.model == "ar2") return SpectralModel::ar2(a.phi1, a.phi2);
  if (a.model == "ma1") return SpectralModel::ma1(a.theta);
  if (a.model == "cosine_power") {
    return SpectralModel::cosine_power(a.exponent, a.phase, a.offset, a.scale);
  }
  if (a.model == "white") return SpectralModel::constant(a.scale);
  if (a.model.empty()) throw ParameterError("simulate needs --model or --setting");
  throw ParameterError("unknown model '" + a.model + "'");
}

int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
  const auto model = simulate_model(a);
  if (a.count < 1) throw ParameterError("--count must be >= 1");
  const GaussianSampler sampler(model, a.n);
  std::vector<std::string> headers;
  std::vector<std::vector<double>> columns;
  for (int k = 0; k < a.count; ++k) {
    const std::uint64_t stream = a.stream + static_cast<std::uint64_t>(k);
    headers.push_back(a.count == 1 ? model.name()
                                   : model.name() + "#" + std::to_string(stream));
    columns.push_back(sampler.sample({a.seed, stream}));
  }
  write_columns(a.output, headers, columns);
  json cfg = {{"n", a.n}, {"seed", a.seed}, {"stream", a.stream}, {"count", a.count}};
  if (a.setting > 0) {
    cfg.update({{"setting", a.setting}, {"source", a.source}, {"delta", a.delta},
                {"which", a.which}});
  } else {
    cfg.update({{"model", a.model}, {"phi", a.phi}, {"phi1", a.phi1}, {"phi2", a.phi2},
                {"theta", a.theta}, {"exponent", a.exponent}, {"phase", a.phase},
                {"offset", a.offset}, {"scale", a.scale}});
  }
  const fs::path manifest = a.manifest.empty() ? default_manifest(a.output) : fs::path(a.manifest);
  write_manifest(manifest, "simulate", cfg, a.seed,
                 {{"series", a.output}, {"manifest", manifest.string()}, {"model", model}});
  out << "wrote " << a.count << " series of " << a.n << " observations of " << model.name()
      << " to " << a.output << '\n';
  return kCompleted;
}

// ---------------------------------------------------------------- experiments

struct ExperimentArgs {
  int setting = 1;
  std::string source = "main";
  std::string scenario = "B";
  int reps = 100;
  int mc = 500;
  double alpha = 0.05;
  int q = 0;
  int bins = 0;
  std::string select = "gcv";
  int n1 = 0, n2 = 0;
  std::string deltas = join_deltas(default_delta_grid());
  double delta = 1.0;
  int pairs = 200;
  std::uint64_t seed = 42;
  int threads = 0;
  std::string output;
  std::string manifest;
};

void add_experiment(CLI::App& app, const std::string& name, const std::string& help,
                    ExperimentArgs& a) {
  auto* c = app.add_subcommand(name, help);
  c->add_option("--setting", a.setting, "Setting 1-3")->capture_default_str();
  c->add_option("--source", a.source, "main or supplement settings")->capture_default_str();
  c->add_option("--scenario", a.scenario, "A, B or B'")->capture_default_str();
  if (name == "roc") {
    c->add_option("--pairs", a.pairs, "Null and alternative pairs")->capture_default_str();
    c->add_option("--delta", a.delta, "Mixture weight of the alternative")->capture_default_str();
  } else {
    c->add_option("--reps", a.reps, "Outer replicates")->capture_default_str();
    c->add_option("--mc", a.mc, "Monte Carlo replicates M")->capture_default_str();
    c->add_option("--alpha", a.alpha, "Significance level")->capture_default_str();
  }
  if (name == "power") {
    c->add_option("--deltas", a.deltas, "Comma-separated delta grid")->capture_default_str();
  }
  c->add_option("--q", a.q, "Penalty order (0: the setting's order)");
  c->add_option("--bins", a.bins, "Number of bins T (0: the scenario's)");
  c->add_option("--select", a.select, "gcv or gml")->capture_default_str();
  c->add_option("--n1", a.n1, "Override the scenario's first length");
  c->add_option("--n2", a.n2, "Override the scenario's second length");
  c->add_option("--seed", a.seed, "Seed")->capture_default_str();
  c->add_option("--threads", a.threads, "Worker threads (0: all cores)");
  c->add_option("-o,--output", a.output, "CSV output")->capture_default_str();
  c->add_option("--manifest", a.manifest, "Manifest path (default: next to the output)");
}

ExperimentConfig experiment_config(const ExperimentArgs& a) {
  ExperimentConfig c;
  c.setting = a.setting;
  c.source = parse_setting_source(a.source);
  c.scenario = parse_scenario(a.scenario);
  if (a.n1 > 0 || a.n2 > 0) {
    const auto s = scenario_shape(c.scenario);
    c.lengths = std::make_pair(a.n1 > 0 ? a.n1 : s.n1, a.n2 > 0 ? a.n2 : s.n2);
  }
  c.reps = a.reps;
  if (a.q > 0) c.q = a.q;
  c.test.alpha = a.alpha;
  c.test.mc_replicates = a.mc;
  if (a.bins > 0) c.test.bins = a.bins;
  c.test.selection = selection_from(a.select);
  if (c.test.selection == Selection::fixed) {
    throw ParameterError("experiments select bandwidths by gcv or gml");
  }
  c.test.seed = a.seed;
  c.test.center = false;
  c.threads = a.threads;
  return c;
}

json experiment_manifest_config(const ExperimentArgs& a, const std::string& command) {
  json cfg = {{"setting", a.setting}, {"source", a.source}, {"scenario", a.scenario},
              {"q", a.q},             {"bins", a.bins},     {"select", a.select},
              {"n1", a.n1},           {"n2", a.n2},         {"seed", a.seed}};
  if (command == "roc") {
    cfg.update({{"pairs", a.pairs}, {"delta", a.delta}});
  } else {
    cfg.update({{"reps", a.reps}, {"mc", a.mc}, {"alpha", a.alpha}});
  }
  if (command == "power") cfg["deltas"] = a.deltas;
  return cfg;
}

int cmd_experiment(const std::string& command, const ExperimentArgs& a, std::ostream& out) {
  auto config = experiment_config(a);
  const std::string output = a.output.empty() ? command + ".csv" : a.output;
  std::ofstream f(output);
  if (!f) throw InputError("cannot write '" + output + "'");
  if (command == "type1") {
    config.delta_grid = {0.0};
    const auto r = run_type1(config);
    write_type1_csv(f, config, r);
    out << "type I error rate = " << r.rate << " (se " << std::setprecision(3) << r.mc_se
        << ", " << r.reps << " reps)\n";
  } else if (command == "power") {
    config.delta_grid = parse_deltas(a.deltas);
    const auto curve = run_power_curve(config);
    write_power_csv(f, curve);
    for (const auto& row : curve) {
      out << "delta = " << row.delta << ": power = " << row.estimate.rate << '\n';
    }
  } else {
    config.delta_grid = {a.delta};
    const auto roc = run_roc(config, a.pairs);
    write_roc_csv(f, roc);
    out << "AUC = " << std::setprecision(6) << roc.auc << '\n';
  }
  f.close();
  if (!f) throw InputError("failed writing '" + output + "'");
  json cfg = experiment_manifest_config(a, command);
  const fs::path manifest = a.manifest.empty() ? default_manifest(output) : fs::path(a.manifest);
  json outputs = {{"csv", output}, {"manifest", manifest.string()}, {"resolved", config}};
  write_manifest(manifest, command, cfg, a.seed, outputs);
  return kCompleted;
}

}  // namespace

std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::vector<std::string> rest;
  std::string config_path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw InputError("--config needs a file");
      config_path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      config_path = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
    }
  }
  if (config_path.empty()) return rest;

  std::ifstream in(config_path);
  if (!in) throw InputError("cannot open config '" + config_path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw InputError("config '" + config_path + "': " + e.what());
  }
  if (!doc.is_object()) throw InputError("config '" + config_path + "' is not a JSON object");
  const json flags = doc.contains("config") ? doc["config"] : doc;

  auto command = std::find_if(rest.begin(), rest.end(), is_command);
  if (command == rest.end()) {
    if (!doc.contains("command")) {
      throw InputError("config '" + config_path + "' names no command");
    }
    rest.insert(rest.begin(), doc["command"].get<std::string>());
    command = rest.begin();
  }
  std::vector<std::string> expanded;
  for (const auto& [key, value] : flags.items()) {
    if (value.is_null()) continue;
    expanded.push_back("--" + key);
    expanded.push_back(token_of(value));
  }
  rest.insert(command + 1, expanded.begin(), expanded.end());
  return rest;
}

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Two-sample tests for equality of spectral densities", "sdftest"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  app.set_help_flag("--help", "Print this help message and exit");
  app.set_version_flag("--version", version());
  app.add_option("--config", "Replay flags from a manifest or JSON config");

  TestArgs test;
  EstimateArgs estimate;
  SimulateArgs simulate;
  ExperimentArgs power, type1, roc;
  type1.reps = 200;
  roc.source = "supplement";
  roc.scenario = "B'";
  add_test(app, test);
  add_estimate(app, estimate);
  add_simulate(app, simulate);
  add_experiment(app, "power", "Power curve over a delta grid", power);
  add_experiment(app, "type1", "Type I error rate", type1);
  add_experiment(app, "roc", "ROC curve of the statistic (no Monte Carlo)", roc);

  std::vector<std::string> args;
  try {
    args = expand_config(raw_args);
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kCompleted : kUsageError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }

  const auto* chosen = app.get_subcommands().front();
  const std::string command = chosen->get_name();
  try {
    if (command == "test") return cmd_test(test, out);
    if (command == "estimate") return cmd_estimate(estimate, out);
    if (command == "simulate") return cmd_simulate(simulate, out);
    if (command == "power") return cmd_experiment(command, power, out);
    if (command == "type1") return cmd_experiment(command, type1, out);
    return cmd_experiment(command, roc, out);
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumericFailure;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }
}

}  // namespace sdftest::cli
