#include "sdftest/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <nlohmann/json.hpp>
#include <numeric>
#include <ostream>
#include <sstream>

#include "sdftest/error.hpp"
#include "sdftest/parallel.hpp"
#include "sdftest/simulator.hpp"

namespace sdftest {
namespace {

// Stream tags separating data draws from Monte Carlo seeds.
constexpr std::uint64_t kDataTag = 0x6461746100000001ULL;
constexpr std::uint64_t kRocTag = 0x726f630000000001ULL;

[[noreturn]] void rethrow_with_context(const std::string& context) {
  try {
    throw;
  } catch (const InputError& e) {
    throw InputError(context + ": " + e.what());
  } catch (const ParameterError& e) {
    throw ParameterError(context + ": " + e.what());
  } catch (const DomainError& e) {
    throw DomainError(context + ": " + e.what());
  } catch (const Error& e) {
    throw NumericalError(context + ": " + e.what());
  }
}

std::string format_delta(double delta) {
  std::ostringstream s;
  s << delta;
  return s.str();
}

}  // namespace

Scenario parse_scenario(const std::string& name) {
  if (name == "A" || name == "a") return Scenario::A;
  if (name == "B" || name == "b") return Scenario::B;
  if (name == "B'" || name == "b'" || name == "Bprime" || name == "bprime") {
    return Scenario::B_prime;
  }
  throw ParameterError("unknown scenario '" + name + "' (expected A, B or B')");
}

std::string to_string(Scenario scenario) {
  switch (scenario) {
    case Scenario::A:
      return "A";
    case Scenario::B:
      return "B";
    case Scenario::B_prime:
      return "B'";
  }
  return "?";
}

ScenarioShape scenario_shape(Scenario scenario) {
  switch (scenario) {
    case Scenario::A:
      return {1200, 350, 143};
    case Scenario::B:
      return {1200, 1000, 143};
    case Scenario::B_prime:
      return {1024, 1024, 256};
  }
  throw ParameterError("unknown scenario");
}

std::vector<double> default_delta_grid() {
  std::vector<double> grid;
  for (int i = 0; i <= 10; ++i) grid.push_back(i / 10.0);
  return grid;
}

void ExperimentConfig::validate() const {
  setting_penalty_order(setting, source);  // throws on unknown ids
  if (reps < 10) throw ParameterError("reps must be >= 10");
  if (delta_grid.empty()) throw ParameterError("delta grid is empty");
  for (std::size_t i = 0; i < delta_grid.size(); ++i) {
    if (!(delta_grid[i] >= 0.0 && delta_grid[i] <= 1.0)) {
      throw ParameterError("delta values must lie in [0, 1]");
    }
    if (i > 0 && !(delta_grid[i] > delta_grid[i - 1])) {
      throw ParameterError("delta grid must be sorted ascending without repeats");
    }
  }
  if (lengths && (lengths->first < 4 || lengths->second < 4)) {
    throw ParameterError("series lengths must be >= 4");
  }
  test_config_for(0).validate();
}

ScenarioShape ExperimentConfig::shape() const {
  auto s = scenario_shape(scenario);
  if (lengths) {
    s.n1 = lengths->first;
    s.n2 = lengths->second;
  }
  if (test.bins) s.bins = *test.bins;
  return s;
}

TestConfig ExperimentConfig::test_config_for(int rep) const {
  TestConfig c = test;
  c.q = q ? *q : setting_penalty_order(setting, source);
  c.bins = shape().bins;
  c.seed = mix_seed(test.seed, static_cast<std::uint64_t>(rep) + 1);
  c.threads = 1;  // parallelism is over replicates
  return c;
}

void to_json(nlohmann::json& j, const ExperimentConfig& c) {
  const auto s = c.shape();
  j = {{"setting", c.setting},
       {"source", to_string(c.source)},
       {"scenario", to_string(c.scenario)},
       {"n1", s.n1},
       {"n2", s.n2},
       {"bins", s.bins},
       {"delta_grid", c.delta_grid},
       {"reps", c.reps},
       {"q", c.q ? *c.q : setting_penalty_order(c.setting, c.source)},
       {"test", c.test}};
}

RateEstimate make_rate(int rejections, int reps) {
  RateEstimate r;
  r.reps = reps;
  r.rate = reps > 0 ? static_cast<double>(rejections) / reps : 0.0;
  r.mc_se = reps > 0 ? std::sqrt(r.rate * (1.0 - r.rate) / reps) : 0.0;
  return r;
}

PowerCurve run_power_curve(const ExperimentConfig& config) {
  config.validate();
  const auto shape = config.shape();
  const std::uint64_t data_seed = mix_seed(config.test.seed, kDataTag);
  const auto f1 = make_setting(config.setting, config.source, 0.0).first;
  const GaussianSampler first(f1, shape.n1);

  PowerCurve curve;
  for (double delta : config.delta_grid) {
    // delta = 0 uses f1 itself so the row coincides with run_type1.
    const auto f2 = delta == 0.0
                        ? f1
                        : make_setting(config.setting, config.source, delta).second;
    const GaussianSampler second(f2, shape.n2);
    std::vector<char> rejected(static_cast<std::size_t>(config.reps), 0);
    parallel_for(rejected.size(), config.threads, [&](std::size_t i) {
      const int rep = static_cast<int>(i);
      try {
        const auto x1 = first.sample({data_seed, 2 * i});
        const auto x2 = second.sample({data_seed, 2 * i + 1});
        rejected[i] = run_test(x1, x2, config.test_config_for(rep)).reject ? 1 : 0;
      } catch (const Error&) {
        rethrow_with_context("delta " + format_delta(delta) + ", rep " +
                             std::to_string(rep));
      }
    });
    const int count = static_cast<int>(std::count(rejected.begin(), rejected.end(), 1));
    curve.push_back({delta, make_rate(count, config.reps)});
  }
  return curve;
}

RateEstimate run_type1(const ExperimentConfig& config) {
  ExperimentConfig null_config = config;
  null_config.delta_grid = {0.0};
  return run_power_curve(null_config).front().estimate;
}

std::vector<RocPoint> roc_curve(std::span<const double> null_statistics,
                                std::span<const double> alternative_statistics) {
  if (null_statistics.empty() || alternative_statistics.empty()) {
    throw ParameterError("roc_curve: both samples must be non-empty");
  }
  std::vector<std::pair<double, bool>> pooled;
  for (double s : null_statistics) pooled.emplace_back(s, false);
  for (double s : alternative_statistics) pooled.emplace_back(s, true);
  std::sort(pooled.begin(), pooled.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });
  const auto n_null = static_cast<double>(null_statistics.size());
  const auto n_alt = static_cast<double>(alternative_statistics.size());
  std::vector<RocPoint> points{{0.0, 0.0}};
  std::size_t fp = 0, tp = 0;
  for (std::size_t i = 0; i < pooled.size();) {
    const double threshold = pooled[i].first;
    for (; i < pooled.size() && pooled[i].first == threshold; ++i) {
      (pooled[i].second ? tp : fp) += 1;
    }
    points.push_back({static_cast<double>(fp) / n_null, static_cast<double>(tp) / n_alt});
  }
  return points;
}

double trapezoid_auc(std::span<const RocPoint> points) {
  double area = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i) {
    area += (points[i].fpr - points[i - 1].fpr) * 0.5 * (points[i].tpr + points[i - 1].tpr);
  }
  return area;
}

RocResult run_roc(const ExperimentConfig& config, int n_pairs) {
  if (n_pairs < 50) throw ParameterError("run_roc needs n_pairs >= 50");
  ExperimentConfig checked = config;
  checked.reps = std::max(checked.reps, 10);
  checked.validate();
  const auto shape = config.shape();
  const double delta = config.delta_grid.size() == 1 ? config.delta_grid.front() : 1.0;
  const auto [f1, f2] = make_setting(config.setting, config.source, delta);
  const GaussianSampler null1(f1, shape.n1);
  const GaussianSampler null2(f1, shape.n2);
  const GaussianSampler alt2(f2, shape.n2);
  const auto test = config.test_config_for(0);
  const auto plan = plan_bins(shape.n1, shape.n2, shape.bins);
  const std::uint64_t seed = mix_seed(config.test.seed, kRocTag);

  RocResult result;
  result.null_statistics.assign(static_cast<std::size_t>(n_pairs), 0.0);
  result.alternative_statistics.assign(static_cast<std::size_t>(n_pairs), 0.0);
  parallel_for(2 * static_cast<std::size_t>(n_pairs), config.threads, [&](std::size_t i) {
    const std::size_t pair = i / 2;
    const bool alternative = i % 2 == 1;
    try {
      const auto x1 = null1.sample({seed, 2 * i});
      const auto x2 = (alternative ? alt2 : null2).sample({seed, 2 * i + 1});
      const double s = pair_statistic(x1, x2, plan, test).value;
      (alternative ? result.alternative_statistics : result.null_statistics)[pair] = s;
    } catch (const Error&) {
      rethrow_with_context(std::string(alternative ? "alternative" : "null") + " pair " +
                           std::to_string(pair));
    }
  });
  result.points = roc_curve(result.null_statistics, result.alternative_statistics);
  result.auc = trapezoid_auc(result.points);
  return result;
}

namespace {

std::vector<double> average_ranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw ParameterError("spearman: need two equal-length samples of size >= 2");
  }
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  const double mean = 0.5 * static_cast<double>(x.size() + 1);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mean) * (ry[i] - mean);
    sxx += (rx[i] - mean) * (rx[i] - mean);
    syy += (ry[i] - mean) * (ry[i] - mean);
  }
  // A constant sample has no ranking; NaN propagates that.
  return sxy / std::sqrt(sxx * syy);
}

void write_type1_csv(std::ostream& out, const ExperimentConfig& config,
                     const RateEstimate& estimate) {
  const auto shape = config.shape();
  out << "setting,source,scenario,n1,n2,bins,alpha,mc_replicates,rate,reps,mc_se\n"
      << std::setprecision(17) << config.setting << ',' << to_string(config.source)
      << ',' << to_string(config.scenario) << ',' << shape.n1 << ',' << shape.n2 << ','
      << shape.bins << ',' << config.test.alpha << ',' << config.test.mc_replicates
      << ',' << estimate.rate << ',' << estimate.reps << ',' << estimate.mc_se << '\n';
}

void write_power_csv(std::ostream& out, const PowerCurve& curve) {
  out << "delta,rate,reps,mc_se\n" << std::setprecision(17);
  for (const auto& row : curve) {
    out << row.delta << ',' << row.estimate.rate << ',' << row.estimate.reps << ','
        << row.estimate.mc_se << '\n';
  }
}

void write_roc_csv(std::ostream& out, const RocResult& roc) {
  out << "fpr,tpr\n" << std::setprecision(17);
  for (const auto& p : roc.points) out << p.fpr << ',' << p.tpr << '\n';
}

}  // namespace sdftest
