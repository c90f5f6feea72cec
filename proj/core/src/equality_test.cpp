#include "sdftest/equality_test.hpp"

#include <algorithm>
#include <cmath>
#include <nlohmann/json.hpp>
#include <numbers>
#include <numeric>

#include "sdftest/error.hpp"
#include "sdftest/parallel.hpp"
#include "sdftest/simulator.hpp"

namespace sdftest {
namespace {

std::vector<double> preprocess(std::span<const double> x, const TestConfig& config,
                               int& removed) {
  for (double v : x) {
    if (!std::isfinite(v)) throw InputError("series contains non-finite values");
  }
  if (!x.empty() && std::all_of(x.begin(), x.end(), [&](double v) { return v == x[0]; })) {
    throw InputError("series is constant");
  }
  std::vector<double> out;
  if (config.clip_sd) {
    out = clip_outliers(x, *config.clip_sd);
  } else {
    out.assign(x.begin(), x.end());
  }
  removed = static_cast<int>(x.size() - out.size());
  if (config.center && !out.empty()) {
    const double mean = std::accumulate(out.begin(), out.end(), 0.0) /
                        static_cast<double>(out.size());
    for (auto& v : out) v -= mean;
  }
  return out;
}

}  // namespace

std::string to_string(PoolMode mode) {
  return mode == PoolMode::longest ? "longest" : "average";
}

PoolMode parse_pool_mode(const std::string& name) {
  if (name == "longest") return PoolMode::longest;
  if (name == "average") return PoolMode::average;
  throw ParameterError("unknown pool mode '" + name + "' (expected longest or average)");
}

void TestConfig::validate() const {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw ParameterError("alpha must lie in (0, 1]");
  }
  if (q < 1) throw ParameterError("penalty order q must be >= 1");
  if (bins && *bins < 2) throw ParameterError("number of bins must be >= 2");
  if (mc_replicates < 99) {
    throw ParameterError("at least 99 Monte Carlo replicates are required");
  }
  if (selection == Selection::fixed && !(h1 > 0.0 && h2 > 0.0)) {
    throw ParameterError("fixed bandwidth selection needs positive h1 and h2");
  }
  if (clip_sd && !(*clip_sd > 0.0)) throw ParameterError("clip_sd must be positive");
}

std::vector<std::string> TestConfig::warnings() const {
  std::vector<std::string> out;
  if (alpha * (mc_replicates + 1) < 1.0) {
    out.push_back("alpha * (M + 1) < 1: the test can never reject");
  }
  return out;
}

double statistic(const LogSdfEstimate& e1, const LogSdfEstimate& e2) {
  if (e1.ghat.size() != e2.ghat.size() || e1.ghat.empty()) {
    throw InputError("statistic: estimates live on different grids");
  }
  double sum = 0.0;
  for (std::size_t t = 0; t < e1.ghat.size(); ++t) {
    const double d = e1.ghat[t] - e2.ghat[t];
    sum += d * d;
  }
  return sum / static_cast<double>(e1.ghat.size());
}

double statistic(const TransformedSample& t1, const TransformedSample& t2,
                 const LogSdfEstimate& e1, const LogSdfEstimate& e2) {
  if (t1.bins != t2.bins) {
    throw InputError("statistic: samples were binned with different T (" +
                     std::to_string(t1.bins) + " vs " + std::to_string(t2.bins) + ")");
  }
  return statistic(e1, e2);
}

LogSdfEstimate estimate_log_sdf(const TransformedSample& sample, int q,
                                Selection selection, double fixed_h) {
  if (selection == Selection::fixed) return fixed_bandwidth(sample.ystar, q, fixed_h);
  return select_bandwidth(sample.ystar, q, selection);
}

std::vector<double> frequency_profile(const LogSdfEstimate& estimate) {
  auto values = unmirror(estimate.ghat);
  for (auto& v : values) v = std::exp(std::numbers::sqrt2 * v);
  return values;
}

PairStatistic pair_statistic(std::span<const double> x1, std::span<const double> x2,
                             const BinningPlan& plan, const TestConfig& config) {
  const auto t1 = transform(x1, plan, 0);
  const auto t2 = transform(x2, plan, 1);
  const auto e1 = estimate_log_sdf(t1, config.q, config.selection, config.h1);
  const auto e2 = estimate_log_sdf(t2, config.q, config.selection, config.h2);
  return {statistic(t1, t2, e1, e2), e1.h, e2.h};
}

SpectralModel estimate_pooled_sdf(std::span<const double> x_long,
                                  const TestConfig& config, const BinningPlan& plan) {
  const int mass = static_cast<int>(x_long.size()) / plan.bins;
  const auto sample = transform(x_long, plan.bins, mass);
  const int k = plan.lengths[0] >= plan.lengths[1] ? 0 : 1;
  const double h = k == 0 ? config.h1 : config.h2;
  return SpectralModel::tabulated(
      frequency_profile(estimate_log_sdf(sample, config.q, config.selection, h)));
}

std::vector<double> mc_null_sample(const SpectralModel& fhat, int n1, int n2,
                                   const TestConfig& config, const BinningPlan& plan) {
  const int M = config.mc_replicates;
  if (M < 1) throw ParameterError("mc_null_sample: need at least one replicate");
  const GaussianSampler sampler(fhat, std::max(n1, n2));
  std::vector<double> stats(static_cast<std::size_t>(M));
  parallel_for(stats.size(), config.threads, [&](std::size_t i) {
    const SamplerState state{config.seed, static_cast<std::uint64_t>(i + 1)};
    try {
      const auto [x1, x2] = sampler.sample_pair(n1, n2, state);
      stats[i] = pair_statistic(x1, x2, plan, config).value;
    } catch (const Error& e) {
      throw NumericalError("Monte Carlo replicate " + std::to_string(i + 1) + ": " +
                           e.what());
    }
  });
  std::sort(stats.begin(), stats.end());
  return stats;
}

int critical_rank(double alpha, int replicates) {
  // The small offset keeps e.g. (1 - 0.05) * 100 from rounding up to 96.
  const double raw = std::ceil((1.0 - alpha) * (replicates + 1) - 1e-9);
  return std::clamp(static_cast<int>(raw), 1, replicates);
}

double monte_carlo_p_value(double statistic, std::span<const double> sorted_null) {
  const auto first_ge =
      std::lower_bound(sorted_null.begin(), sorted_null.end(), statistic);
  const auto at_least = static_cast<double>(sorted_null.end() - first_ge);
  return (1.0 + at_least) / (static_cast<double>(sorted_null.size()) + 1.0);
}

std::vector<double> clip_outliers(std::span<const double> series, double sds) {
  if (!(sds > 0.0)) throw ParameterError("clip_outliers: threshold must be positive");
  const auto n = static_cast<double>(series.size());
  if (series.size() < 2) return {series.begin(), series.end()};
  const double mean = std::accumulate(series.begin(), series.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : series) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / (n - 1.0));
  std::vector<double> kept;
  kept.reserve(series.size());
  for (double v : series) {
    if (std::abs(v - mean) <= sds * sd) kept.push_back(v);
  }
  return kept;
}

TestOutcome run_test(std::span<const double> x1_in, std::span<const double> x2_in,
                     const TestConfig& config) {
  config.validate();
  TestOutcome out;
  out.config = config;
  out.warnings = config.warnings();

  const auto x1 = preprocess(x1_in, config, out.removed_outliers[0]);
  const auto x2 = preprocess(x2_in, config, out.removed_outliers[1]);
  out.plan = plan_bins(static_cast<int>(x1.size()), static_cast<int>(x2.size()),
                       config.bins);
  for (const auto& w : out.plan.warnings) out.warnings.push_back(w);
  for (int k = 0; k < 2; ++k) {
    if (out.plan.bin_mass[static_cast<std::size_t>(k)] < 2) {
      throw InputError("series " + std::to_string(k + 1) + " is too short: " +
                       std::to_string(out.plan.lengths[static_cast<std::size_t>(k)]) +
                       " observations, need at least 2T = " +
                       std::to_string(2 * out.plan.bins));
    }
  }

  const auto observed = pair_statistic(x1, x2, out.plan, config);
  out.statistic = observed.value;
  out.h1 = observed.h1;
  out.h2 = observed.h2;

  const SpectralModel null_model = [&] {
    if (config.null_model) return *config.null_model;
    const bool first_longer = x1.size() >= x2.size();
    if (config.pool == PoolMode::longest) {
      return estimate_pooled_sdf(first_longer ? std::span<const double>(x1)
                                              : std::span<const double>(x2),
                                 config, out.plan);
    }
    const auto e1 = estimate_log_sdf(transform(x1, out.plan, 0), config.q,
                                     config.selection, config.h1);
    const auto e2 = estimate_log_sdf(transform(x2, out.plan, 1), config.q,
                                     config.selection, config.h2);
    LogSdfEstimate mean = e1;
    for (std::size_t t = 0; t < mean.ghat.size(); ++t) {
      mean.ghat[t] = 0.5 * (e1.ghat[t] + e2.ghat[t]);
    }
    return SpectralModel::tabulated(frequency_profile(mean));
  }();
  out.null_model = null_model.name();

  out.null_sample = mc_null_sample(null_model, static_cast<int>(x1.size()),
                                   static_cast<int>(x2.size()), config, out.plan);
  out.critical_rank = critical_rank(config.alpha, config.mc_replicates);
  out.critical_value = out.null_sample[static_cast<std::size_t>(out.critical_rank - 1)];
  out.p_value = monte_carlo_p_value(out.statistic, out.null_sample);
  out.reject = out.statistic > out.critical_value;
  return out;
}

void to_json(nlohmann::json& j, const TestConfig& c) {
  j = {{"alpha", c.alpha},
       {"q", c.q},
       {"bins", c.bins ? nlohmann::json(*c.bins) : nlohmann::json(nullptr)},
       {"mc_replicates", c.mc_replicates},
       {"selection", to_string(c.selection)},
       {"h1", c.h1},
       {"h2", c.h2},
       {"seed", c.seed},
       {"center", c.center},
       {"clip_sd", c.clip_sd ? nlohmann::json(*c.clip_sd) : nlohmann::json(nullptr)},
       {"pool", to_string(c.pool)},
       {"null_model", c.null_model ? nlohmann::json(*c.null_model)
                                   : nlohmann::json(nullptr)}};
}

void to_json(nlohmann::json& j, const TestOutcome& o) {
  j = {{"statistic", o.statistic},
       {"critical_value", o.critical_value},
       {"critical_rank", o.critical_rank},
       {"p_value", o.p_value},
       {"reject", o.reject},
       {"h1", o.h1},
       {"h2", o.h2},
       {"plan",
        {{"bins", o.plan.bins},
         {"lengths", o.plan.lengths},
         {"bin_mass", o.plan.bin_mass},
         {"truncation", o.plan.truncation},
         {"nu", o.plan.nu}}},
       {"removed_outliers", o.removed_outliers},
       {"null_model", o.null_model},
       {"null_sample", o.null_sample},
       {"warnings", o.warnings},
       {"config", o.config}};
}

}  // namespace sdftest
