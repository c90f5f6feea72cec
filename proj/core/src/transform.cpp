#include "sdftest/transform.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fft.hpp"
#include "sdftest/error.hpp"
#include "sdftest/special.hpp"

namespace sdftest {

std::vector<double> dct1(std::span<const double> series) {
  const std::size_t n = series.size();
  if (n < 2) throw InputError("dct1: need at least 2 observations");
  // Fold the orthonormal end-point weights into REDFT00:
  // sum_t c_t x_t cos(.) = REDFT00(u)/2 with u_0 = sqrt(2) x_0, u_{n-1} = sqrt(2) x_{n-1}.
  std::vector<double> u(series.begin(), series.end());
  u.front() *= std::numbers::sqrt2;
  u.back() *= std::numbers::sqrt2;
  std::vector<double> out(n);
  fft::redft00(u, out);
  const double scale = 0.5 * std::sqrt(2.0 / static_cast<double>(n - 1));
  for (auto& v : out) v *= scale;
  out.front() *= std::numbers::sqrt2 / 2;
  out.back() *= std::numbers::sqrt2 / 2;
  return out;
}

std::vector<double> squared_coefficients(std::span<const double> series) {
  auto w = dct1(series);
  for (auto& v : w) v *= v;
  return w;
}

BinningPlan plan_bins(int n1, int n2, std::optional<int> bins) {
  if (n1 < 4 || n2 < 4) {
    throw InputError("plan_bins: both series need at least 4 observations (got " +
                     std::to_string(n1) + ", " + std::to_string(n2) + ")");
  }
  BinningPlan plan;
  plan.lengths = {n1, n2};
  const int shortest = std::min(n1, n2);
  if (bins) {
    plan.bins = *bins;
  } else {
    plan.bins = static_cast<int>(std::floor(std::pow(static_cast<double>(shortest), 0.8)));
    while (plan.bins > 2 && shortest / plan.bins < 2) --plan.bins;
  }
  if (plan.bins < 2) throw InputError("plan_bins: need at least 2 bins");
  for (int k = 0; k < 2; ++k) {
    const auto i = static_cast<std::size_t>(k);
    plan.bin_mass[i] = plan.lengths[i] / plan.bins;
    if (plan.bin_mass[i] < 1) {
      throw InputError("plan_bins: series " + std::to_string(k + 1) + " has " +
                       std::to_string(plan.lengths[i]) +
                       " observations, fewer than the " + std::to_string(plan.bins) +
                       " bins requested");
    }
    plan.truncation[i] = plan.lengths[i] - plan.bins * plan.bin_mass[i];
    plan.nu[i] = std::log(static_cast<double>(plan.bins)) /
                 std::log(static_cast<double>(plan.lengths[i]));
  }
  const double ratio = std::log(static_cast<double>(n1)) / std::log(static_cast<double>(n2));
  if (ratio < 2.0 / 3.0 || ratio > 1.5) {
    plan.warnings.push_back(
        "series lengths are badly unbalanced: log n1 / log n2 = " +
        std::to_string(ratio) + " is outside [2/3, 3/2]");
  }
  return plan;
}

std::vector<double> bin(std::span<const double> w, int bins, int mass) {
  if (bins < 1 || mass < 1) throw InputError("bin: bins and mass must be positive");
  const auto used = static_cast<std::size_t>(bins) * static_cast<std::size_t>(mass);
  if (used > w.size()) {
    throw InputError("bin: " + std::to_string(bins) + " bins of mass " +
                     std::to_string(mass) + " exceed " + std::to_string(w.size()) +
                     " coefficients");
  }
  std::vector<double> q(static_cast<std::size_t>(bins), 0.0);
  for (std::size_t j = 0; j < used; ++j) q[j / static_cast<std::size_t>(mass)] += w[j];
  return q;
}

double translation_shift(int mass) {
  const double half = 0.5 * mass;
  return (digamma(half) - std::log(half)) / std::numbers::sqrt2;
}

std::vector<double> mirror(std::span<const double> y) {
  const std::size_t T = y.size();
  std::vector<double> out;
  out.reserve(2 * T - 2);
  for (std::size_t t = T; t-- > 0;) out.push_back(y[t]);
  for (std::size_t t = 1; t + 1 < T; ++t) out.push_back(y[t]);
  return out;
}

std::vector<double> unmirror(std::span<const double> mirrored) {
  const std::size_t T = mirrored.size() / 2 + 1;
  std::vector<double> out(T);
  for (std::size_t t = 0; t < T; ++t) out[t] = mirrored[T - 1 - t];
  return out;
}

TransformedSample transform(std::span<const double> series, int bins, int mass) {
  if (bins < 2) throw InputError("transform: need at least 2 bins");
  const auto used = static_cast<std::size_t>(bins) * static_cast<std::size_t>(mass);
  if (mass < 1 || used > series.size()) {
    throw InputError("transform: plan needs " + std::to_string(used) +
                     " observations, series has " + std::to_string(series.size()));
  }
  const auto w = squared_coefficients(series.first(used));
  auto q = bin(w, bins, mass);
  const double m = static_cast<double>(mass);
  for (std::size_t t = 0; t < q.size(); ++t) {
    if (!(q[t] > 0.0) || !std::isfinite(q[t])) {
      throw InputError("transform: bin " + std::to_string(t + 1) +
                       " has no energy (constant or degenerate series)");
    }
    q[t] = std::log(q[t] / m) / std::numbers::sqrt2;
  }
  TransformedSample out;
  out.ystar = mirror(q);
  const double shift = translation_shift(mass);
  for (auto& v : out.ystar) v -= shift;
  out.bins = bins;
  out.mass = mass;
  out.n_used = static_cast<int>(used);
  return out;
}

TransformedSample transform(std::span<const double> series,
                            const BinningPlan& plan, int k) {
  return transform(series, plan.bins, plan.bin_mass[static_cast<std::size_t>(k)]);
}

}  // namespace sdftest
