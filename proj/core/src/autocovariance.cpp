#include <cmath>
#include <numbers>

#include "fft.hpp"
#include "sdftest/error.hpp"
#include "sdftest/spectral_model.hpp"

namespace sdftest {
namespace {

constexpr double kQuadratureTolerance = 1e-8;
constexpr int kMaxQuadraturePoints = 1 << 24;

// Composite Simpson on x_k = k / P for all lags 0..max_lag through one DCT-I.
std::vector<double> simpson_lags(const SpectralModel& model, int panels,
                                 int max_lag) {
  const auto P = static_cast<std::size_t>(panels);
  std::vector<double> weighted(P + 1), out(P + 1);
  const double w = 1.0 / (3.0 * panels);
  for (std::size_t k = 0; k <= P; ++k) {
    const double x = std::numbers::pi * static_cast<double>(k) / panels;
    double simpson = (k == 0 || k == P) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
    // Interior samples appear twice in REDFT00.
    if (k != 0 && k != P) simpson *= 0.5;
    weighted[k] = w * simpson * model(std::min(x, std::numbers::pi));
  }
  fft::redft00(weighted, out);
  out.resize(static_cast<std::size_t>(max_lag) + 1);
  return out;
}

std::vector<double> quadrature(const SpectralModel& model, int max_lag,
                               int quad_points) {
  int panels = std::max(quad_points, 2 * max_lag);
  panels += panels % 2;
  std::vector<double> previous = simpson_lags(model, panels, max_lag);
  while (true) {
    panels *= 2;
    if (panels > kMaxQuadraturePoints) {
      throw NumericalError("autocovariance: quadrature did not converge for " +
                           model.name());
    }
    auto current = simpson_lags(model, panels, max_lag);
    double change = 0.0;
    for (std::size_t h = 0; h < current.size(); ++h) {
      change = std::max(change, std::abs(current[h] - previous[h]));
    }
    if (change <= kQuadratureTolerance * std::abs(current[0])) return current;
    previous = std::move(current);
  }
}

// Exact integral of the piecewise-linear interpolant. With u_i = i / (n - 1)
// and slope s_i on [u_i, u_{i+1}], the boundary terms vanish because
// sin(h pi) = 0, leaving gamma(h) = sum_i s_i (cos(w u_{i+1}) - cos(w u_i)) / w^2.
std::vector<double> tabulated_lags(const Tabulated& table, int max_lag) {
  const auto& g = table.grid_values;
  const auto segments = static_cast<long long>(g.size() - 1);
  const double width = 1.0 / static_cast<double>(segments);
  std::vector<double> slope(static_cast<std::size_t>(segments));
  double integral = 0.0;
  for (long long i = 0; i < segments; ++i) {
    slope[i] = (g[i + 1] - g[i]) / width;
    integral += 0.5 * width * (g[i] + g[i + 1]);
  }
  // cos(h pi i / segments) depends only on h * i mod 2 * segments.
  const long long period = 2 * segments;
  std::vector<double> cos_table(static_cast<std::size_t>(period));
  for (long long k = 0; k < period; ++k) {
    cos_table[k] = std::cos(std::numbers::pi * static_cast<double>(k) /
                            static_cast<double>(segments));
  }
  std::vector<double> gamma(static_cast<std::size_t>(max_lag) + 1);
  gamma[0] = integral;
  for (long long h = 1; h <= max_lag; ++h) {
    const double omega = std::numbers::pi * static_cast<double>(h);
    double acc = 0.0;
    double c_prev = 1.0;
    for (long long i = 0; i < segments; ++i) {
      const double c_next = cos_table[(h * (i + 1)) % period];
      acc += slope[i] * (c_next - c_prev);
      c_prev = c_next;
    }
    gamma[h] = acc / (omega * omega);
  }
  return gamma;
}

std::vector<double> lags(const SpectralModel& model, int max_lag,
                         int quad_points) {
  if (const auto* mix = std::get_if<Mixture>(&model.variant())) {
    auto left = lags(*mix->left, max_lag, quad_points);
    auto right = lags(*mix->right, max_lag, quad_points);
    for (std::size_t h = 0; h < left.size(); ++h) {
      left[h] = (1.0 - mix->delta) * left[h] + mix->delta * right[h];
    }
    return left;
  }
  if (const auto* table = std::get_if<Tabulated>(&model.variant())) {
    return tabulated_lags(*table, max_lag);
  }
  return quadrature(model, max_lag, quad_points);
}

}  // namespace

Autocovariance autocovariance(const SpectralModel& model, int max_lag,
                              int quad_points) {
  if (max_lag < 0) throw ParameterError("autocovariance: max_lag must be >= 0");
  if (quad_points < 256) {
    throw ParameterError("autocovariance: quad_points must be >= 256");
  }
  auto values = lags(model, max_lag, quad_points);
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw NumericalError("autocovariance: non-finite value for " + model.name());
    }
  }
  return Autocovariance{std::move(values)};
}

Autocovariance closed_form_autocovariance(const SpectralModel& model,
                                          int max_lag) {
  if (max_lag < 0) throw ParameterError("autocovariance: max_lag must be >= 0");
  std::vector<double> gamma(static_cast<std::size_t>(max_lag) + 1, 0.0);
  if (const auto* ar = std::get_if<AR1>(&model.variant())) {
    const double g0 = kInvTwoPi / (1.0 - ar->phi * ar->phi);
    double power = 1.0;
    for (auto& g : gamma) {
      g = g0 * power;
      power *= ar->phi;
    }
  } else if (const auto* ma = std::get_if<MA1>(&model.variant())) {
    gamma[0] = kInvTwoPi * (1.0 + ma->theta * ma->theta);
    if (max_lag >= 1) gamma[1] = kInvTwoPi * ma->theta;
  } else {
    throw ParameterError("no closed-form autocovariance for " + model.name());
  }
  return Autocovariance{std::move(gamma)};
}

}  // namespace sdftest
