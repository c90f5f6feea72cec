#include "sdftest/spline.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <numeric>

#include "fft.hpp"
#include "sdftest/error.hpp"

namespace sdftest {
namespace {

constexpr int kMaxTerms = 64;
constexpr double kTermTolerance = 1e-14;

// sum over l in Z of (z + l)^{-s}, z in (0, 1), s = 2q. Terms are taken in
// pairs l = L and l = -(L + 1), i.e. (L + z)^{-s} + (L + 1 - z)^{-s}.
double inverse_power_sum(double z, int s) {
  double sum = std::pow(z, -s) + std::pow(1.0 - z, -s);
  int L = 0;
  while (L < kMaxTerms) {
    ++L;
    const double term = std::pow(L + z, -s) + std::pow(L + 1 - z, -s);
    sum += term;
    if (term < kTermTolerance * sum) break;
  }
  // Euler-Maclaurin remainder sum_{l > L} (l + a)^{-s} for a = z, 1 - z.
  auto tail = [s, L](double a) {
    const double y = L + 1 + a;
    const double ds = s;
    const double p = std::pow(y, -ds);
    return y * p / (ds - 1.0) + 0.5 * p + ds * p / (12.0 * y) -
           ds * (ds + 1) * (ds + 2) * p / (720.0 * y * y * y) +
           ds * (ds + 1) * (ds + 2) * (ds + 3) * (ds + 4) * p /
               (30240.0 * std::pow(y, 5));
  };
  return sum + tail(z) + tail(1.0 - z);
}

std::shared_ptr<const std::vector<double>> cached_kappa(int N, int q) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::shared_ptr<const std::vector<double>>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{N, q}];
  if (!slot) slot = std::make_shared<const std::vector<double>>(kappa_sequence(N, q));
  return slot;
}

struct Spectrum {
  std::vector<double> power;   // |Y_k|^2, k = 0..N/2
  std::vector<double> weight;  // multiplicity of frequency k among 0..N-1
};

Spectrum spectrum_of(std::span<const double> y) {
  const std::size_t N = y.size();
  std::vector<std::complex<double>> coef(N / 2 + 1);
  fft::forward_real(y, coef);
  Spectrum s;
  s.power.resize(coef.size());
  s.weight.assign(coef.size(), 2.0);
  for (std::size_t k = 0; k < coef.size(); ++k) s.power[k] = std::norm(coef[k]);
  s.weight[0] = 1.0;
  if (N % 2 == 0) s.weight.back() = 1.0;
  return s;
}

// kappa of DFT frequency k = 0..N/2.
double kappa_at_frequency(const std::vector<double>& kappa, std::size_t k) {
  return kappa[k == 0 ? kappa.size() - 1 : k - 1];
}

void check_inputs(std::span<const double> ystar, int q, double h) {
  if (ystar.size() < 2) throw InputError("smoother: need at least 2 observations");
  if (q < 1) throw ParameterError("smoother: penalty order q must be >= 1");
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw ParameterError("smoother: bandwidth must be positive and finite");
  }
}

enum class Score { gcv, gml };

double score_from_spectrum(const Spectrum& s, const std::vector<double>& kappa,
                           int q, double h, Score which) {
  const double N = static_cast<double>(kappa.size());
  const double h2q = std::pow(h, 2 * q);
  if (which == Score::gcv) {
    double residual = 0.0, df_residual = 0.0;
    for (std::size_t k = 0; k < s.power.size(); ++k) {
      const double a = h2q * kappa_at_frequency(kappa, k);
      const double shrink = a / (1.0 + a);  // 1 - lambda
      residual += s.weight[k] * shrink * shrink * s.power[k];
      df_residual += s.weight[k] * shrink;
    }
    if (!(df_residual > 0.0)) return std::numeric_limits<double>::infinity();
    // ||(I-K)y||^2 = residual / N by Parseval.
    const double mean_residual = residual / (N * N);
    const double denom = df_residual / N;
    return mean_residual / (denom * denom);
  }
  double quad = 0.0, log_det = 0.0;
  int free_modes = 0;
  for (std::size_t k = 0; k < s.power.size(); ++k) {
    const double kap = kappa_at_frequency(kappa, k);
    const double a = h2q * kap;
    const double shrink = a / (1.0 + a);
    quad += s.weight[k] * shrink * s.power[k];
    if (kap > 0.0) {
      if (!(shrink > 0.0)) return std::numeric_limits<double>::infinity();
      log_det += s.weight[k] * std::log(shrink);
      free_modes += static_cast<int>(s.weight[k]);
    }
  }
  if (free_modes == 0) throw NumericalError("gml_score: every eigenvalue equals 1");
  return (quad / N) / std::exp(log_det / free_modes);
}

}  // namespace

double sinc_power_sum(double z, int q) {
  if (q < 1) throw ParameterError("sinc_power_sum: q must be >= 1");
  const double frac = z - std::floor(z);
  if (frac == 0.0) return 1.0;  // sinc(0) = 1, sinc(pi l) = 0 otherwise
  const double s = std::sin(std::numbers::pi * frac) * std::numbers::inv_pi;
  return std::pow(s, 2 * q) * inverse_power_sum(frac, 2 * q);
}

std::vector<double> kappa_sequence(int N, int q) {
  if (N < 2) throw ParameterError("kappa_sequence: N must be >= 2");
  if (q < 1) throw ParameterError("kappa_sequence: q must be >= 1");
  std::vector<double> kappa(static_cast<std::size_t>(N), 0.0);
  // (2 pi j)^{2q} sinc(pi z)^{2q} / Q(z) = (2 pi N)^{2q} / sum_l (z + l)^{-2q}.
  const double scale = std::pow(2.0 * std::numbers::pi * N, 2 * q);
  for (int j = 1; j <= N / 2; ++j) {
    const double z = static_cast<double>(j) / N;
    const double value = scale / inverse_power_sum(z, 2 * q);
    kappa[static_cast<std::size_t>(j - 1)] = value;
    kappa[static_cast<std::size_t>(N - j - 1)] = value;
  }
  kappa[static_cast<std::size_t>(N - 1)] = 0.0;
  return kappa;
}

double SmootherSpec::trace() const {
  return std::accumulate(lambda.begin(), lambda.end(), 0.0);
}

SmootherSpec eigenvalues(int N, int q, double h) {
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw ParameterError("eigenvalues: bandwidth must be positive and finite");
  }
  SmootherSpec spec;
  spec.N = N;
  spec.q = q;
  spec.h = h;
  spec.kappa = *cached_kappa(N, q);
  spec.lambda.resize(spec.kappa.size());
  const double h2q = std::pow(h, 2 * q);
  for (std::size_t i = 0; i < spec.kappa.size(); ++i) {
    spec.lambda[i] = 1.0 / (1.0 + h2q * spec.kappa[i]);
  }
  for (int j = 1; j <= N; ++j) {
    const double lam = spec.lambda[static_cast<std::size_t>(j - 1)];
    if (!(lam > 0.0 && lam <= 1.0)) {
      throw NumericalError("eigenvalues: lambda_" + std::to_string(j) + " outside (0, 1]");
    }
    if (j <= N / 2) {
      const double mirror = spec.lambda[static_cast<std::size_t>(N - j - 1)];
      const double lower = 1.0 / (1.0 + std::pow(2.0 * std::numbers::pi * h * j, 2 * q));
      if (mirror != lam || lam < lower * (1.0 - 1e-12)) {
        throw NumericalError("eigenvalues: kernel invariants violated at j = " +
                             std::to_string(j));
      }
    }
  }
  if (spec.lambda.back() != 1.0) throw NumericalError("eigenvalues: lambda_N != 1");
  return spec;
}

std::vector<int> eigenvalue_upper_bound_violations(const SmootherSpec& spec) {
  std::vector<int> bad;
  for (int j = 1; j <= spec.N / 2; ++j) {
    const double a = std::pow(2.0 * std::numbers::pi * spec.h * j, 2 * spec.q);
    const double upper = 2.0 / (2.0 + a);
    if (spec.lambda[static_cast<std::size_t>(j - 1)] > upper * (1.0 + 1e-12)) {
      bad.push_back(j);
    }
  }
  return bad;
}

std::vector<double> smooth(std::span<const double> ystar, const SmootherSpec& spec) {
  const std::size_t N = ystar.size();
  if (static_cast<int>(N) != spec.N) {
    throw InputError("smooth: data length " + std::to_string(N) +
                     " does not match kernel size " + std::to_string(spec.N));
  }
  std::vector<std::complex<double>> coef(N / 2 + 1);
  fft::forward_real(ystar, coef);
  for (std::size_t k = 0; k < coef.size(); ++k) {
    coef[k] *= spec.lambda_at_frequency(static_cast<int>(k)) / static_cast<double>(N);
  }
  std::vector<double> out(N);
  fft::backward_real(coef, out);
  return out;
}

double smooth_at(double x, std::span<const double> ystar, const SmootherSpec& spec) {
  if (!(x >= 0.0 && x < 1.0)) throw DomainError("smooth_at: x must lie in [0, 1)");
  const std::size_t N = ystar.size();
  if (static_cast<int>(N) != spec.N) throw InputError("smooth_at: length mismatch");
  std::vector<std::complex<double>> coef(N / 2 + 1);
  fft::forward_real(ystar, coef);
  double value = spec.lambda_at_frequency(0) * coef[0].real();
  const std::size_t paired = (N % 2 == 0) ? N / 2 - 1 : N / 2;
  for (std::size_t k = 1; k <= paired; ++k) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) * x;
    const std::complex<double> phase(std::cos(angle), std::sin(angle));
    value += 2.0 * spec.lambda_at_frequency(static_cast<int>(k)) * (coef[k] * phase).real();
  }
  if (N % 2 == 0) {
    value += spec.lambda_at_frequency(static_cast<int>(N / 2)) * coef[N / 2].real() *
             std::cos(std::numbers::pi * static_cast<double>(N) * x);
  }
  return value / static_cast<double>(N);
}

double gcv_score(std::span<const double> ystar, int q, double h) {
  check_inputs(ystar, q, h);
  const auto kappa = cached_kappa(static_cast<int>(ystar.size()), q);
  return score_from_spectrum(spectrum_of(ystar), *kappa, q, h, Score::gcv);
}

double gml_score(std::span<const double> ystar, int q, double h) {
  check_inputs(ystar, q, h);
  const auto kappa = cached_kappa(static_cast<int>(ystar.size()), q);
  return score_from_spectrum(spectrum_of(ystar), *kappa, q, h, Score::gml);
}

std::string to_string(Selection s) {
  switch (s) {
    case Selection::gcv: return "gcv";
    case Selection::gml: return "gml";
    case Selection::fixed: return "fixed";
  }
  return "unknown";
}

Selection parse_selection(const std::string& name) {
  if (name == "gcv") return Selection::gcv;
  if (name == "gml" || name == "ml") return Selection::gml;
  if (name == "fixed") return Selection::fixed;
  throw ParameterError("unknown bandwidth selection '" + name +
                       "' (expected gcv, gml or fixed)");
}

std::vector<double> default_bandwidth_grid(int N) {
  constexpr int points = 60;
  const double lo = std::log(0.25 / N), hi = 0.0;
  std::vector<double> grid(points);
  for (int i = 0; i < points; ++i) {
    grid[static_cast<std::size_t>(i)] = std::exp(lo + (hi - lo) * i / (points - 1));
  }
  return grid;
}

LogSdfEstimate select_bandwidth(std::span<const double> ystar, int q,
                                Selection method, std::span<const double> grid) {
  if (method == Selection::fixed) {
    throw ParameterError("select_bandwidth: use fixed_bandwidth for a fixed h");
  }
  const int N = static_cast<int>(ystar.size());
  check_inputs(ystar, q, 1.0);
  std::vector<double> fallback;
  if (grid.empty()) {
    fallback = default_bandwidth_grid(N);
    grid = fallback;
  }
  const auto kappa = cached_kappa(N, q);
  const Spectrum spectrum = spectrum_of(ystar);
  const Score which = method == Selection::gcv ? Score::gcv : Score::gml;

  // Scores closer than this count as ties, so rounding noise on flat data
  // cannot pull the choice away from the smallest h.
  double energy = 0.0;
  for (double v : ystar) energy += v * v;
  const double tie = 1e-12 * std::max(energy / N, std::numeric_limits<double>::min());

  double best_h = 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (double h : grid) {
    if (!(h > 0.0) || !std::isfinite(h)) {
      throw ParameterError("select_bandwidth: grid values must be positive");
    }
    const double score = score_from_spectrum(spectrum, *kappa, q, h, which);
    if (!std::isfinite(score)) continue;
    const bool better = !std::isfinite(best) || score < best - tie ||
                        (score <= best + tie && h < best_h);
    if (better) {
      best = score;
      best_h = h;
    }
  }
  if (!std::isfinite(best)) {
    throw NumericalError("select_bandwidth: no finite score on the bandwidth grid");
  }
  LogSdfEstimate est;
  est.ghat = smooth(ystar, eigenvalues(N, q, best_h));
  est.h = best_h;
  est.score = best;
  est.method = method;
  return est;
}

LogSdfEstimate fixed_bandwidth(std::span<const double> ystar, int q, double h) {
  check_inputs(ystar, q, h);
  LogSdfEstimate est;
  est.ghat = smooth(ystar, eigenvalues(static_cast<int>(ystar.size()), q, h));
  est.h = h;
  est.score = std::numeric_limits<double>::quiet_NaN();
  est.method = Selection::fixed;
  return est;
}

}  // namespace sdftest
