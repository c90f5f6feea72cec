#pragma once

#include <cstdint>
#include <memory>
#include <numbers>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace sdftest {

/// Normalisation carried by the parametric families: (2 pi)^-1.
inline constexpr double kInvTwoPi = 0.5 * std::numbers::inv_pi;

class SpectralModel;

/// f(x) = (2 pi)^-1 / (1 - 2 phi cos x + phi^2), |phi| < 1.
struct AR1 {
  double phi;
};

/// f(x) = (2 pi)^-1 / (1 + phi1^2 + phi2^2 + 2 phi1 (phi2 - 1) cos x - 2 phi2 cos 2x).
struct AR2 {
  double phi1;
  double phi2;
};

/// f(x) = (2 pi)^-1 (1 + 2 theta cos x + theta^2).
struct MA1 {
  double theta;
};

/// f(x) = scale * (|cos(x/2 - phase_shift)|^exponent + offset).
struct CosinePower {
  double exponent;
  double phase_shift;
  double offset;
  double scale;
};

/// (1 - delta) * left + delta * right.
struct Mixture {
  double delta;
  std::shared_ptr<const SpectralModel> left;
  std::shared_ptr<const SpectralModel> right;
};

/// Values at equispaced points of [0, 1] (frequency divided by pi), linearly
/// interpolated, constant beyond the end points.
struct Tabulated {
  std::vector<double> grid_values;
};

/// A strictly positive, bounded spectral density on [0, pi].
///
/// Instances are immutable and validated on construction; copies share the
/// children of a mixture.
class SpectralModel {
 public:
  using Variant = std::variant<AR1, AR2, MA1, CosinePower, Mixture, Tabulated>;

  static SpectralModel ar1(double phi);
  static SpectralModel ar2(double phi1, double phi2);
  static SpectralModel ma1(double theta);
  static SpectralModel cosine_power(double exponent, double phase_shift,
                                    double offset, double scale);
  static SpectralModel mixture(double delta, SpectralModel left,
                               SpectralModel right);
  static SpectralModel tabulated(std::vector<double> grid_values);
  /// f == c, stored as a two-point table.
  static SpectralModel constant(double c);

  /// Density at x in [0, pi]; throws DomainError otherwise.
  double operator()(double x) const;

  const Variant& variant() const noexcept { return v_; }

  template <class T>
  bool is() const noexcept {
    return std::holds_alternative<T>(v_);
  }

  /// Short human-readable description, e.g. "ar1(phi=0.5)".
  std::string name() const;

 private:
  explicit SpectralModel(Variant v) : v_(std::move(v)) {}
  double eval_unchecked(double x) const;

  Variant v_;
};

/// Evaluates the density at x in [0, pi].
double eval_sdf(const SpectralModel& model, double x);

/// gamma(0), ..., gamma(L) with gamma(h) = int_0^1 f(pi x) cos(h pi x) dx.
struct Autocovariance {
  std::vector<double> values;

  int max_lag() const noexcept { return static_cast<int>(values.size()) - 1; }
  double operator[](std::size_t h) const { return values[h]; }
};

/// Autocovariances up to max_lag.
///
/// Parametric families use composite Simpson quadrature evaluated for all
/// lags at once through a DCT-I, doubling the grid (starting from
/// quad_points, or 2 * max_lag if larger) until the largest change relative
/// to gamma(0) drops below 1e-8. Tabulated densities are integrated exactly
/// piece by piece; mixtures combine the autocovariances of their parts.
Autocovariance autocovariance(const SpectralModel& model, int max_lag,
                              int quad_points = 256);

/// Closed forms for AR1 and MA1 (throws ParameterError for other variants).
Autocovariance closed_form_autocovariance(const SpectralModel& model,
                                          int max_lag);

enum class SettingSource { main, supplement };

/// The pair (f1, f2_delta) with f2_delta = (1 - delta) f1 + delta f~ for
/// simulation settings 1-3 of the main study or of the supplementary ROC study.
std::pair<SpectralModel, SpectralModel> make_setting(int setting_id,
                                                     SettingSource source,
                                                     double delta);

/// Penalty order used with each setting (6, 1, 5 for the main study, 4 for
/// the supplementary one).
int setting_penalty_order(int setting_id, SettingSource source);

SettingSource parse_setting_source(const std::string& name);
std::string to_string(SettingSource source);

/// {"variant": ..., "parameters": {...}}
void to_json(nlohmann::json& j, const SpectralModel& model);
SpectralModel model_from_json(const nlohmann::json& j);

}  // namespace sdftest
