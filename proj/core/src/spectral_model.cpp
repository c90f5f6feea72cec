#include "sdftest/spectral_model.hpp"

#include <algorithm>
#include <cmath>
#include <nlohmann/json.hpp>
#include <sstream>

#include "sdftest/error.hpp"

namespace sdftest {
namespace {

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw ParameterError(std::string(what) + " must be finite");
  }
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

SpectralModel SpectralModel::ar1(double phi) {
  require_finite(phi, "ar1 phi");
  if (!(std::abs(phi) < 1.0)) {
    throw ParameterError("ar1: stationarity requires |phi| < 1, got " + fmt(phi));
  }
  return SpectralModel(AR1{phi});
}

SpectralModel SpectralModel::ar2(double phi1, double phi2) {
  require_finite(phi1, "ar2 phi1");
  require_finite(phi2, "ar2 phi2");
  if (!(phi2 > -1.0 && phi2 < 1.0 && phi1 + phi2 < 1.0 && phi2 - phi1 < 1.0)) {
    throw ParameterError("ar2: (phi1, phi2) = (" + fmt(phi1) + ", " + fmt(phi2) +
                         ") is outside the stationarity triangle");
  }
  return SpectralModel(AR2{phi1, phi2});
}

SpectralModel SpectralModel::ma1(double theta) {
  require_finite(theta, "ma1 theta");
  if (std::abs(theta) == 1.0) {
    throw ParameterError("ma1: |theta| = 1 gives a density with a zero");
  }
  return SpectralModel(MA1{theta});
}

SpectralModel SpectralModel::cosine_power(double exponent, double phase_shift,
                                          double offset, double scale) {
  require_finite(exponent, "cosine_power exponent");
  require_finite(phase_shift, "cosine_power phase_shift");
  require_finite(offset, "cosine_power offset");
  require_finite(scale, "cosine_power scale");
  if (!(exponent > 0.0) || !(offset > 0.0) || !(scale > 0.0)) {
    throw ParameterError(
        "cosine_power: exponent, offset and scale must all be positive");
  }
  return SpectralModel(CosinePower{exponent, phase_shift, offset, scale});
}

SpectralModel SpectralModel::mixture(double delta, SpectralModel left,
                                     SpectralModel right) {
  if (!(delta >= 0.0 && delta <= 1.0)) {
    throw ParameterError("mixture: delta must lie in [0, 1], got " + fmt(delta));
  }
  return SpectralModel(
      Mixture{delta, std::make_shared<const SpectralModel>(std::move(left)),
              std::make_shared<const SpectralModel>(std::move(right))});
}

SpectralModel SpectralModel::tabulated(std::vector<double> grid_values) {
  if (grid_values.size() < 2) {
    throw ParameterError("tabulated: need at least two grid values");
  }
  for (double v : grid_values) {
    if (!std::isfinite(v) || !(v > 0.0)) {
      throw ParameterError("tabulated: grid values must be finite and > 0");
    }
  }
  return SpectralModel(Tabulated{std::move(grid_values)});
}

SpectralModel SpectralModel::constant(double c) {
  return tabulated({c, c});
}

double SpectralModel::operator()(double x) const {
  if (!(x >= 0.0 && x <= std::numbers::pi)) {
    throw DomainError("spectral density evaluated outside [0, pi]: x = " + fmt(x));
  }
  return eval_unchecked(x);
}

double SpectralModel::eval_unchecked(double x) const {
  return std::visit(
      Overloaded{
          [x](const AR1& m) {
            return kInvTwoPi / (1.0 - 2.0 * m.phi * std::cos(x) + m.phi * m.phi);
          },
          [x](const AR2& m) {
            const double d = 1.0 + m.phi1 * m.phi1 + m.phi2 * m.phi2 +
                             2.0 * m.phi1 * (m.phi2 - 1.0) * std::cos(x) -
                             2.0 * m.phi2 * std::cos(2.0 * x);
            return kInvTwoPi / d;
          },
          [x](const MA1& m) {
            return kInvTwoPi * (1.0 + 2.0 * m.theta * std::cos(x) + m.theta * m.theta);
          },
          [x](const CosinePower& m) {
            const double c = std::abs(std::cos(0.5 * x - m.phase_shift));
            return m.scale * (std::pow(c, m.exponent) + m.offset);
          },
          [x](const Mixture& m) {
            return (1.0 - m.delta) * m.left->eval_unchecked(x) +
                   m.delta * m.right->eval_unchecked(x);
          },
          [x](const Tabulated& m) {
            const auto& g = m.grid_values;
            const double pos = std::clamp(x * std::numbers::inv_pi, 0.0, 1.0) *
                               static_cast<double>(g.size() - 1);
            const auto i = std::min(static_cast<std::size_t>(pos), g.size() - 2);
            const double w = pos - static_cast<double>(i);
            return (1.0 - w) * g[i] + w * g[i + 1];
          },
      },
      v_);
}

std::string SpectralModel::name() const {
  // Names end up in CSV headers, so they must not contain commas.
  return std::visit(
      Overloaded{
          [](const AR1& m) { return "ar1(phi=" + fmt(m.phi) + ")"; },
          [](const AR2& m) {
            return "ar2(phi1=" + fmt(m.phi1) + ";phi2=" + fmt(m.phi2) + ")";
          },
          [](const MA1& m) { return "ma1(theta=" + fmt(m.theta) + ")"; },
          [](const CosinePower& m) {
            return "cosine_power(exponent=" + fmt(m.exponent) +
                   ";phase_shift=" + fmt(m.phase_shift) +
                   ";offset=" + fmt(m.offset) + ";scale=" + fmt(m.scale) + ")";
          },
          [](const Mixture& m) {
            return "mixture(delta=" + fmt(m.delta) + ";" + m.left->name() + ";" +
                   m.right->name() + ")";
          },
          [](const Tabulated& m) {
            return "tabulated(n=" + std::to_string(m.grid_values.size()) + ")";
          },
      },
      v_);
}

double eval_sdf(const SpectralModel& model, double x) { return model(x); }

std::pair<SpectralModel, SpectralModel> make_setting(int setting_id,
                                                     SettingSource source,
                                                     double delta) {
  constexpr double pi = std::numbers::pi;
  auto build = [&]() -> std::pair<SpectralModel, SpectralModel> {
    if (source == SettingSource::main) {
      switch (setting_id) {
        case 1:
          return {SpectralModel::ar1(0.5), SpectralModel::ar1(0.8)};
        case 2:
          return {SpectralModel::cosine_power(1.3, 0.0, 0.45, kInvTwoPi),
                  SpectralModel::ar2(0.3, -0.5)};
        case 3:
          return {SpectralModel::cosine_power(5.1, 0.0, 0.45, kInvTwoPi),
                  SpectralModel::cosine_power(5.1, 0.2 * pi, 0.45, kInvTwoPi)};
        default:
          break;
      }
    } else {
      constexpr double scale = 1.44 * kInvTwoPi;
      switch (setting_id) {
        case 1: {
          const double phi = 0.8;
          return {SpectralModel::ar1(phi),
                  SpectralModel::ma1(phi / std::sqrt(1.0 - phi * phi))};
        }
        case 2:
          return {SpectralModel::cosine_power(5.1, 0.0, 0.45, scale),
                  SpectralModel::cosine_power(3.1, 0.2 * pi, 0.45, scale)};
        case 3: {
          auto f = SpectralModel::cosine_power(5.1, 0.0, 0.45, scale);
          auto g = SpectralModel::cosine_power(3.1, 0.2 * pi, 0.45, scale);
          return {f, SpectralModel::mixture(0.3, f, g)};
        }
        default:
          break;
      }
    }
    throw ParameterError("unknown setting id " + std::to_string(setting_id) +
                         " (expected 1, 2 or 3)");
  };
  auto [f1, alternative] = build();
  auto f2 = SpectralModel::mixture(delta, f1, std::move(alternative));
  return {std::move(f1), std::move(f2)};
}

int setting_penalty_order(int setting_id, SettingSource source) {
  if (setting_id < 1 || setting_id > 3) {
    throw ParameterError("unknown setting id " + std::to_string(setting_id));
  }
  if (source == SettingSource::supplement) return 4;
  constexpr int orders[] = {6, 1, 5};
  return orders[setting_id - 1];
}

SettingSource parse_setting_source(const std::string& name) {
  if (name == "main") return SettingSource::main;
  if (name == "supplement" || name == "supp") return SettingSource::supplement;
  throw ParameterError("unknown setting source '" + name +
                       "' (expected main or supplement)");
}

std::string to_string(SettingSource source) {
  return source == SettingSource::main ? "main" : "supplement";
}

void to_json(nlohmann::json& j, const SpectralModel& model) {
  std::visit(
      Overloaded{
          [&](const AR1& m) {
            j = {{"variant", "ar1"}, {"parameters", {{"phi", m.phi}}}};
          },
          [&](const AR2& m) {
            j = {{"variant", "ar2"},
                 {"parameters", {{"phi1", m.phi1}, {"phi2", m.phi2}}}};
          },
          [&](const MA1& m) {
            j = {{"variant", "ma1"}, {"parameters", {{"theta", m.theta}}}};
          },
          [&](const CosinePower& m) {
            j = {{"variant", "cosine_power"},
                 {"parameters",
                  {{"exponent", m.exponent},
                   {"phase_shift", m.phase_shift},
                   {"offset", m.offset},
                   {"scale", m.scale}}}};
          },
          [&](const Mixture& m) {
            j = {{"variant", "mixture"},
                 {"parameters",
                  {{"delta", m.delta}, {"left", *m.left}, {"right", *m.right}}}};
          },
          [&](const Tabulated& m) {
            j = {{"variant", "tabulated"},
                 {"parameters", {{"grid_values", m.grid_values}}}};
          },
      },
      model.variant());
}

SpectralModel model_from_json(const nlohmann::json& j) {
  try {
    const auto variant = j.at("variant").get<std::string>();
    const auto& p = j.at("parameters");
    if (variant == "ar1") return SpectralModel::ar1(p.at("phi").get<double>());
    if (variant == "ar2") {
      return SpectralModel::ar2(p.at("phi1").get<double>(),
                                p.at("phi2").get<double>());
    }
    if (variant == "ma1") return SpectralModel::ma1(p.at("theta").get<double>());
    if (variant == "cosine_power") {
      return SpectralModel::cosine_power(
          p.at("exponent").get<double>(), p.value("phase_shift", 0.0),
          p.at("offset").get<double>(), p.value("scale", kInvTwoPi));
    }
    if (variant == "mixture") {
      return SpectralModel::mixture(p.at("delta").get<double>(),
                                    model_from_json(p.at("left")),
                                    model_from_json(p.at("right")));
    }
    if (variant == "tabulated") {
      return SpectralModel::tabulated(
          p.at("grid_values").get<std::vector<double>>());
    }
    throw ParameterError("unknown model variant '" + variant + "'");
  } catch (const nlohmann::json::exception& e) {
    throw ParameterError(std::string("malformed model JSON: ") + e.what());
  }
}

}  // namespace sdftest
