#include "zenosplit/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "zenosplit/error.hpp"
#include "zenosplit/special.hpp"

namespace zenosplit {
namespace {

constexpr double kPlanckTimesLightSpeedEvNm = 1239.84198;  // h c in eV nm
constexpr int kMaxPassBudget = 2'000'000;

void require_positive(double value, const char* what) {
  if (!std::isfinite(value) || value <= 0.0) {
    throw ValidationError(std::string(what) + " must be positive and finite");
  }
}

int diffracted_order(const ScenarioConfig& config) {
  const auto& tracked = config.tracked_orders;
  if (tracked.size() != 2 || std::count(tracked.begin(), tracked.end(), 0) != 1) {
    throw ValidationError("switch point requires tracked orders {0, target}");
  }
  return tracked[0] == 0 ? tracked[1] : tracked[0];
}

}  // namespace

std::optional<int> first_local_maximum(const std::vector<double>& series) {
  if (series.size() < 3) return std::nullopt;
  const double start = series.front();
  for (std::size_t n = 1; n + 1 < series.size(); ++n) {
    if (series[n] > start && series[n] >= series[n - 1] && series[n] >= series[n + 1]) {
      return static_cast<int>(n);
    }
  }
  return std::nullopt;
}

SwitchPointResult find_switch_point(const ScenarioConfig& config, SwitchPointRule rule) {
  config.validate();
  const int target = diffracted_order(config);

  const IntensityTrace unitary = propagate(config.unitary());
  std::optional<IntensityTrace> attenuated;
  if (config.attenuation_enabled) attenuated = propagate(config);

  const IntensityTrace& search =
      (rule == SwitchPointRule::attenuated_maximum && attenuated) ? *attenuated : unitary;
  const std::optional<int> peak = first_local_maximum(search.column(target));
  if (!peak) {
    throw RuntimeError("no switch point within N_max = " + std::to_string(config.max_passes) +
                       " (diffracted order " + std::to_string(target) +
                       " never peaks; raise N_max or check the coupling)");
  }

  SwitchPointResult result;
  result.switch_point = *peak;
  const IntensityTrace& readout = attenuated ? *attenuated : unitary;
  result.I_direct = readout.intensity(*peak, 0);
  result.I_diffracted = readout.intensity(*peak, target);
  result.efficiency = result.I_direct + result.I_diffracted;

  const double unitary_total = unitary.intensity(*peak, 0) + unitary.intensity(*peak, target);
  if (attenuated) {
    const double transmitted =
        std::pow(attenuation_factor(*config.grating.thickness_nm, *config.grating.mfp_nm), *peak);
    result.inelastic_loss = 1.0 - transmitted;
    result.loss_at_switch = transmitted * (1.0 - unitary_total);
  } else {
    result.loss_at_switch = 1.0 - unitary_total;
  }
  return result;
}

int suggested_pass_budget(double phase_amplitude, int target_order) {
  const double coupling = std::fabs(special::bessel_j(target_order, phase_amplitude / 2.0));
  if (coupling == 0.0) return 16;
  // quarter period of the effective two-mode rotation is about (pi/2) / coupling
  const double estimate = 3.0 * (std::numbers::pi / 2.0) / coupling + 16.0;
  return static_cast<int>(std::min(estimate, static_cast<double>(kMaxPassBudget)));
}

std::vector<LossCurvePoint> loss_curve(const std::vector<double>& phase_amplitudes,
                                       const ApertureSpec& aperture, int half_width) {
  if (aperture.passed_orders.size() != 2 || !aperture.passed_orders.contains(0)) {
    throw ValidationError("loss curve requires an aperture passing {0, target}");
  }
  const int target = *aperture.passed_orders.rbegin() == 0 ? *aperture.passed_orders.begin()
                                                          : *aperture.passed_orders.rbegin();
  std::vector<LossCurvePoint> curve;
  curve.reserve(phase_amplitudes.size());
  for (double amplitude : phase_amplitudes) {
    require_positive(amplitude, "phase amplitude");
    ScenarioConfig config;
    config.grating.kind = GratingKind::sinusoidal;
    config.grating.phase_amplitude = amplitude;
    config.aperture = aperture;
    config.truncation = half_width;
    config.max_passes = suggested_pass_budget(amplitude, target);
    config.tracked_orders = {0, target};
    const SwitchPointResult sp = find_switch_point(config);
    curve.push_back({amplitude, sp.switch_point, sp.loss_at_switch});
  }
  std::stable_sort(curve.begin(), curve.end(), [](const auto& a, const auto& b) {
    return a.switch_point < b.switch_point;
  });
  return curve;
}

SwitchPointResult inelastic_efficiency(const ScenarioConfig& config, SwitchPointRule rule) {
  if (!config.attenuation_enabled) {
    throw ValidationError("inelastic efficiency requires attenuation to be enabled");
  }
  return find_switch_point(config, rule);
}

void MaterialRecord::validate() const {
  if (name.empty()) throw ValidationError("material name must not be empty");
  if (!std::isfinite(v_mip) || v_mip <= 0.0) {
    throw ValidationError("material '" + name + "': V_MIP must be positive");
  }
  if (!std::isfinite(mfp_nm) || mfp_nm <= 0.0) {
    throw ValidationError("material '" + name + "': mfp_nm must be positive");
  }
}

double electron_wavelength_nm(double energy_kev) {
  require_positive(energy_kev, "electron energy");
  const double kinetic_ev = energy_kev * 1e3;
  const double rest_ev = kElectronRestEnergyKeV * 1e3;
  return kPlanckTimesLightSpeedEvNm / std::sqrt(kinetic_ev * (kinetic_ev + 2.0 * rest_ev));
}

double interaction_constant(double energy_kev) {
  require_positive(energy_kev, "electron energy");
  const double volts = energy_kev * 1e3;
  const double e0 = kElectronRestEnergyKeV;
  return 2.0 * std::numbers::pi / (electron_wavelength_nm(energy_kev) * volts) *
         (e0 + energy_kev) / (2.0 * e0 + energy_kev);
}

double required_thickness(double phase, double v_mip, double interaction) {
  require_positive(phase, "phase");
  require_positive(v_mip, "V_MIP");
  require_positive(interaction, "interaction constant");
  return phase / (interaction * v_mip);
}

double efficiency_estimate(double total_phase, double v_mip, double mfp_nm, double interaction) {
  if (!std::isfinite(total_phase) || total_phase < 0.0) {
    throw ValidationError("total phase must be non-negative and finite");
  }
  require_positive(v_mip, "V_MIP");
  require_positive(mfp_nm, "mfp_nm");
  require_positive(interaction, "interaction constant");
  const double product = v_mip * mfp_nm;
  return std::exp(-total_phase / (interaction * product));
}

std::vector<Contour> mip_mfp_contours(const std::vector<double>& products, double v_min,
                                      double v_max, int samples) {
  require_positive(v_min, "V_MIP range start");
  require_positive(v_max, "V_MIP range end");
  if (v_max <= v_min) throw ValidationError("V_MIP range must be increasing");
  if (samples < 2) throw ValidationError("contours need at least two samples");
  std::vector<Contour> contours;
  contours.reserve(products.size());
  for (double p : products) {
    require_positive(p, "MIP-MFP product");
    Contour contour{p, {}};
    contour.points.reserve(static_cast<std::size_t>(samples));
    for (int i = 0; i < samples; ++i) {
      const double v = v_min + (v_max - v_min) * i / (samples - 1);
      contour.points.emplace_back(v, p / v);
    }
    contours.push_back(std::move(contour));
  }
  return contours;
}

SwitchPointResult vortex_selection(double phase_amplitude, int charge, int half_width,
                                   int max_passes) {
  if (charge == 0 || std::abs(charge) > half_width) {
    throw ValidationError("topological charge must satisfy 1 <= |l| <= M, got " +
                          std::to_string(charge));
  }
  ScenarioConfig config;
  config.grating.kind = GratingKind::fork_hologram;
  config.grating.phase_amplitude = phase_amplitude;
  config.truncation = half_width;
  config.aperture = ApertureSpec{{0, charge}};
  config.tracked_orders = {0, charge};
  config.max_passes = max_passes > 0 ? max_passes : suggested_pass_budget(phase_amplitude, charge);
  return find_switch_point(config);
}

}  // namespace zenosplit
