#pragma once

#include <string>
#include <utility>
#include <vector>

#include "zenosplit/resonator.hpp"

namespace zenosplit {

struct SwitchPointResult {
  int switch_point = 0;
  double I_direct = 0.0;
  double I_diffracted = 0.0;
  /// Diffraction loss: intensity the aperture (or untracked orders) took,
  /// expressed on the reported state.
  double loss_at_switch = 0.0;
  /// 1 - T^N at the switch point; zero without attenuation.
  double inelastic_loss = 0.0;
  /// I_direct + I_diffracted, read from the attenuated trace when enabled.
  double efficiency = 0.0;

  friend bool operator==(const SwitchPointResult&, const SwitchPointResult&) = default;
};

enum class SwitchPointRule {
  /// First maximum of the attenuation-free diffracted intensity.
  unitary_maximum,
  /// First maximum of the attenuated diffracted intensity.
  attenuated_maximum,
};

/// Smallest N >= 1 where the diffracted intensity reaches its first local
/// maximum, given a trace over passes 0..N_max. Returns nullopt when the
/// trace never rises or is still rising at N_max.
std::optional<int> first_local_maximum(const std::vector<double>& series);

/// Switch point of a scenario tracking {0, target}. The diffracted order is
/// the tracked order other than 0. Throws RuntimeError when no switch point
/// lies within max_passes.
SwitchPointResult find_switch_point(const ScenarioConfig& config,
                                    SwitchPointRule rule = SwitchPointRule::unitary_maximum);

struct LossCurvePoint {
  double phase_amplitude = 0.0;
  int switch_point = 0;
  double loss = 0.0;
  friend bool operator==(const LossCurvePoint&, const LossCurvePoint&) = default;
};

/// Pass budget generous enough to contain the first transfer maximum into
/// `target` for a sinusoidal grating of amplitude A.
int suggested_pass_budget(double phase_amplitude, int target_order);

/// Diffraction loss at the switch point for each amplitude, attenuation off.
/// Result is sorted ascending by switch point.
std::vector<LossCurvePoint> loss_curve(const std::vector<double>& phase_amplitudes,
                                       const ApertureSpec& aperture,
                                       int half_width = kDefaultTruncation);

/// Switch point of an attenuating grating with efficiency read at it.
SwitchPointResult inelastic_efficiency(const ScenarioConfig& config,
                                       SwitchPointRule rule = SwitchPointRule::unitary_maximum);

struct MaterialRecord {
  std::string name;
  double v_mip = 0.0;   // volts
  double mfp_nm = 0.0;  // inelastic mean free path
  std::string source;

  void validate() const;
  friend bool operator==(const MaterialRecord&, const MaterialRecord&) = default;
};

inline constexpr double kElectronRestEnergyKeV = 510.99895;

/// Relativistic de Broglie wavelength of an electron accelerated to `energy_kev`.
double electron_wavelength_nm(double energy_kev);

/// Phase shift per volt per nanometre of projected potential,
/// C = 2 pi / (lambda U) * (E0 + eU) / (2 E0 + eU).
double interaction_constant(double energy_kev);

struct ElectronBeamParams {
  double energy_kev = 200.0;
  double interaction_constant() const { return zenosplit::interaction_constant(energy_kev); }
};

/// Thickness that imposes `phase` for mean inner potential v_mip.
double required_thickness(double phase, double v_mip, double interaction);

/// exp(-phase / (C * V_MIP * lambda)): transmission through the thickness
/// needed to accumulate `total_phase`. The product V_MIP * lambda is formed
/// first, so the result depends on the pair only through it.
double efficiency_estimate(double total_phase, double v_mip, double mfp_nm, double interaction);

struct Contour {
  double product = 0.0;                             // V_MIP * lambda, nm V
  std::vector<std::pair<double, double>> points;    // (V_MIP, lambda)
  friend bool operator==(const Contour&, const Contour&) = default;
};

/// lambda = p / V_MIP sampled at `samples` evenly spaced V_MIP in [v_min, v_max].
std::vector<Contour> mip_mfp_contours(const std::vector<double>& products, double v_min,
                                      double v_max, int samples = 26);

/// Fork hologram with aperture {0, charge}; switch point into order `charge`.
SwitchPointResult vortex_selection(double phase_amplitude, int charge,
                                   int half_width = kDefaultTruncation, int max_passes = 0);

}  // namespace zenosplit
