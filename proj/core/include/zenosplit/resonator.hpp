#pragma once

#include <optional>
#include <vector>

#include "zenosplit/optics.hpp"

namespace zenosplit {

/// Electron wavefunction as one complex amplitude per diffraction order.
class BeamState {
 public:
  BeamState(OrderBasis basis, ComplexVector amplitudes);

  const OrderBasis& basis() const { return basis_; }
  const ComplexVector& amplitudes() const { return amplitudes_; }
  ComplexVector& amplitudes() { return amplitudes_; }

  Complex amplitude(int order) const { return amplitudes_[basis_.position(order)]; }
  double intensity(int order) const { return std::norm(amplitude(order)); }
  double squared_norm() const { return amplitudes_.squaredNorm(); }

 private:
  OrderBasis basis_;
  ComplexVector amplitudes_;
};

/// Unit amplitude in the direct beam, zero elsewhere.
BeamState initial_state(const OrderBasis& basis);
BeamState initial_state(int half_width);

/// One pass through the resonator: amplitude_scale * S * S_aper, with the
/// aperture acting first. Without an aperture this is amplitude_scale * S.
ScatteringOperator compose_pass(const ScatteringOperator& grating,
                                const std::optional<ScatteringOperator>& aperture,
                                double amplitude_scale = 1.0);

struct ScenarioConfig {
  GratingSpec grating;
  std::optional<ApertureSpec> aperture;
  int truncation = kDefaultTruncation;  // half-width M; ignored for the two-beam crystal
  int max_passes = 1;
  bool attenuation_enabled = false;
  std::vector<int> tracked_orders{0, 1};

  void validate() const;
  OrderBasis basis() const;
  /// sqrt(T) when attenuation is enabled, else 1.
  double amplitude_scale() const;
  /// Copy with attenuation switched off.
  ScenarioConfig unitary() const;

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

struct TraceRow {
  int pass = 0;
  std::vector<double> intensities;  // aligned with IntensityTrace::tracked_orders
  double total = 0.0;               // sum over tracked orders
  double loss = 0.0;                // 1 - squared norm of the state
  friend bool operator==(const TraceRow&, const TraceRow&) = default;
};

struct IntensityTrace {
  std::vector<int> tracked_orders;
  std::vector<TraceRow> rows;  // rows[n].pass == n

  int max_pass() const { return static_cast<int>(rows.size()) - 1; }
  /// Intensity of `order` after `pass` passes.
  double intensity(int pass, int order) const;
  std::vector<double> column(int order) const;

  friend bool operator==(const IntensityTrace&, const IntensityTrace&) = default;
};

/// Where the aperture sits relative to the grating within one pass. Only
/// the default matches S * S_aper; the other exists to check that tracked
/// intensities do not depend on the choice.
enum class PassOrder { aperture_then_grating, grating_then_aperture };

/// Iterates the per-pass operator max_passes times on the initial state and
/// records tracked intensities, their total, and the loss after every pass.
IntensityTrace propagate(const ScenarioConfig& config,
                         PassOrder order = PassOrder::aperture_then_grating);

/// Per-pass grating operator for `config` (crystal, sinusoidal or fork).
ScatteringOperator grating_operator(const ScenarioConfig& config);

}  // namespace zenosplit
