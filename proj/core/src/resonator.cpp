#include "zenosplit/resonator.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "zenosplit/error.hpp"

namespace zenosplit {

BeamState::BeamState(OrderBasis basis, ComplexVector amplitudes)
    : basis_(basis), amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() != basis_.size()) {
    throw ValidationError("beam state length does not match its order basis");
  }
}

BeamState initial_state(const OrderBasis& basis) {
  ComplexVector amplitudes = ComplexVector::Zero(basis.size());
  amplitudes[basis.position(0)] = 1.0;
  return BeamState(basis, std::move(amplitudes));
}

BeamState initial_state(int half_width) { return initial_state(OrderBasis::window(half_width)); }

ScatteringOperator compose_pass(const ScatteringOperator& grating,
                                const std::optional<ScatteringOperator>& aperture,
                                double amplitude_scale) {
  if (!(amplitude_scale > 0.0 && amplitude_scale <= 1.0)) {
    throw ValidationError("amplitude scale must lie in (0, 1]");
  }
  const OperatorFlavor flavor =
      amplitude_scale < 1.0 ? OperatorFlavor::attenuated : grating.flavor();
  if (!aperture) {
    return ScatteringOperator(grating.basis(), amplitude_scale * grating.matrix(), flavor);
  }
  if (!(aperture->basis() == grating.basis())) {
    throw ValidationError("aperture and grating operators act on different order bases");
  }
  ComplexMatrix product = amplitude_scale * (grating.matrix() * aperture->matrix());
  return ScatteringOperator(grating.basis(), std::move(product), flavor);
}

void ScenarioConfig::validate() const {
  grating.validate();
  if (max_passes < 1) {
    throw ValidationError("N_max must be >= 1, got " + std::to_string(max_passes));
  }
  const OrderBasis b = basis();
  if (tracked_orders.empty()) throw ValidationError("tracked_orders must not be empty");
  std::set<int> seen;
  for (int order : tracked_orders) {
    if (!b.contains(order)) {
      throw ValidationError("tracked order " + std::to_string(order) + " outside [" +
                            std::to_string(b.first_order()) + ", " +
                            std::to_string(b.last_order()) + "]");
    }
    if (!seen.insert(order).second) {
      throw ValidationError("tracked order " + std::to_string(order) + " listed twice");
    }
  }
  if (aperture) {
    if (aperture->passed_orders.empty()) throw ValidationError("aperture must pass at least one order");
    for (int order : aperture->passed_orders) {
      if (!b.contains(order)) {
        throw ValidationError("aperture order " + std::to_string(order) + " outside [" +
                              std::to_string(b.first_order()) + ", " +
                              std::to_string(b.last_order()) + "]");
      }
    }
    if (!aperture->passed_orders.contains(0)) {
      throw ValidationError("aperture must pass the direct beam (order 0)");
    }
    for (int order : tracked_orders) {
      if (!aperture->passed_orders.contains(order)) {
        throw ValidationError("tracked order " + std::to_string(order) +
                              " is blocked by the aperture");
      }
    }
  }
  if (attenuation_enabled && (!grating.thickness_nm || !grating.mfp_nm)) {
    throw ValidationError("attenuation requires grating thickness_nm and mfp_nm");
  }
}

OrderBasis ScenarioConfig::basis() const {
  if (grating.kind == GratingKind::crystal_two_beam) return OrderBasis::two_beam();
  return OrderBasis::window(truncation);
}

double ScenarioConfig::amplitude_scale() const {
  if (!attenuation_enabled) return 1.0;
  return std::sqrt(attenuation_factor(*grating.thickness_nm, *grating.mfp_nm));
}

ScenarioConfig ScenarioConfig::unitary() const {
  ScenarioConfig copy = *this;
  copy.attenuation_enabled = false;
  return copy;
}

double IntensityTrace::intensity(int pass, int order) const {
  const auto it = std::find(tracked_orders.begin(), tracked_orders.end(), order);
  if (it == tracked_orders.end()) {
    throw ValidationError("order " + std::to_string(order) + " is not tracked");
  }
  if (pass < 0 || pass > max_pass()) {
    throw ValidationError("pass " + std::to_string(pass) + " outside the trace");
  }
  return rows[pass].intensities[it - tracked_orders.begin()];
}

std::vector<double> IntensityTrace::column(int order) const {
  const auto it = std::find(tracked_orders.begin(), tracked_orders.end(), order);
  if (it == tracked_orders.end()) {
    throw ValidationError("order " + std::to_string(order) + " is not tracked");
  }
  const auto index = it - tracked_orders.begin();
  std::vector<double> out;
  out.reserve(rows.size());
  for (const TraceRow& row : rows) out.push_back(row.intensities[index]);
  return out;
}

ScatteringOperator grating_operator(const ScenarioConfig& config) {
  switch (config.grating.kind) {
    case GratingKind::crystal_two_beam:
      return crystal_two_beam_matrix(config.grating.t_over_xi);
    case GratingKind::sinusoidal:
      return sinusoidal_grating_matrix(config.grating.phase_amplitude, config.truncation);
    case GratingKind::fork_hologram:
      return fork_hologram_matrix(config.grating.phase_amplitude, config.truncation).op;
  }
  throw ValidationError("unknown grating kind");
}

namespace {

TraceRow record(int pass, const BeamState& state, const std::vector<int>& tracked, bool lossy) {
  TraceRow row;
  row.pass = pass;
  row.intensities.reserve(tracked.size());
  for (int order : tracked) {
    const double value = state.intensity(order);
    row.intensities.push_back(value);
    row.total += value;
  }
  row.loss = lossy ? 1.0 - state.squared_norm() : 0.0;
  return row;
}

}  // namespace

IntensityTrace propagate(const ScenarioConfig& config, PassOrder order) {
  config.validate();
  const ScatteringOperator grating = grating_operator(config);
  std::optional<ScatteringOperator> aperture;
  if (config.aperture) aperture = aperture_matrix(*config.aperture, grating.basis());
  const double scale = config.amplitude_scale();

  ComplexMatrix pass_matrix;
  if (order == PassOrder::aperture_then_grating || !aperture) {
    pass_matrix = compose_pass(grating, aperture, scale).matrix();
  } else {
    pass_matrix = scale * (aperture->matrix() * grating.matrix());
  }

  // Columns of blocked orders are zero; skipping them leaves the product unchanged.
  std::vector<Eigen::Index> active;
  for (Eigen::Index c = 0; c < pass_matrix.cols(); ++c) {
    if (!pass_matrix.col(c).isZero(0.0)) active.push_back(c);
  }
  const bool dense = static_cast<Eigen::Index>(active.size()) == pass_matrix.cols();

  const bool lossy = config.aperture.has_value() || config.attenuation_enabled;
  BeamState state = initial_state(grating.basis());
  ComplexVector next(state.amplitudes().size());

  IntensityTrace trace;
  trace.tracked_orders = config.tracked_orders;
  trace.rows.reserve(static_cast<std::size_t>(config.max_passes) + 1);
  trace.rows.push_back(record(0, state, config.tracked_orders, lossy));
  for (int pass = 1; pass <= config.max_passes; ++pass) {
    if (dense) {
      next.noalias() = pass_matrix * state.amplitudes();
    } else {
      next.setZero();
      for (Eigen::Index c : active) next += pass_matrix.col(c) * state.amplitudes()[c];
    }
    state.amplitudes().swap(next);
    trace.rows.push_back(record(pass, state, config.tracked_orders, lossy));
  }
  return trace;
}

}  // namespace zenosplit
