#include "zenosplit/optics.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "zenosplit/error.hpp"
#include "zenosplit/special.hpp"

namespace zenosplit {
namespace {

void require_finite(double value, const char* what) {
  if (!std::isfinite(value)) throw ValidationError(std::string(what) + " must be finite");
}

void require_half_width(int half_width) {
  if (half_width < 1) {
    throw ValidationError("truncation half-width M must be >= 1, got " + std::to_string(half_width));
  }
}

}  // namespace

OrderBasis OrderBasis::window(int half_width) {
  require_half_width(half_width);
  return OrderBasis(-half_width, 2 * half_width + 1);
}

OrderBasis OrderBasis::two_beam() { return OrderBasis(0, 2); }

int OrderBasis::position(int order) const {
  if (!contains(order)) {
    throw ValidationError("diffraction order " + std::to_string(order) + " outside [" +
                          std::to_string(first_) + ", " + std::to_string(last_order()) + "]");
  }
  return order - first_;
}

ScatteringOperator::ScatteringOperator(OrderBasis basis, ComplexMatrix entries, OperatorFlavor flavor)
    : basis_(basis), entries_(std::move(entries)), flavor_(flavor) {
  if (entries_.rows() != basis_.size() || entries_.cols() != basis_.size()) {
    throw ValidationError("scattering operator dimension does not match its order basis");
  }
}

Complex ScatteringOperator::coupling(int to, int from) const {
  return entries_(basis_.position(to), basis_.position(from));
}

void GratingSpec::validate() const {
  switch (kind) {
    case GratingKind::crystal_two_beam:
      require_finite(t_over_xi, "t_over_xi");
      if (t_over_xi < 0.0 || t_over_xi > 0.5) {
        throw ValidationError("t_over_xi must lie in [0, 0.5], got " + std::to_string(t_over_xi));
      }
      break;
    case GratingKind::sinusoidal:
    case GratingKind::fork_hologram:
      require_finite(phase_amplitude, "phase amplitude");
      if (phase_amplitude < 0.0) throw ValidationError("phase amplitude must be >= 0");
      break;
  }
  if (thickness_nm) {
    require_finite(*thickness_nm, "thickness_nm");
    if (*thickness_nm < 0.0) throw ValidationError("thickness_nm must be >= 0");
  }
  if (mfp_nm) {
    require_finite(*mfp_nm, "mfp_nm");
    if (*mfp_nm <= 0.0) throw ValidationError("mfp_nm must be > 0");
  }
  if (pitch_nm && !(*pitch_nm > 0.0)) throw ValidationError("pitch_nm must be > 0");
}

ScatteringOperator crystal_two_beam_matrix(double t_over_xi) {
  require_finite(t_over_xi, "t_over_xi");
  if (t_over_xi < 0.0 || t_over_xi > 0.5) {
    throw ValidationError("t_over_xi must lie in [0, 0.5], got " + std::to_string(t_over_xi));
  }
  const double theta = std::numbers::pi * t_over_xi;
  const Complex c(std::cos(theta), 0.0);
  const Complex s(0.0, std::sin(theta));
  ComplexMatrix m(2, 2);
  m << c, s, s, c;
  return ScatteringOperator(OrderBasis::two_beam(), std::move(m), OperatorFlavor::unitary_coupler);
}

ScatteringOperator sinusoidal_grating_matrix(double phase_amplitude, int half_width) {
  require_finite(phase_amplitude, "phase amplitude");
  if (phase_amplitude < 0.0) throw ValidationError("phase amplitude must be >= 0");
  const OrderBasis basis = OrderBasis::window(half_width);
  const int dim = basis.size();
  const double x = phase_amplitude / 2.0;

  // Toeplitz: one Bessel value per diagonal offset j - i in [-(dim-1), dim-1].
  std::vector<double> diagonal(2 * dim - 1);
  for (int offset = -(dim - 1); offset <= dim - 1; ++offset) {
    diagonal[offset + dim - 1] = special::bessel_j(offset, x);
  }
  ComplexMatrix m(dim, dim);
  for (int j = 0; j < dim; ++j) {
    for (int i = 0; i < dim; ++i) m(i, j) = diagonal[j - i + dim - 1];
  }
  return ScatteringOperator(basis, std::move(m), OperatorFlavor::unitary_coupler);
}

Complex grating_profile(double phase_amplitude, double x_over_pitch) {
  require_finite(phase_amplitude, "phase amplitude");
  require_finite(x_over_pitch, "position");
  if (phase_amplitude < 0.0) throw ValidationError("phase amplitude must be >= 0");
  const double phase = 0.5 * phase_amplitude * std::sin(2.0 * std::numbers::pi * x_over_pitch);
  return std::polar(1.0, phase);
}

ForkHologram fork_hologram_matrix(double phase_amplitude, int half_width) {
  ScatteringOperator op = sinusoidal_grating_matrix(phase_amplitude, half_width);
  std::map<int, int> charges;
  for (int k = -half_width; k <= half_width; ++k) charges.emplace(k, k);
  return ForkHologram{std::move(op), std::move(charges)};
}

ScatteringOperator aperture_matrix(const ApertureSpec& spec, const OrderBasis& basis) {
  if (spec.passed_orders.empty()) throw ValidationError("aperture must pass at least one order");
  ComplexMatrix m = ComplexMatrix::Zero(basis.size(), basis.size());
  for (int order : spec.passed_orders) {
    const int p = basis.position(order);
    m(p, p) = 1.0;
  }
  return ScatteringOperator(basis, std::move(m), OperatorFlavor::projector);
}

ScatteringOperator aperture_matrix(const ApertureSpec& spec, int half_width) {
  return aperture_matrix(spec, OrderBasis::window(half_width));
}

double attenuation_factor(double thickness_nm, double mfp_nm) {
  require_finite(thickness_nm, "thickness_nm");
  require_finite(mfp_nm, "mfp_nm");
  if (thickness_nm < 0.0) throw ValidationError("thickness_nm must be >= 0");
  if (mfp_nm <= 0.0) throw ValidationError("mfp_nm must be > 0");
  return std::exp(-thickness_nm / mfp_nm);
}

}  // namespace zenosplit
