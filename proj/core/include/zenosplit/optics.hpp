#pragma once

#include <complex>
#include <map>
#include <optional>
#include <set>

#include <Eigen/Dense>

namespace zenosplit {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr int kDefaultTruncation = 100;

/// Contiguous range of diffraction orders [first, first + size) mapped onto
/// matrix rows/columns. The truncated window of half-width M covers
/// [-M, M]; the two-beam basis covers {0, +1}.
class OrderBasis {
 public:
  static OrderBasis window(int half_width);
  static OrderBasis two_beam();

  int first_order() const { return first_; }
  int last_order() const { return first_ + size_ - 1; }
  int size() const { return size_; }
  bool contains(int order) const { return order >= first_ && order <= last_order(); }
  /// Row/column index of `order`; throws ValidationError when outside.
  int position(int order) const;
  int order_at(int position) const { return first_ + position; }

  friend bool operator==(const OrderBasis&, const OrderBasis&) = default;

 private:
  OrderBasis(int first, int size) : first_(first), size_(size) {}
  int first_;
  int size_;
};

enum class OperatorFlavor { unitary_coupler, projector, attenuated };

/// Square complex matrix acting on the amplitudes of an OrderBasis.
class ScatteringOperator {
 public:
  ScatteringOperator(OrderBasis basis, ComplexMatrix entries, OperatorFlavor flavor);

  const OrderBasis& basis() const { return basis_; }
  const ComplexMatrix& matrix() const { return entries_; }
  OperatorFlavor flavor() const { return flavor_; }
  int dim() const { return basis_.size(); }

  /// Entry coupling input order `from` into output order `to`.
  Complex coupling(int to, int from) const;

 private:
  OrderBasis basis_;
  ComplexMatrix entries_;
  OperatorFlavor flavor_;
};

enum class GratingKind { crystal_two_beam, sinusoidal, fork_hologram };

struct GratingSpec {
  GratingKind kind = GratingKind::sinusoidal;
  double phase_amplitude = 0.0;  // radians, sinusoidal and fork
  double t_over_xi = 0.0;        // crystal_two_beam
  std::optional<double> thickness_nm;
  std::optional<double> mfp_nm;
  std::optional<double> pitch_nm;  // layout only; amplitudes ignore it

  /// Checks the fields required by `kind`.
  void validate() const;
  friend bool operator==(const GratingSpec&, const GratingSpec&) = default;
};

struct ApertureSpec {
  std::set<int> passed_orders;
  friend bool operator==(const ApertureSpec&, const ApertureSpec&) = default;
};

/// Thin crystal in the two-beam condition, [[cos, i sin], [i sin, cos]] of
/// pi * t/xi_g. Requires 0 <= t_over_xi <= 0.5.
ScatteringOperator crystal_two_beam_matrix(double t_over_xi);

/// Truncated sinusoidal phase grating: entry (row i, column j) = J_{j-i}(A/2).
ScatteringOperator sinusoidal_grating_matrix(double phase_amplitude, int half_width);

/// Transmission exp(i (A/2) sin(2 pi x/P)) of one grating period.
Complex grating_profile(double phase_amplitude, double x_over_pitch);

struct ForkHologram {
  ScatteringOperator op;
  std::map<int, int> topological_charge;  // order -> charge
};

/// Fork hologram: same amplitudes as the straight grating, each order k
/// labelled with topological charge k.
ForkHologram fork_hologram_matrix(double phase_amplitude, int half_width);

ScatteringOperator aperture_matrix(const ApertureSpec& spec, const OrderBasis& basis);
ScatteringOperator aperture_matrix(const ApertureSpec& spec, int half_width);

/// Intensity transmission exp(-t/lambda) through a grating of thickness t.
double attenuation_factor(double thickness_nm, double mfp_nm);

}  // namespace zenosplit
