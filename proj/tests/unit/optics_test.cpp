#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "zenosplit/error.hpp"
#include "zenosplit/optics.hpp"
#include "zenosplit/special.hpp"

namespace {

using namespace zenosplit;
using std::numbers::pi;

double unitarity_defect(const ComplexMatrix& s) {
  const ComplexMatrix gram = s.adjoint() * s;
  return (gram - ComplexMatrix::Identity(s.rows(), s.cols())).cwiseAbs().maxCoeff();
}

// Composite Simpson over one period of the profile: c_n = int g(x) e^{-2 pi i n x} dx.
Complex fourier_coefficient(double amplitude, int n, int intervals) {
  const double h = 1.0 / intervals;
  Complex sum = 0.0;
  for (int k = 0; k <= intervals; ++k) {
    const double x = -0.5 + k * h;
    const double weight = (k == 0 || k == intervals) ? 1.0 : (k % 2 ? 4.0 : 2.0);
    sum += weight * grating_profile(amplitude, x) * std::polar(1.0, -2.0 * pi * n * x);
  }
  return sum * h / 3.0;
}

TEST(OrderBasis, WindowMapsOrdersToPositions) {
  const OrderBasis b = OrderBasis::window(3);
  EXPECT_EQ(b.size(), 7);
  EXPECT_EQ(b.position(-3), 0);
  EXPECT_EQ(b.position(0), 3);
  EXPECT_EQ(b.order_at(6), 3);
  EXPECT_THROW(b.position(4), ValidationError);
  EXPECT_THROW(OrderBasis::window(0), ValidationError);
}

TEST(CrystalTwoBeam, Examples) {
  const ComplexMatrix id = crystal_two_beam_matrix(0.0).matrix();
  EXPECT_EQ(id, ComplexMatrix::Identity(2, 2));

  const ComplexMatrix swap = crystal_two_beam_matrix(0.5).matrix();
  EXPECT_NEAR(std::abs(swap(0, 0)), 0.0, 1e-16);
  EXPECT_EQ(swap(0, 1), Complex(0.0, 1.0));
  EXPECT_EQ(swap(1, 0), Complex(0.0, 1.0));

  const ScatteringOperator s = crystal_two_beam_matrix(0.01);
  EXPECT_EQ(s.matrix()(0, 0), Complex(std::cos(0.01 * pi), 0.0));
  EXPECT_EQ(s.matrix()(1, 0), Complex(0.0, std::sin(0.01 * pi)));
  EXPECT_LT(unitarity_defect(s.matrix()), 1e-15);
  EXPECT_EQ(s.flavor(), OperatorFlavor::unitary_coupler);
}

TEST(CrystalTwoBeam, RejectsOutOfRange) {
  EXPECT_THROW(crystal_two_beam_matrix(-0.01), ValidationError);
  EXPECT_THROW(crystal_two_beam_matrix(0.6), ValidationError);
  EXPECT_THROW(crystal_two_beam_matrix(NAN), ValidationError);
}

TEST(SinusoidalGrating, ZeroAmplitudeIsIdentity) {
  for (int m : {1, 5, 100}) {
    EXPECT_EQ(sinusoidal_grating_matrix(0.0, m).matrix(), ComplexMatrix::Identity(2 * m + 1, 2 * m + 1));
  }
}

TEST(SinusoidalGrating, FirstOrderCouplings) {
  const ScatteringOperator s = sinusoidal_grating_matrix(0.02 * pi, 100);
  EXPECT_EQ(s.dim(), 201);
  const double j1 = special::bessel_j(1, 0.01 * pi);
  // row = output order i, column = input order j, entry J_{j-i}
  EXPECT_EQ(s.coupling(+1, 0), Complex(-j1, 0.0));
  EXPECT_EQ(s.coupling(-1, 0), Complex(j1, 0.0));
  EXPECT_EQ(s.matrix()(s.basis().position(0), s.basis().position(1)), Complex(j1, 0.0));
  EXPECT_EQ(s.matrix()(s.basis().position(1), s.basis().position(0)), Complex(-j1, 0.0));
}

TEST(SinusoidalGrating, UnitaryOnPopulatedOrders) {
  // Columns for |k| <= M/2 never reach the truncation edge at these amplitudes.
  for (double a : {0.005, 0.01, 0.02, 0.058, 0.1}) {
    const ComplexMatrix s = sinusoidal_grating_matrix(a * pi, 100).matrix();
    const ComplexMatrix inner = s.middleCols(50, 101);
    const ComplexMatrix gram = inner.adjoint() * inner;
    const double defect = (gram - ComplexMatrix::Identity(101, 101)).cwiseAbs().maxCoeff();
    EXPECT_LT(defect, 1e-10) << "A/pi=" << a;
  }
}

TEST(SinusoidalGrating, EdgeColumnsLoseTheOrdersBeyondTheWindow) {
  // Column +M keeps only couplings into orders <= M, so its squared norm is
  // 1 - sum_{n>=1} J_n^2: the full truncated matrix is not unitary.
  for (double a : {0.005, 0.02, 0.1}) {
    const ComplexMatrix s = sinusoidal_grating_matrix(a * pi, 100).matrix();
    double beyond = 0.0;
    for (int n = 1; n <= 40; ++n) beyond += std::pow(special::bessel_j(n, a * pi / 2), 2);
    EXPECT_NEAR(s.col(200).squaredNorm(), 1.0 - beyond, 1e-15);
    EXPECT_NEAR(unitarity_defect(s), beyond, 1e-12);
  }
}

TEST(SinusoidalGrating, ToeplitzStructure) {
  const ComplexMatrix s = sinusoidal_grating_matrix(0.058 * pi, 20).matrix();
  for (int i = 1; i < s.rows(); ++i) {
    for (int j = 1; j < s.cols(); ++j) EXPECT_EQ(s(i, j), s(i - 1, j - 1));
  }
}

TEST(SinusoidalGrating, RejectsBadInput) {
  EXPECT_THROW(sinusoidal_grating_matrix(-0.1, 10), ValidationError);
  EXPECT_THROW(sinusoidal_grating_matrix(0.1, 0), ValidationError);
}

TEST(SinusoidalGrating, TwoBeamBlockApproachesSmallAngleForm) {
  for (double a : {0.02, 0.01, 0.005}) {
    const ScatteringOperator s = sinusoidal_grating_matrix(a * pi, 10);
    const double j1 = special::bessel_j(1, a * pi / 2);
    EXPECT_NEAR(s.coupling(0, 0).real(), 1.0, (a * pi) * (a * pi));
    EXPECT_NEAR(s.coupling(0, 1).real(), j1, 1e-16);
    EXPECT_NEAR(s.coupling(1, 0).real(), -j1, 1e-16);
    // intensities of the crystal coupler with the same first-pass transfer match
    const double theta = std::asin(j1);
    EXPECT_NEAR(std::norm(s.coupling(1, 0)), std::norm(crystal_two_beam_matrix(theta / pi).coupling(1, 0)),
                1e-15);
  }
}

TEST(GratingProfile, Examples) {
  EXPECT_EQ(grating_profile(0.3, 0.0), Complex(1.0, 0.0));
  const Complex quarter = grating_profile(0.02 * pi, 0.25);
  EXPECT_NEAR(std::abs(quarter - std::polar(1.0, 0.01 * pi)), 0.0, 1e-16);
  EXPECT_NEAR(std::abs(grating_profile(0.1 * pi, 0.137)), 1.0, 1e-15);
}

TEST(GratingProfile, JacobiAngerQuadratureMatchesMatrixColumn) {
  const double a = 0.02 * pi;
  const ScatteringOperator s = sinusoidal_grating_matrix(a, 100);
  for (int n = -10; n <= 10; ++n) {
    const Complex c = fourier_coefficient(a, n, 4096);
    // Amplitude the grating sends from order 0 into order n is J_n(A/2), stored in
    // row 0, column n.
    const Complex entry = s.coupling(0, n);
    EXPECT_NEAR(std::abs(c - entry), 0.0, 1e-8) << "n=" << n;
    EXPECT_NEAR(c.real(), special::bessel_j(n, a / 2), 1e-8) << "n=" << n;
  }
}

TEST(ForkHologram, SameAmplitudesWithChargeLabels) {
  const ForkHologram fork = fork_hologram_matrix(0.2 * pi, 100);
  EXPECT_EQ(fork.op.matrix(), sinusoidal_grating_matrix(0.2 * pi, 100).matrix());
  EXPECT_EQ(fork.topological_charge.at(2), 2);
  EXPECT_EQ(fork.topological_charge.at(0), 0);
  EXPECT_EQ(fork.topological_charge.at(-7), -7);
  EXPECT_EQ(fork.topological_charge.size(), 201u);
}

TEST(Aperture, ProjectorExamples) {
  const ScatteringOperator p = aperture_matrix(ApertureSpec{{0, 1}}, 100);
  EXPECT_EQ(p.flavor(), OperatorFlavor::projector);
  EXPECT_EQ(p.matrix().real().sum(), 2.0);
  EXPECT_EQ(p.coupling(0, 0), Complex(1.0));
  EXPECT_EQ(p.coupling(1, 1), Complex(1.0));
  EXPECT_EQ(p.coupling(-1, -1), Complex(0.0));

  const ScatteringOperator vortex = aperture_matrix(ApertureSpec{{0, 2}}, 100);
  EXPECT_EQ(vortex.coupling(2, 2), Complex(1.0));
  EXPECT_EQ(vortex.coupling(1, 1), Complex(0.0));

  ApertureSpec all;
  for (int k = -4; k <= 4; ++k) all.passed_orders.insert(k);
  EXPECT_EQ(aperture_matrix(all, 4).matrix(), ComplexMatrix::Identity(9, 9));
}

TEST(Aperture, IdempotentExactly) {
  for (const ApertureSpec& spec : {ApertureSpec{{0, 1}}, ApertureSpec{{0, 2}}, ApertureSpec{{-3, 0, 5}}}) {
    const ComplexMatrix p = aperture_matrix(spec, 10).matrix();
    EXPECT_EQ(ComplexMatrix(p * p), p);
    EXPECT_TRUE(p.isDiagonal(0.0));
  }
}

TEST(Aperture, RejectsOrderOutsideWindow) {
  EXPECT_THROW(aperture_matrix(ApertureSpec{{0, 11}}, 10), ValidationError);
  EXPECT_THROW(aperture_matrix(ApertureSpec{}, 10), ValidationError);
}

TEST(Attenuation, Examples) {
  EXPECT_EQ(attenuation_factor(0.0, 84.0), 1.0);
  EXPECT_EQ(attenuation_factor(1.0, 160.0), std::exp(-1.0 / 160.0));
  EXPECT_EQ(attenuation_factor(1.0, 84.0), std::exp(-1.0 / 84.0));
  EXPECT_THROW(attenuation_factor(1.0, 0.0), ValidationError);
  EXPECT_THROW(attenuation_factor(-1.0, 10.0), ValidationError);
}

TEST(GratingSpec, Validation) {
  GratingSpec g;
  g.kind = GratingKind::crystal_two_beam;
  g.t_over_xi = 0.7;
  EXPECT_THROW(g.validate(), ValidationError);
  g.t_over_xi = 0.2;
  EXPECT_NO_THROW(g.validate());
  g.mfp_nm = 0.0;
  EXPECT_THROW(g.validate(), ValidationError);
}

}  // namespace
