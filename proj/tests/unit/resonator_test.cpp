#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "zenosplit/error.hpp"
#include "zenosplit/resonator.hpp"

namespace {

using namespace zenosplit;
using std::numbers::pi;

ScenarioConfig crystal(double ratio, int passes) {
  ScenarioConfig c;
  c.grating.kind = GratingKind::crystal_two_beam;
  c.grating.t_over_xi = ratio;
  c.max_passes = passes;
  return c;
}

ScenarioConfig sinusoidal(double a_over_pi, int passes, bool aperture) {
  ScenarioConfig c;
  c.grating.phase_amplitude = a_over_pi * pi;
  c.max_passes = passes;
  if (aperture) c.aperture = ApertureSpec{{0, 1}};
  return c;
}

TEST(InitialState, DirectBeamOnly) {
  const BeamState s = initial_state(1);
  ASSERT_EQ(s.amplitudes().size(), 3);
  EXPECT_EQ(s.amplitudes()[0], Complex(0.0));
  EXPECT_EQ(s.amplitudes()[1], Complex(1.0));
  EXPECT_EQ(s.amplitudes()[2], Complex(0.0));
  EXPECT_EQ(s.squared_norm(), 1.0);
  EXPECT_EQ(s.intensity(+1), 0.0);
}

TEST(ComposePass, Examples) {
  const ScatteringOperator s = sinusoidal_grating_matrix(0.02 * pi, 10);
  EXPECT_EQ(compose_pass(s, std::nullopt, 1.0).matrix(), s.matrix());

  ApertureSpec all;
  for (int k = -10; k <= 10; ++k) all.passed_orders.insert(k);
  EXPECT_EQ(compose_pass(s, aperture_matrix(all, 10), 1.0).matrix(), s.matrix());

  const double scale = std::sqrt(attenuation_factor(1.0, 160.0));
  EXPECT_NEAR(scale, std::exp(-1.0 / 320.0), 1e-16);
  const ScatteringOperator p = aperture_matrix(ApertureSpec{{0, 1}}, 10);
  const ScatteringOperator pass = compose_pass(s, p, scale);
  EXPECT_EQ(pass.flavor(), OperatorFlavor::attenuated);
  const ComplexMatrix expected = s.matrix() * p.matrix();
  EXPECT_LT((pass.matrix() - std::exp(-1.0 / 320.0) * expected).cwiseAbs().maxCoeff(), 1e-16);
  // blocked input columns vanish
  EXPECT_EQ(pass.coupling(0, 2), Complex(0.0));
}

TEST(ComposePass, RejectsMismatchedBases) {
  const ScatteringOperator s = sinusoidal_grating_matrix(0.02 * pi, 10);
  EXPECT_THROW(compose_pass(s, aperture_matrix(ApertureSpec{{0, 1}}, 5), 1.0), ValidationError);
  EXPECT_THROW(compose_pass(s, std::nullopt, 0.0), ValidationError);
}

TEST(Propagate, TwoBeamCompleteTransferAtFifty) {
  const IntensityTrace t = propagate(crystal(0.01, 100));
  EXPECT_NEAR(t.intensity(50, 1), 1.0, 1e-9);
  EXPECT_NEAR(t.intensity(25, 0), 0.5, 1e-9);
  EXPECT_NEAR(t.intensity(25, 1), 0.5, 1e-9);
}

TEST(Propagate, TwoBeamMatchesClosedForm) {
  for (double ratio : {0.005, 0.01, 0.02, 0.05, 0.3}) {
    const IntensityTrace t = propagate(crystal(ratio, 200));
    for (int n = 0; n <= 200; ++n) {
      const double analytic = std::pow(std::sin(n * pi * ratio), 2);
      EXPECT_NEAR(t.intensity(n, 1), analytic, 1e-10) << "ratio=" << ratio << " N=" << n;
      EXPECT_EQ(t.rows[n].loss, 0.0);
    }
  }
}

double norm_defect(double a_over_pi, int passes, int* first_violation) {
  ScenarioConfig c = sinusoidal(a_over_pi, passes, false);
  c.tracked_orders.clear();
  for (int k = -100; k <= 100; ++k) c.tracked_orders.push_back(k);
  const IntensityTrace t = propagate(c);
  double worst = 0.0;
  *first_violation = -1;
  for (const TraceRow& row : t.rows) {
    EXPECT_EQ(row.loss, 0.0);
    const double d = std::fabs(1.0 - row.total);
    if (d >= 1e-10 && *first_violation < 0) *first_violation = row.pass;
    worst = std::max(worst, d);
  }
  return worst;
}

TEST(Propagate, NormConservedWithoutAperture) {
  // Without an aperture the beam spreads by about (A/2) orders per pass; once
  // it reaches the M = 100 window edge the truncation leaks. Stay inside.
  int violation = 0;
  for (double a : {0.005, 0.01, 0.02, 0.058, 0.1}) {
    const int passes = std::min(1000, static_cast<int>(45.0 / a));
    EXPECT_LT(norm_defect(a, passes, &violation), 1e-10) << "A/pi=" << a;
  }
  norm_defect(0.1, 1000, &violation);
  EXPECT_GT(violation, 450);
}

TEST(Propagate, MultiBeamDeficitWithoutAperture) {
  const IntensityTrace t = propagate(sinusoidal(0.02, 400, false));
  int argmin = 1;
  for (int n = 1; n <= t.max_pass(); ++n) {
    if (t.intensity(n, 0) < t.intensity(argmin, 0)) argmin = n;
  }
  EXPECT_LT(t.rows[argmin].total, 1.0);
  for (int n = 1; n <= t.max_pass(); ++n) EXPECT_LT(t.rows[n].total, 1.0);
}

TEST(Propagate, ApertureRecoversNearUnitTotal) {
  const IntensityTrace t = propagate(sinusoidal(0.02, 150, true));
  // switch point for this grating, frozen from the implementation
  EXPECT_NEAR(t.intensity(99, 0), 2.3880977e-4, 1e-10);
  EXPECT_GE(t.rows[99].total, 0.97);
}

TEST(Propagate, LossMonotoneWhenLossy) {
  for (bool aperture : {true, false}) {
    ScenarioConfig c = sinusoidal(0.058, 300, aperture);
    c.grating.thickness_nm = 1.0;
    c.grating.mfp_nm = 84.0;
    c.attenuation_enabled = !aperture;
    const IntensityTrace t = propagate(c);
    for (int n = 1; n <= t.max_pass(); ++n) {
      EXPECT_GE(t.rows[n].loss, t.rows[n - 1].loss) << "N=" << n;
      for (double v : t.rows[n].intensities) {
        EXPECT_GE(v, 0.0);
        EXPECT_LE(v, 1.0);
      }
    }
  }
}

TEST(Propagate, AttenuationFactorizes) {
  for (double mfp : {160.0, 84.0}) {
    ScenarioConfig c = sinusoidal(0.02, 400, true);
    c.grating.thickness_nm = 1.0;
    c.grating.mfp_nm = mfp;
    const IntensityTrace free = propagate(c);
    c.attenuation_enabled = true;
    const IntensityTrace damped = propagate(c);
    const double transmission = attenuation_factor(1.0, mfp);
    for (int n = 0; n <= 400; ++n) {
      const double tn = std::pow(transmission, n);
      for (std::size_t k = 0; k < free.tracked_orders.size(); ++k) {
        const double expected = tn * free.rows[n].intensities[k];
        EXPECT_NEAR(damped.rows[n].intensities[k], expected, 1e-10 * expected) << "N=" << n;
      }
    }
  }
}

TEST(Propagate, PassOrderDoesNotChangeTrackedIntensities) {
  for (double a : {0.01, 0.02, 0.058}) {
    const ScenarioConfig c = sinusoidal(a, 300, true);
    const IntensityTrace before = propagate(c, PassOrder::aperture_then_grating);
    const IntensityTrace after = propagate(c, PassOrder::grating_then_aperture);
    for (int n = 0; n <= 300; ++n) {
      for (std::size_t k = 0; k < 2; ++k) {
        EXPECT_NEAR(before.rows[n].intensities[k], after.rows[n].intensities[k], 1e-14);
      }
    }
  }
}

TEST(ScenarioConfig, Validation) {
  ScenarioConfig c = sinusoidal(0.02, 10, true);
  EXPECT_NO_THROW(c.validate());
  c.tracked_orders = {0, 2};
  EXPECT_THROW(c.validate(), ValidationError);
  c.tracked_orders = {0, 101};
  c.aperture.reset();
  EXPECT_THROW(c.validate(), ValidationError);
  c.tracked_orders = {0, 1};
  c.max_passes = 0;
  EXPECT_THROW(propagate(c), ValidationError);
  c.max_passes = 5;
  c.attenuation_enabled = true;
  EXPECT_THROW(c.validate(), ValidationError);
  c.attenuation_enabled = false;
  c.aperture = ApertureSpec{{1, 2}};
  c.tracked_orders = {1};
  EXPECT_THROW(c.validate(), ValidationError);
}

TEST(IntensityTrace, Accessors) {
  const IntensityTrace t = propagate(crystal(0.01, 3));
  EXPECT_EQ(t.max_pass(), 3);
  EXPECT_EQ(t.column(0).size(), 4u);
  EXPECT_THROW(t.intensity(1, 5), ValidationError);
  EXPECT_THROW(t.intensity(4, 0), ValidationError);
}

}  // namespace
