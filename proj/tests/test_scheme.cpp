#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "fpme/errors.hpp"
#include "fpme/scheme.hpp"

using namespace fpme;

namespace {

VField step_field(double h, long half, double M) {
  GridSpec g;
  g.h = h;
  g.i_min = -half;
  g.i_max = half;
  g.v_left = 0.0;
  g.v_right = M;
  return sample(g, [&](double x) { return x >= 0.0 ? M : 0.0; });
}

}  // namespace

TEST(Cfl, Cfl1Example) {
  ProblemSpec p;
  p.s = 0.5;
  p.m = 2.0;
  p.M = 1.0;
  EXPECT_DOUBLE_EQ(cfl_tau(p, 1.0 / 16.0, 2.0), 1.0 / 2048.0);
}

TEST(Cfl, Cfl2Exponents) {
  ProblemSpec p;
  p.m = 2.0;
  p.M = 1.0;
  p.L = 4.0;
  p.cfl_mode = CflMode::CFL2;
  p.s = 0.25;
  // m = 2: h / (Cs * 2 * max(L, 2M))
  EXPECT_DOUBLE_EQ(cfl_tau(p, 0.125, 1.0), 0.125 / 8.0);
  p.s = 0.75;
  EXPECT_DOUBLE_EQ(cfl_tau(p, 0.125, 1.0), std::pow(0.125, 1.5) / 8.0);
  p.s = 0.5;
  EXPECT_DOUBLE_EQ(cfl_tau(p, 0.125, 1.0), 0.125 / std::log(8.0) / 8.0);
}

TEST(Cfl, Guards) {
  ProblemSpec p;
  EXPECT_THROW(cfl_tau(p, 1.0, 1.0), ParameterError);
  p.cfl_mode = CflMode::CFL2;
  EXPECT_THROW(cfl_tau(p, 0.5, 1.0), ParameterError);
  p.cfl_mode = CflMode::CFL1;
  p.M = 0.0;
  EXPECT_TRUE(std::isinf(cfl_tau(p, 0.5, 1.0)));
  p.m = 1.5;
  EXPECT_THROW(p.validate(), ParameterError);
}

TEST(Cfl, TimeSpecAlignsSnapshots) {
  ProblemSpec p;
  p.M = 1.0;
  const TimeSpec ts = make_time_spec(p, 0.125, 1.3, 1.0, {0.3, 0.5});
  EXPECT_LE(ts.tau, p.safety * ts.tau_bound);
  EXPECT_DOUBLE_EQ(ts.tau * static_cast<double>(ts.J), 1.0);
  for (double t : {0.3, 0.5}) {
    const double q = t / ts.tau;
    EXPECT_NEAR(q, std::round(q), 1e-9);
  }
  EXPECT_EQ(parse_cfl_mode("CFL2"), CflMode::CFL2);
  EXPECT_THROW(parse_cfl_mode("CFL3"), ParameterError);
}

TEST(Upwind, ForwardLeftOfJump) {
  const VField v = step_field(0.5, 4, 1.0);
  const WeightTable t = build_weights_fixed(0.5, 0.5, 9);
  const double lap = apply_lap(t, v, -1);
  EXPECT_LT(lap, 0.0);
  EXPECT_DOUBLE_EQ(upwind_gradient(v, -1, lap), 2.0);
  const double lap0 = apply_lap(t, v, 0);
  EXPECT_GT(lap0, 0.0);
  EXPECT_DOUBLE_EQ(upwind_gradient(v, 0, lap0), 2.0);
}

TEST(Upwind, SpikeOperator) {
  GridSpec g;
  g.h = 0.5;
  g.i_min = -6;
  g.i_max = 6;
  VField v{g, std::vector<double>(g.size(), 0.0), 0};
  v[0] = 1.0;
  const WeightTable t = build_weights_fixed(0.5, 0.5, 13);
  // i = 1: lap = -w_1 < 0, forward gradient (v_2 - v_1)/h = 0
  EXPECT_EQ(quasilinear_op(t, v, 1, 2.0), 0.0);
  // i = 0: lap = sum_all > 0, backward gradient 1/h
  EXPECT_NEAR(quasilinear_op(t, v, 0, 2.0), -(1.0 / 0.5) * t.sum_all, 1e-12);
  EXPECT_NEAR(quasilinear_op(t, v, 0, 3.0), -4.0 * t.sum_all, 1e-12);
}

TEST(Step, HandComputedJump) {
  // h = 1, s = 1/2: the one-sided weight sum is 2/pi
  const VField v = step_field(1.0, 4, 1.0);
  const WeightTable t = build_weights_fixed(0.5, 1.0, 9);
  ProblemSpec p;
  const double tau = 0.1;
  const VField out = step(t, p, v, tau);
  const double S = 2.0 / std::numbers::pi;
  EXPECT_NEAR(out[-1], tau * S, 1e-14);
  EXPECT_NEAR(out[0], 1.0 - tau * S, 1e-14);
  for (long i = -4; i <= 4; ++i) {
    if (i == -1 || i == 0) continue;
    EXPECT_EQ(out[i], v[i]) << i;
  }
  EXPECT_EQ(out.grid.v_left, 0.0);
  EXPECT_EQ(out.grid.v_right, 1.0);
  EXPECT_EQ(out.time_index, 1);
}

TEST(Step, StaysInRangeAndOrdered) {
  const VField phi = step_field(0.125, 32, 1.0);
  VField psi = phi;
  psi.grid.v_left = 0.25;
  for (double& x : psi.values) x = std::max(x, 0.25);
  const WeightTable t = build_weights_fixed(0.5, 0.125, 65);
  ProblemSpec p;
  const double tau = p.safety * cfl_tau(p, 0.125, check_Am(t).Cs);
  VField a = phi;
  VField b = psi;
  for (int j = 0; j < 40; ++j) {
    a = step(t, p, a, tau);
    b = step(t, p, b, tau);
    ASSERT_TRUE(is_nondecreasing(a));
    for (std::size_t k = 0; k < a.values.size(); ++k) {
      ASSERT_GE(a.values[k], 0.0);
      ASSERT_LE(a.values[k], 1.0);
      ASSERT_LE(a.values[k], b.values[k]);
    }
  }
}

TEST(Step, ThreadsDoNotChangeResult) {
  GridSpec g;
  g.h = 1.0 / 128.0;
  g.i_min = -400;
  g.i_max = 400;
  g.v_left = 0.0;
  g.v_right = 1.0;
  const VField v = sample(g, [](double x) { return 0.5 * (1.0 + std::tanh(4.0 * x)); });
  const WeightTable t = window_weights(0.3, g);
  ProblemSpec p;
  p.s = 0.3;
  const double tau = 1e-5;
  const VField a = step(t, p, v, tau, StepCheck::Enforce, 1);
  const VField b = step(t, p, v, tau, StepCheck::Enforce, 4);
  EXPECT_EQ(a.values, b.values);
}

TEST(Step, OversizedStepIsDetected) {
  const VField v = step_field(0.125, 16, 1.0);
  const WeightTable t = build_weights_fixed(0.5, 0.125, 33);
  ProblemSpec p;
  const double tau = 50.0 * cfl_tau(p, 0.125, check_Am(t).Cs);
  EXPECT_THROW(step(t, p, v, tau), CflViolation);
  EXPECT_NO_THROW(step(t, p, v, tau, StepCheck::Skip));
}

TEST(Evolve, SnapshotsAndConservation) {
  const VField v0 = step_field(0.125, 24, 0.75);
  const WeightTable t = window_weights(0.5, v0.grid);
  ProblemSpec p;
  p.M = 0.75;
  const TimeSpec ts = make_time_spec(p, 0.125, check_Am(t).Cs, 0.5, {0.25});
  const Trajectory tr = evolve(t, p, v0, ts, {0.25});
  ASSERT_EQ(tr.snapshots.size(), 3u);
  EXPECT_EQ(tr.snapshots[0].t, 0.0);
  EXPECT_EQ(tr.snapshots[1].t, 0.25);
  EXPECT_EQ(tr.snapshots[2].t, 0.5);
  for (const auto& s : tr.snapshots) {
    EXPECT_EQ(s.meta.mass, 0.75);
    EXPECT_LE(s.meta.sup_norm, 0.75);
  }
  EXPECT_EQ(tr.snapshots[2].field.time_index, static_cast<long>(ts.J));
}

TEST(Evolve, TranslationIsExact) {
  GridSpec g;
  g.h = 0.0625;
  g.i_min = -40;
  g.i_max = 40;
  g.v_left = 0.0;
  g.v_right = 1.0;
  auto q = [](double x) { return std::ldexp(std::round(std::ldexp(x, 30)), -30); };
  const VField v0 = sample(g, [&](double x) { return q(0.5 * (1.0 + std::erf(2.0 * x))); });
  VField v1 = v0;
  v1.grid.v_left += 2.5;
  v1.grid.v_right += 2.5;
  for (double& x : v1.values) x += 2.5;
  const WeightTable t = window_weights(0.7, g);
  ProblemSpec p;
  p.s = 0.7;
  p.M = 3.5;
  const TimeSpec ts = make_time_spec(p, g.h, check_Am(t).Cs, 0.05);
  const VField a = evolve(t, p, v0, ts).snapshots.back().field;
  const VField b = evolve(t, p, v1, ts).snapshots.back().field;
  for (std::size_t k = 0; k < a.values.size(); ++k) EXPECT_EQ(b.values[k], a.values[k] + 2.5);
}

TEST(Evolve, RejectsOffGridSnapshot) {
  const VField v0 = step_field(0.125, 8, 1.0);
  const WeightTable t = window_weights(0.5, v0.grid);
  ProblemSpec p;
  TimeSpec ts;
  ts.tau = 0.1;
  ts.J = 10;
  ts.T = 1.0;
  EXPECT_THROW(evolve(t, p, v0, ts, {0.05}), ContractViolation);
}

TEST(Window, PaddingRule) {
  const GridSpec g = padded_window(-0.5, 0.5, 0.5, 1.0, 0.5, 0.125, 0.0, 1.0);
  // pad = max(4, 2) * 0.5 = 2 on each side
  EXPECT_EQ(g.i_min, -20);
  EXPECT_EQ(g.i_max, 20);
  const GridSpec fixed = padded_window(-0.5, 0.5, 0.5, 1.0, 0.5, 0.125, 0.0, 1.0, 1.0);
  EXPECT_EQ(fixed.i_min, -12);
  EXPECT_EQ(window_weights(0.5, g).K, 41u);
}
