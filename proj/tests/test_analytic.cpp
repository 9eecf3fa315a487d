#include <gtest/gtest.h>

#include <boost/math/special_functions/beta.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <numbers>

#include "fpme/analytic.hpp"
#include "fpme/errors.hpp"

using namespace fpme;
using boost::multiprecision::cpp_bin_float_50;

namespace {

double k_oracle(double s) {
  const cpp_bin_float_50 S(s);
  const cpp_bin_float_50 half("0.5");
  const cpp_bin_float_50 num = boost::multiprecision::tgamma(half);
  const cpp_bin_float_50 den = boost::multiprecision::pow(cpp_bin_float_50(2), 2 * S) * (1 + 2 * S) *
                               boost::multiprecision::tgamma(1 + S) * boost::multiprecision::tgamma(half + S);
  return static_cast<double>(num / den);
}

// v(x,t) = k (2R)^{1+2s} B(1+s,1+s) I_z(1+s,1+s), z = (y/R + 1)/2, y = x (t+t0)^{-1/(1+2s)}
double v_oracle(double x, double t, const ExplicitSolutionParams& p) {
  const double y = x * std::pow(t + p.t0, -1.0 / (1.0 + 2.0 * p.s));
  const double z = std::clamp((y / p.R + 1.0) / 2.0, 0.0, 1.0);
  const double a = 1.0 + p.s;
  return k_oracle(p.s) * std::pow(2.0 * p.R, 1.0 + 2.0 * p.s) * boost::math::beta(a, a) *
         boost::math::ibeta(a, a, z);
}

}  // namespace

TEST(Explicit, KConstant) {
  EXPECT_NEAR(k_constant(0.5), 0.5, 1e-15);
  for (double s : {0.25, 0.5, 0.75}) EXPECT_NEAR(k_constant(s), k_oracle(s), 1e-14 * k_oracle(s));
}

TEST(Explicit, ProfileValues) {
  const ExplicitSolutionParams p{0.5, 1.0, 0.5};
  EXPECT_NEAR(explicit_u(0.0, 0.0, p), 0.25, 1e-15);
  EXPECT_EQ(explicit_u(0.6, 0.0, p), 0.0);
  EXPECT_NEAR(explicit_radius(1.0, p), 0.5 * std::pow(2.0, 0.5), 1e-15);
  EXPECT_THROW(explicit_u(0.0, -1.0, p), ContractViolation);
}

TEST(Explicit, Mass) {
  EXPECT_NEAR(mass_explicit(1.0, 0.5), std::numbers::pi / 4.0, 1e-15);
  for (double s : {0.25, 0.75}) {
    const ExplicitSolutionParams p{s, 1.0, 0.5};
    EXPECT_NEAR(mass_explicit(0.5, s), v_oracle(10.0, 0.0, p), 1e-13);
  }
}

TEST(Explicit, IntegratedProfileAgainstIncompleteBeta) {
  for (double s : {0.25, 0.5, 0.75}) {
    const ExplicitSolutionParams p{s, 1.0, 0.5};
    for (double t : {0.0, 0.5, 1.0})
      for (double x = -1.0; x <= 1.0; x += 0.0625)
        ASSERT_NEAR(explicit_v(x, t, p), v_oracle(x, t, p), 1e-10) << "s=" << s << " t=" << t << " x=" << x;
  }
}

TEST(Explicit, MassIndependentOfTime) {
  const ExplicitSolutionParams p{0.3, 1.0, 0.5};
  const double M = mass_explicit(0.5, 0.3);
  for (double t : {0.0, 0.7, 3.0}) EXPECT_NEAR(explicit_v(10.0, t, p), M, 1e-10);
}

TEST(Experiment3, Datum) {
  EXPECT_NEAR(experiment3_u0(1.5), std::exp(-1.0), 1e-15);
  EXPECT_NEAR(experiment3_u0(-1.5), 2.0 * std::exp(-1.0), 1e-15);
  EXPECT_EQ(experiment3_u0(0.0), 0.0);
  EXPECT_EQ(experiment3_u0(2.5), 0.0);
}

TEST(Smoothing, Exponents) {
  const auto a = smoothing_exponents(0.5, 2.0);
  EXPECT_DOUBLE_EQ(a.gamma, 0.5);
  EXPECT_DOUBLE_EQ(a.delta, 0.5);
  EXPECT_DOUBLE_EQ(smoothing_exponents(0.5, 4.0).gamma, 0.25);
}

TEST(Datum, Variants) {
  const InitialDatum profile = ExplicitProfileDatum{{0.5, 1.0, 0.5}, {{1.0, 1.0}, {2.0, -1.0}}};
  EXPECT_NEAR(datum_mass(profile), 3.0 * mass_explicit(0.5, 0.5), 1e-14);
  EXPECT_NEAR(datum_v0(profile, 0.0), 2.0 * mass_explicit(0.5, 0.5), 1e-10);
  EXPECT_NEAR(*datum_u0(profile, -1.0), 0.5, 1e-15);

  const InitialDatum dirac = DiracDatum{0.75, 0.0};
  EXPECT_EQ(datum_v0(dirac, -1e-9), 0.0);
  EXPECT_EQ(datum_v0(dirac, 0.0), 0.75);
  EXPECT_FALSE(datum_u0(dirac, 0.0).has_value());
  EXPECT_FALSE(datum_sup(dirac).has_value());

  const InitialDatum sampled = SampledDatum{{0.0, 1.0, 2.0}, {0.0, 2.0, 0.0}};
  EXPECT_NEAR(datum_mass(sampled), 2.0, 1e-15);
  EXPECT_NEAR(datum_v0(sampled, 1.0), 1.0, 1e-15);
  EXPECT_NEAR(*datum_sup(sampled), 2.0, 0.0);

  EXPECT_THROW(validate(SampledDatum{{0.0, 1.0}, {1.0, -1.0}}), ParameterError);
  EXPECT_THROW(validate(ExplicitProfileDatum{{0.5, 1.0, -0.5}, {{}}}), ParameterError);
}

TEST(Datum, BumpMass) {
  const InitialDatum bump = BumpSumDatum{};
  const double one = datum_v0(bump, 0.0);
  EXPECT_NEAR(datum_mass(bump), 3.0 * one / 2.0, 1e-10);
  EXPECT_NEAR(datum_v0(bump, 3.0), datum_mass(bump), 1e-12);
}
