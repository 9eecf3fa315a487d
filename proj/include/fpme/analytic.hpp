#pragma once

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace fpme {

/// Self-similar solution family for m = 2,
///   u(x,t) = k_s (t+t0)^{-1/(1+2s)} (R^2 - |x (t+t0)^{-1/(1+2s)}|^2)_+^s.
struct ExplicitSolutionParams {
  double s = 0.5;
  double t0 = 1.0;
  double R = 0.5;
};

/// k_s = Gamma(1/2) / (2^{2s} (1+2s) Gamma(1+s) Gamma(1/2+s)).
double k_constant(double s);

/// Requires t + t0 > 0; at t + t0 = 0 the datum is a Dirac mass.
double explicit_u(double x, double t, const ExplicitSolutionParams& p);

/// v(x,t) = integral of u(., t) over (-inf, x], by tanh-sinh quadrature on
/// the support (split at the free boundary). Absolute accuracy 1e-10.
double explicit_v(double x, double t, const ExplicitSolutionParams& p);

/// Free-boundary radius R (t+t0)^{1/(1+2s)}.
double explicit_radius(double t, const ExplicitSolutionParams& p);

/// M_{R,s} = k_s R^{1+2s} Gamma(1/2) Gamma(1+s) / Gamma(3/2+s).
double mass_explicit(double R, double s);

/// exp(-1/(1-(x-3/2)^2)_+) + 2 exp(-1/(1-(x+3/2)^2)_+).
double experiment3_u0(double x);

struct SmoothingExponents {
  double gamma = 0.0;
  double delta = 0.0;
};

/// gamma = 1/((m-1) + 2(1-s)), delta = 2(1-s)/((m-1) + 2(1-s)) in one dimension.
SmoothingExponents smoothing_exponents(double s, double m);

// ---------------------------------------------------------------------------
// Initial data

/// Weighted, shifted copy of the explicit profile at t = 0.
struct ProfileComponent {
  double weight = 1.0;
  double shift = 0.0;
};

struct ExplicitProfileDatum {
  ExplicitSolutionParams params;
  std::vector<ProfileComponent> components{ProfileComponent{}};
};

/// M delta_a, represented only through its integrated step.
struct DiracDatum {
  double M = 1.0;
  double a = 0.0;
};

/// v_0 = 0 for x < a, M for x >= a.
struct StepDatum {
  double M = 1.0;
  double a = 0.0;
};

/// The two-bump profile of experiment3_u0.
struct BumpSumDatum {};

/// Piecewise-linear density through (x_k, u_k), zero outside [x_0, x_n].
struct SampledDatum {
  std::vector<double> x;
  std::vector<double> u;
};

using InitialDatum = std::variant<ExplicitProfileDatum, DiracDatum, StepDatum, BumpSumDatum, SampledDatum>;

std::string datum_name(const InitialDatum& d);

/// Integrated datum v_0(x) = mu_0((-inf, x]).
double datum_v0(const InitialDatum& d, double x);

/// Density u_0(x); empty for measure data (Dirac, step).
std::optional<double> datum_u0(const InitialDatum& d, double x);

double datum_mass(const InitialDatum& d);

/// Upper bound on sup u_0 (the Lipschitz constant of v_0); empty for measure data.
std::optional<double> datum_sup(const InitialDatum& d);

/// Interval containing the support of u_0.
std::pair<double, double> datum_support(const InitialDatum& d);

/// Length scale used by the window padding rule.
double datum_scale(const InitialDatum& d);

/// Throws ParameterError for negative densities, nonpositive radii and so on.
void validate(const InitialDatum& d);

}  // namespace fpme
