#include "fpme/analytic.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <numbers>
#include <sstream>

#include "fpme/errors.hpp"

namespace fpme {
namespace {

constexpr double kQuadTolerance = 1e-10;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

void require_order(double s) {
  if (!(s > 0.0 && s < 1.0)) throw ParameterError("s must lie in (0,1)");
}

// k * integral_{a}^{b} (R^2 - z^2)^s dz for -R <= a <= b <= R.
double profile_integral(double a, double b, double s, double R, double k) {
  if (b <= a) return 0.0;
  static thread_local boost::math::quadrature::tanh_sinh<double> integrator;
  auto f = [&](double z) {
    const double p = (R - z) * (R + z);
    return p > 0.0 ? std::pow(p, s) : 0.0;
  };
  double err = 0.0;
  double l1 = 0.0;
  const double val = integrator.integrate(f, a, b, 1e-13, &err, &l1);
  if (!(k * err <= kQuadTolerance)) {
    std::ostringstream os;
    os << "explicit_v quadrature reached only " << k * err;
    throw QuadratureError(os.str(), k * err);
  }
  return k * val;
}

double bump(double y) {
  const double q = 1.0 - y * y;
  return q > 0.0 ? std::exp(-1.0 / q) : 0.0;
}

double bump_integral(double a, double b) {
  double err = 0.0;
  const double val =
      boost::math::quadrature::gauss_kronrod<double, 31>::integrate(bump, a, b, 20, 1e-14, &err);
  if (!(err <= kQuadTolerance)) throw QuadratureError("bump quadrature did not converge", err);
  return val;
}

// integral of bump(y - c) over (-inf, x]; the right half is total minus the
// short remainder so that the result never exceeds the total
double bump_cdf(double x, double c) {
  static const double total = bump_integral(-1.0, 1.0);
  const double y = x - c;
  if (y <= -1.0) return 0.0;
  if (y >= 1.0) return total;
  if (y <= 0.0) return bump_integral(-1.0, y);
  return total - bump_integral(y, 1.0);
}

double profile_sup(const ExplicitSolutionParams& p) {
  return k_constant(p.s) * std::pow(p.t0, -1.0 / (1.0 + 2.0 * p.s)) * std::pow(p.R, 2.0 * p.s);
}

}  // namespace

double k_constant(double s) {
  require_order(s);
  return std::exp(0.5 * std::log(std::numbers::pi) - 2.0 * s * std::numbers::ln2 - std::log1p(2.0 * s) -
                  std::lgamma(1.0 + s) - std::lgamma(0.5 + s));
}

double explicit_radius(double t, const ExplicitSolutionParams& p) {
  return p.R * std::pow(t + p.t0, 1.0 / (1.0 + 2.0 * p.s));
}

double explicit_u(double x, double t, const ExplicitSolutionParams& p) {
  require_order(p.s);
  const double tt = t + p.t0;
  if (!(tt > 0.0))
    throw ContractViolation("explicit_u at t + t0 = 0 is a Dirac mass; use the step datum instead");
  const double a = std::pow(tt, -1.0 / (1.0 + 2.0 * p.s));
  const double y = x * a;
  const double q = (p.R - y) * (p.R + y);
  if (!(q > 0.0)) return 0.0;
  return k_constant(p.s) * a * std::pow(q, p.s);
}

double explicit_v(double x, double t, const ExplicitSolutionParams& p) {
  require_order(p.s);
  const double tt = t + p.t0;
  if (!(tt > 0.0)) throw ContractViolation("explicit_v needs t + t0 > 0");
  const double z = x * std::pow(tt, -1.0 / (1.0 + 2.0 * p.s));
  const double M = mass_explicit(p.R, p.s);
  if (z <= -p.R) return 0.0;
  if (z >= p.R) return M;
  const double k = k_constant(p.s);
  // integrate over the shorter side so each quadrature touches one free boundary end
  if (z <= 0.0) return profile_integral(-p.R, z, p.s, p.R, k);
  return M - profile_integral(z, p.R, p.s, p.R, k);
}

double mass_explicit(double R, double s) {
  require_order(s);
  if (!(R > 0.0)) throw ParameterError("R must be positive");
  return k_constant(s) * std::pow(R, 1.0 + 2.0 * s) *
         std::exp(0.5 * std::log(std::numbers::pi) + std::lgamma(1.0 + s) - std::lgamma(1.5 + s));
}

double experiment3_u0(double x) { return bump(x - 1.5) + 2.0 * bump(x + 1.5); }

SmoothingExponents smoothing_exponents(double s, double m) {
  require_order(s);
  if (!(m >= 2.0)) throw ParameterError("smoothing exponents need m >= 2");
  const double denom = (m - 1.0) + 2.0 * (1.0 - s);
  return {1.0 / denom, 2.0 * (1.0 - s) / denom};
}

// ---------------------------------------------------------------------------

std::string datum_name(const InitialDatum& d) {
  return std::visit(overloaded{[](const ExplicitProfileDatum&) { return std::string("explicit"); },
                               [](const DiracDatum&) { return std::string("dirac"); },
                               [](const StepDatum&) { return std::string("step"); },
                               [](const BumpSumDatum&) { return std::string("bump3"); },
                               [](const SampledDatum&) { return std::string("sampled"); }},
                    d);
}

void validate(const InitialDatum& d) {
  std::visit(overloaded{[](const ExplicitProfileDatum& e) {
                          require_order(e.params.s);
                          if (!(e.params.R > 0.0)) throw ParameterError("R must be positive");
                          if (!(e.params.t0 > 0.0))
                            throw ParameterError("explicit profile at t0 = 0 is a Dirac mass; use the dirac datum");
                          if (e.components.empty()) throw ParameterError("explicit datum needs a component");
                          for (const auto& c : e.components)
                            if (!(c.weight >= 0.0)) throw ParameterError("component weights must be nonnegative");
                        },
                        [](const DiracDatum& e) {
                          if (!(e.M >= 0.0)) throw ParameterError("Dirac mass must be nonnegative");
                        },
                        [](const StepDatum& e) {
                          if (!(e.M >= 0.0)) throw ParameterError("step height must be nonnegative");
                        },
                        [](const BumpSumDatum&) {},
                        [](const SampledDatum& e) {
                          if (e.x.size() < 2 || e.x.size() != e.u.size())
                            throw ParameterError("sampled datum needs matching x/u with at least two points");
                          if (!std::is_sorted(e.x.begin(), e.x.end()))
                            throw ParameterError("sampled datum x must be increasing");
                          for (double u : e.u)
                            if (!(u >= 0.0)) throw ParameterError("sampled density must be nonnegative");
                        }},
             d);
}

double datum_v0(const InitialDatum& d, double x) {
  return std::visit(
      overloaded{[x](const ExplicitProfileDatum& e) {
                   double v = 0.0;
                   for (const auto& c : e.components) v += c.weight * explicit_v(x - c.shift, 0.0, e.params);
                   return v;
                 },
                 [x](const DiracDatum& e) { return x >= e.a ? e.M : 0.0; },
                 [x](const StepDatum& e) { return x >= e.a ? e.M : 0.0; },
                 [x](const BumpSumDatum&) { return bump_cdf(x, 1.5) + 2.0 * bump_cdf(x, -1.5); },
                 [x](const SampledDatum& e) {
                   double v = 0.0;
                   for (std::size_t k = 0; k + 1 < e.x.size(); ++k) {
                     const double a = e.x[k];
                     const double b = e.x[k + 1];
                     if (x <= a) break;
                     const double right = std::min(x, b);
                     const double ur = e.u[k] + (e.u[k + 1] - e.u[k]) * (right - a) / (b - a);
                     v += 0.5 * (e.u[k] + ur) * (right - a);
                   }
                   return v;
                 }},
      d);
}

std::optional<double> datum_u0(const InitialDatum& d, double x) {
  return std::visit(
      overloaded{[x](const ExplicitProfileDatum& e) -> std::optional<double> {
                   double u = 0.0;
                   for (const auto& c : e.components) u += c.weight * explicit_u(x - c.shift, 0.0, e.params);
                   return u;
                 },
                 [](const DiracDatum&) -> std::optional<double> { return std::nullopt; },
                 [](const StepDatum&) -> std::optional<double> { return std::nullopt; },
                 [x](const BumpSumDatum&) -> std::optional<double> { return experiment3_u0(x); },
                 [x](const SampledDatum& e) -> std::optional<double> {
                   if (x < e.x.front() || x > e.x.back()) return 0.0;
                   const auto it = std::upper_bound(e.x.begin(), e.x.end(), x);
                   if (it == e.x.end()) return e.u.back();
                   const auto k = static_cast<std::size_t>(std::distance(e.x.begin(), it)) - 1;
                   return e.u[k] + (e.u[k + 1] - e.u[k]) * (x - e.x[k]) / (e.x[k + 1] - e.x[k]);
                 }},
      d);
}

double datum_mass(const InitialDatum& d) {
  return std::visit(overloaded{[](const ExplicitProfileDatum& e) {
                                 double w = 0.0;
                                 for (const auto& c : e.components) w += c.weight;
                                 return w * mass_explicit(e.params.R, e.params.s);
                               },
                               [](const DiracDatum& e) { return e.M; },
                               [](const StepDatum& e) { return e.M; },
                               [](const BumpSumDatum&) { return 3.0 * bump_cdf(1.0, 0.0); },
                               [&d](const SampledDatum& e) { return datum_v0(d, e.x.back()); }},
                    d);
}

std::optional<double> datum_sup(const InitialDatum& d) {
  return std::visit(overloaded{[](const ExplicitProfileDatum& e) -> std::optional<double> {
                                 double w = 0.0;
                                 for (const auto& c : e.components) w += c.weight;
                                 return w * profile_sup(e.params);
                               },
                               [](const DiracDatum&) -> std::optional<double> { return std::nullopt; },
                               [](const StepDatum&) -> std::optional<double> { return std::nullopt; },
                               [](const BumpSumDatum&) -> std::optional<double> { return 2.0 * std::exp(-1.0); },
                               [](const SampledDatum& e) -> std::optional<double> {
                                 return *std::max_element(e.u.begin(), e.u.end());
                               }},
                    d);
}

std::pair<double, double> datum_support(const InitialDatum& d) {
  return std::visit(overloaded{[](const ExplicitProfileDatum& e) {
                                 const double r = explicit_radius(0.0, e.params);
                                 double lo = e.components.front().shift;
                                 double hi = lo;
                                 for (const auto& c : e.components) {
                                   lo = std::min(lo, c.shift);
                                   hi = std::max(hi, c.shift);
                                 }
                                 return std::pair{lo - r, hi + r};
                               },
                               [](const DiracDatum& e) { return std::pair{e.a, e.a}; },
                               [](const StepDatum& e) { return std::pair{e.a, e.a}; },
                               [](const BumpSumDatum&) { return std::pair{-2.5, 2.5}; },
                               [](const SampledDatum& e) { return std::pair{e.x.front(), e.x.back()}; }},
                    d);
}

double datum_scale(const InitialDatum& d) {
  return std::visit(overloaded{[](const ExplicitProfileDatum& e) { return e.params.R; },
                               [](const DiracDatum&) { return 1.0; },
                               [](const StepDatum&) { return 1.0; },
                               [](const BumpSumDatum&) { return 1.0; },
                               [](const SampledDatum& e) { return 0.5 * (e.x.back() - e.x.front()); }},
                    d);
}

}  // namespace fpme
