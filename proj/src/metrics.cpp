#include "fpme/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "fpme/errors.hpp"

namespace fpme {
namespace {

void require_same_size(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.empty()) throw ContractViolation("metric inputs must share a nonempty grid");
}

// integral over a cell of width h of |linear function from a to b|
double abs_linear_integral(double a, double b, double h) {
  if ((a >= 0.0 && b >= 0.0) || (a <= 0.0 && b <= 0.0)) return 0.5 * h * (std::abs(a) + std::abs(b));
  return 0.5 * h * (a * a + b * b) / (std::abs(a) + std::abs(b));
}

std::string num(double x) {
  if (std::isnan(x)) return "";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

void ConvergenceTable::validate() const {
  for (std::size_t k = 0; k + 1 < rows.size(); ++k)
    if (!(rows[k + 1].h < rows[k].h)) throw ContractViolation("refinement ladder must strictly decrease in h");
}

double error_Ev(std::span<const double> computed, std::span<const double> reference, double v_sup) {
  require_same_size(computed, reference);
  if (!(v_sup > 0.0)) throw MetricUndefined("E_v undefined for zero reference norm");
  double worst = 0.0;
  for (std::size_t i = 0; i < computed.size(); ++i)
    worst = std::max(worst, std::abs(reference[i] - computed[i]));
  return worst / v_sup;
}

double error_Eu(std::span<const double> computed, std::span<const double> reference, double h) {
  require_same_size(computed, reference);
  double diff = 0.0;
  double ref = 0.0;
  for (std::size_t i = 0; i < computed.size(); ++i) {
    diff += std::abs(computed[i] - reference[i]);
    ref += reference[i];
  }
  if (!(ref > 0.0)) throw MetricUndefined("E_u undefined for zero reference mass");
  return (h * diff) / (h * ref);
}

double error_Eu_weak(std::span<const double> computed, std::span<const double> reference, double h) {
  require_same_size(computed, reference);
  double diff = 0.0;
  for (std::size_t i = 0; i < computed.size(); ++i) diff += computed[i] - reference[i];
  return h * std::abs(diff);
}

D0Bound d0_components(const CellDensity& f1, const CellDensity& f2, double rel_mass_tol) {
  if (f1.values.size() != f2.values.size() || f1.h != f2.h || !(f1.h > 0.0))
    throw ContractViolation("d0 bound needs densities on the same cells");
  const double h = f1.h;
  double m1 = 0.0;
  double m2 = 0.0;
  for (double x : f1.values) m1 += h * x;
  for (double x : f2.values) m2 += h * x;
  const double scale = std::max(std::abs(m1), std::abs(m2));
  if (std::abs(m1 - m2) > rel_mass_tol * scale)
    throw ContractViolation("d0 bound requires equal masses");

  D0Bound b;
  double prev = 0.0;  // F1 - F2 at the left end of the current cell
  for (std::size_t k = 0; k < f1.values.size(); ++k) {
    const double df = f1.values[k] - f2.values[k];
    const double next = prev + h * df;
    b.cdf_l1 += abs_linear_integral(prev, next, h);
    b.density_l1 += h * std::abs(df);
    prev = next;
  }
  return b;
}

double d0_upper_bound(const CellDensity& f1, const CellDensity& f2, double rel_mass_tol) {
  return d0_components(f1, f2, rel_mass_tol).bound();
}

double metric_value(const ErrorReport& r, Metric metric) {
  switch (metric) {
    case Metric::Ev: return r.E_v;
    case Metric::Eu: return r.E_u;
    case Metric::EuWeak: return r.E_u_weak;
    case Metric::D0: return r.d0_bound;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

std::vector<double> observed_order(const ConvergenceTable& table, Metric metric) {
  if (table.rows.size() < 2) throw ContractViolation("observed order needs at least two rungs");
  std::vector<double> orders;
  for (std::size_t k = 0; k + 1 < table.rows.size(); ++k) {
    const double a = metric_value(table.rows[k], metric);
    const double b = metric_value(table.rows[k + 1], metric);
    orders.push_back(b == 0.0 ? std::numeric_limits<double>::infinity() : std::log2(a / b));
  }
  return orders;
}

void write_errors_csv(const std::filesystem::path& path, const ConvergenceTable& table) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out << "h,tau,E_v,E_u,E_u_weak,d0_bound,order_Ev,order_Eu,runtime_s\n";
  std::vector<double> ov;
  std::vector<double> ou;
  if (table.rows.size() >= 2) {
    ov = observed_order(table, Metric::Ev);
    ou = observed_order(table, Metric::Eu);
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t k = 0; k < table.rows.size(); ++k) {
    const ErrorReport& r = table.rows[k];
    out << num(r.h) << ',' << num(r.tau) << ',' << num(r.E_v) << ',' << num(r.E_u) << ',' << num(r.E_u_weak)
        << ',' << num(r.d0_bound) << ',' << num(k == 0 ? nan : ov[k - 1]) << ','
        << num(k == 0 ? nan : ou[k - 1]) << ',' << num(r.runtime_seconds) << '\n';
  }
}

}  // namespace fpme
