#pragma once

#include <filesystem>
#include <span>
#include <vector>

namespace fpme {

struct ErrorReport {
  double h = 0.0;
  double tau = 0.0;
  double E_v = 0.0;
  double E_u = 0.0;
  double E_u_weak = 0.0;
  double d0_bound = 0.0;  // upper bound on the Rubinstein-Kantorovich distance
  double runtime_seconds = 0.0;
};

struct ConvergenceTable {
  std::vector<ErrorReport> rows;  // strictly decreasing h

  /// Throws ContractViolation unless h strictly decreases down the rows.
  void validate() const;
};

/// sup_i |v_i - V_i| / v_sup. Throws MetricUndefined if v_sup <= 0.
double error_Ev(std::span<const double> computed, std::span<const double> reference, double v_sup);

/// h sum |U_i - u_i| / (h sum u_i). Throws MetricUndefined for zero reference mass.
double error_Eu(std::span<const double> computed, std::span<const double> reference, double h);

/// h |sum (U_i - u_i)|: weak error against the test function 1.
double error_Eu_weak(std::span<const double> computed, std::span<const double> reference, double h);

/// Two densities that are constant on the same cells of width h.
struct CellDensity {
  double h = 0.0;
  std::vector<double> values;
};

struct D0Bound {
  double cdf_l1 = 0.0;      // ||F1 - F2||_L1
  double density_l1 = 0.0;  // ||f1 - f2||_L1
  double bound() const { return cdf_l1 < density_l1 ? cdf_l1 : density_l1; }
};

/// Both L1 bounds on d_0(f1, f2). The result is an upper bound on d_0, not
/// d_0 itself. Throws ContractViolation if the masses differ by more than
/// rel_mass_tol (relative) or the cell layouts differ.
D0Bound d0_components(const CellDensity& f1, const CellDensity& f2, double rel_mass_tol = 1e-8);

double d0_upper_bound(const CellDensity& f1, const CellDensity& f2, double rel_mass_tol = 1e-8);

enum class Metric { Ev, Eu, EuWeak, D0 };

double metric_value(const ErrorReport& r, Metric metric);

/// p_k = log2(E(h_k) / E(h_{k+1})) for each adjacent pair; +inf when
/// E(h_{k+1}) = 0. Requires at least two rows.
std::vector<double> observed_order(const ConvergenceTable& table, Metric metric);

/// Columns h,tau,E_v,E_u,E_u_weak,d0_bound,order_Ev,order_Eu,runtime_s.
/// Orders of the first row are left empty.
void write_errors_csv(const std::filesystem::path& path, const ConvergenceTable& table);

}  // namespace fpme
