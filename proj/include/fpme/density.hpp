#pragma once

#include <filesystem>
#include <vector>

#include "fpme/field.hpp"
#include "fpme/scheme.hpp"

namespace fpme {

/// U_i = (V_i - V_{i-1}) / h with V_{i_min-1} = v_left, for the cells
/// i_min .. i_max + 1 (the last cell closes against v_right).
UField differentiate(const VField& v);

/// Inverse of differentiate: V_i = v_left + h * sum_{k <= i} U_k.
/// The right extension becomes v_left + h * sum of all cells.
VField cumulative(const UField& u, double v_left);

/// h * sum U_i (compensated summation).
double mass(const UField& u);

/// max U_i.
double sup_norm(const UField& u);

/// h * sum over cells with |x_i| > R of U_i, x_i the right end of cell i.
double tail_mass(const UField& u, double R);

enum class InterpolantKind { PiecewiseLinearV, PiecewiseConstantU };

/// Space-time interpolant over a list of snapshots. In time it is left
/// constant on [t_j, t_{j+1}); in space V is linear and U constant on each
/// cell [x_{i-1}, x_i).
class Interpolant {
 public:
  Interpolant(InterpolantKind kind, std::vector<double> times, std::vector<VField> fields);
  static Interpolant from(const Trajectory& traj, InterpolantKind kind);

  InterpolantKind kind() const { return kind_; }
  double horizon() const { return times_.back(); }

  /// Throws ContractViolation if t is outside [0, horizon].
  double operator()(double x, double t) const;

 private:
  InterpolantKind kind_;
  std::vector<double> times_;
  std::vector<VField> fields_;
  std::vector<UField> densities_;
};

/// Piecewise-linear V interpolant of a single field (no time dependence).
double eval_v(const VField& v, double x);
/// Piecewise-constant U interpolant of a single field.
double eval_u(const UField& u, double x);

/// CSV emitters. Every file starts with a header line; numbers use %.17g.
void write_v_csv(const std::filesystem::path& path, const VField& v);
void write_u_csv(const std::filesystem::path& path, const UField& u);
/// Columns x,V,U over the window nodes, with U_i = (V_i - V_{i-1}) / h.
void write_snapshot_csv(const std::filesystem::path& path, const VField& v);
/// One line per snapshot: index,t,file.
void write_snapshot_manifest(const std::filesystem::path& path, const std::vector<double>& times,
                             const std::vector<std::string>& files);

}  // namespace fpme
