#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fpme/field.hpp"
#include "fpme/oplib.hpp"

namespace fpme {

enum class CflMode { CFL1, CFL2 };

std::string to_string(CflMode mode);
CflMode parse_cfl_mode(const std::string& text);

/// Model and time-step parameters of the integrated problem
///   dv/dt = -|dv/dx|^{m-1} (-Delta)^s v.
struct ProblemSpec {
  double s = 0.5;
  double m = 2.0;
  double M = 1.0;                  // sup bound on |v|
  std::optional<double> L;         // Lipschitz bound on v_0, required for CFL2
  CflMode cfl_mode = CflMode::CFL1;
  double safety = 0.9;             // multiplier on the theoretical step

  /// Throws ParameterError if s is outside (0,1), m < 2, M < 0, or CFL2 lacks L.
  void validate() const;
};

struct TimeSpec {
  double tau = 0.0;
  std::size_t J = 0;
  double T = 0.0;
  // inputs recorded for reproducibility
  double tau_bound = 0.0;  // theoretical CFL step before safety and rounding
  double Cs = 0.0;
  CflMode mode = CflMode::CFL1;
};

/// Forward difference if lap <= 0, backward difference otherwise.
double upwind_gradient(const VField& v, long i, double lap);

/// -|D_h v_i|^{m-1} (-Delta)_h^s v_i with a single evaluation of the
/// discrete Laplacian shared by the branch test and the product.
double quasilinear_op(const WeightTable& table, const VField& v, long i, double m);

/// Theoretical CFL step:
///   CFL1: h^{2s+m-1} / (Cs m (2M)^{m-1})
///   CFL2: h^{max(1,2s)} f_s(h) / (Cs m L^{m-2} max(L, 2M)), f_s = 1/|log h| at s = 1/2.
/// Returns +inf for zero data (M = 0). Requires h < 1.
double cfl_tau(const ProblemSpec& p, double h, double Cs);

/// Step size tau = T / J with J the smallest integer such that
/// tau <= safety * cfl_tau and every snapshot time is a multiple of tau.
TimeSpec make_time_spec(const ProblemSpec& p, double h, double Cs, double T,
                        const std::vector<double>& snapshot_times = {});

enum class StepCheck { Enforce, Skip };

/// One application of S_tau. Extensions are unchanged. With
/// StepCheck::Enforce a non-monotone result raises CflViolation.
/// threads > 1 splits the node loop; the result does not depend on it.
VField step(const WeightTable& table, const ProblemSpec& p, const VField& v, double tau,
            StepCheck check = StepCheck::Enforce, unsigned threads = 1);

struct SnapshotMeta {
  double mass = 0.0;        // v_right - v_left
  double sup_norm = 0.0;    // max |V| including extensions
  double max_slope = 0.0;   // max (V_{i+1} - V_i) / h including extension jumps
  double left_gap = 0.0;    // V_{i_min} - v_left
  double right_gap = 0.0;   // v_right - V_{i_max}
};

SnapshotMeta describe(const VField& v);

struct Snapshot {
  double t = 0.0;
  VField field;
  SnapshotMeta meta;
};

struct Trajectory {
  TimeSpec time;
  std::vector<Snapshot> snapshots;  // sorted by t
};

struct EvolveOptions {
  StepCheck check = StepCheck::Enforce;
  unsigned threads = 1;
  /// Called with (step index, field) after every step, including j = 0.
  std::function<void(std::size_t, const VField&)> on_step;
};

/// Runs J steps from v0. Snapshot times must lie on the time grid of `time`;
/// t = 0 and t = T are always included. The evolution is carried out on
/// v - v_left, which makes it invariant under adding constants to the data.
Trajectory evolve(const WeightTable& table, const ProblemSpec& p, const VField& v0,
                  const TimeSpec& time, std::vector<double> snapshot_times = {},
                  const EvolveOptions& options = {});

/// True if the field, with its extensions, is nondecreasing.
bool is_nondecreasing(const VField& v);

/// Window of a datum supported in [a, b] with scale R, padded by
/// max(4, 2 T^{1/(1+2s)}) R on each side and aligned to the grid origin 0.
GridSpec padded_window(double a, double b, double R, double T, double s, double h,
                       double v_left, double v_right, std::optional<double> pad = std::nullopt);

/// Weight table whose truncation covers the whole window, so apply_lap is
/// exact for the constant extensions.
WeightTable window_weights(double s, const GridSpec& grid);

}  // namespace fpme
