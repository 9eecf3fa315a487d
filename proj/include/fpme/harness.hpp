#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fpme/analytic.hpp"
#include "fpme/metrics.hpp"
#include "fpme/oplib.hpp"
#include "fpme/scheme.hpp"

namespace fpme {

enum class ReferenceKind { None, Analytic, Numerical };

/// Everything needed to reproduce one experiment.
struct RunConfig {
  std::string name = "run";
  double s = 0.5;
  double m = 2.0;
  CflMode cfl_mode = CflMode::CFL1;
  double safety = 0.9;

  InitialDatum datum = ExplicitProfileDatum{};
  std::optional<double> pad;  // physical padding of the window on each side
  double T = 1.0;
  std::vector<double> ladder{0.125, 0.0625, 0.03125, 0.015625};
  std::vector<double> snapshots;

  ReferenceKind reference = ReferenceKind::Analytic;
  ExplicitSolutionParams reference_params{};  // analytic reference (m = 2)
  double reference_h = 1.0 / 512.0;          // numerical reference

  std::vector<double> probe_x;  // V-bar recorded at (x, t) for every rung
  std::vector<double> probe_t;

  std::filesystem::path out;  // empty: no files
  double eps_tail = kDefaultEpsTail;
  std::uint64_t seed = 20240601;
  unsigned threads = 1;
  bool timing = true;  // false writes runtime_s = 0 for byte-reproducible output

  /// Throws ParameterError describing the first invalid field.
  void validate() const;
};

/// Flat "key = value" text, '#' comments. Unknown keys are errors.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);
/// Inverse of parse_config for every key that parse_config understands.
std::string format_config(const RunConfig& config);

/// Parses "0.125", "2^-3" or "1/8".
double parse_number(const std::string& text);

struct ProbeValue {
  double x = 0.0;
  double t = 0.0;
  double value = 0.0;
};

struct RungResult {
  double h = 0.0;
  GridSpec grid;
  TimeSpec time;
  AmReport am;
  ErrorReport errors;
  std::vector<ProbeValue> probes;
  Trajectory trajectory;

  // diagnostics gathered at every step
  double max_mass_drift = 0.0;       // relative |h sum U - (v_R - v_L)|
  bool sup_u_nonincreasing = true;   // up to 1e-12 relative round-off
  bool monotone = true;
  double max_boundary_gap = 0.0;     // limits-at-infinity monitor
  double max_tail_mass = 0.0;

  bool ok = true;
  std::string failure;
};

struct RunResult {
  RunConfig config;
  std::vector<RungResult> rungs;
  ConvergenceTable table;  // rows of successful rungs
  bool ok = true;
};

/// Runs the refinement ladder: per rung builds weights and Cs, picks tau,
/// evolves, differentiates and evaluates the metrics against the reference.
/// Writes errors.csv, manifest.txt and per-rung snapshots when config.out is set.
RunResult run(const RunConfig& config);

/// The four numerical experiments as ready-made configurations.
RunConfig preset_exp1(double s);
RunConfig preset_exp2(double s, bool use_cfl2 = false);
RunConfig preset_exp3(double s);

struct Exp4Witness {
  double t = 0.0;
  double x = 0.0;
  double U1 = 0.0;
  double U2 = 0.0;
};

struct Exp4Report {
  double s = 0.5;
  double h = 0.0;
  double T = 0.0;
  TimeSpec time;
  bool v_ordered = true;                 // V1 <= V2 at every node and step
  double min_v_gap = 0.0;                // min over nodes and steps of V2 - V1
  bool u_initially_ordered = true;       // U1 <= U2 at t = 0
  std::optional<Exp4Witness> crossing;   // first time with U1 > U2 somewhere
  std::size_t crossing_steps = 0;        // steps with at least one U1 > U2
};

/// Two ordered data u1 = u(x-1,0), u2 = u(x-1,0) + 2u(x+1,0) (t0 = 1, R = 1/2)
/// evolved in lockstep with a common tau.
Exp4Report run_exp4(double s, double h, double T, const std::filesystem::path& out = {},
                    unsigned threads = 1);

// ---------------------------------------------------------------------------
// Randomized structure suite

struct PropertyConfig {
  std::uint64_t seed = 20240601;
  std::size_t pairs = 200;
  std::size_t steps = 50;
  CflMode mode = CflMode::CFL1;
  double tau_factor = 1.0;  // multiplies the CFL step (2 for the negative control)
  double safety = 0.9;
  std::size_t max_dumps = 3;
};

struct PropertyCounts {
  std::size_t comparison = 0;
  std::size_t contraction = 0;
  std::size_t monotonicity = 0;
  std::size_t stability = 0;
  std::size_t lipschitz = 0;
  std::size_t total() const { return comparison + contraction + monotonicity + stability + lipschitz; }
};

struct PropertyReport {
  PropertyConfig config;
  PropertyCounts violations;
  std::size_t pairs_with_violation = 0;
  std::vector<std::string> counterexamples;  // full field dumps
  double translation_max_deviation = 0.0;    // max |evolve(v+c) - fl(evolve(v) + c)|
  bool translation_exact = true;             // normalized trajectories bit-identical
};

PropertyReport property_suite(const PropertyConfig& config);

std::string format_report(const PropertyReport& report);

}  // namespace fpme
