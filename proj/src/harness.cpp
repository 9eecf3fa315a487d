#include "fpme/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "fpme/density.hpp"
#include "fpme/errors.hpp"

namespace fpme {
namespace {

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// Short form used in file names: 0.5 -> "0.5", 0.015625 -> "0.015625".
std::string tag(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

std::vector<double> merged_times(const RunConfig& c) {
  std::vector<double> t = c.snapshots;
  t.insert(t.end(), c.probe_t.begin(), c.probe_t.end());
  std::sort(t.begin(), t.end());
  t.erase(std::unique(t.begin(), t.end()), t.end());
  return t;
}

struct Reference {
  std::function<double(double)> v;
  std::function<double(double)> u;
  double v_sup = 0.0;
};

struct RungSetup {
  GridSpec grid;
  WeightTable table;
  AmReport am;
  ProblemSpec problem;
  VField v0;
};

RungSetup setup_rung(const RunConfig& c, double h) {
  const double M = datum_mass(c.datum);
  const auto [a, b] = datum_support(c.datum);
  RungSetup r;
  r.grid = padded_window(a, b, datum_scale(c.datum), c.T, c.s, h, 0.0, M, c.pad);
  r.table = window_weights(c.s, r.grid);
  r.am = check_Am(r.table);
  r.v0 = sample(r.grid, [&](double x) { return datum_v0(c.datum, x); });
  if (!is_nondecreasing(r.v0)) throw ContractViolation("sampled v_0 is not nondecreasing");
  r.problem.s = c.s;
  r.problem.m = c.m;
  r.problem.M = describe(r.v0).sup_norm;
  r.problem.cfl_mode = c.cfl_mode;
  r.problem.safety = c.safety;
  // Lipschitz bound: sup u_0 when the datum has a density, else the discrete slope.
  r.problem.L = datum_sup(c.datum).value_or(describe(r.v0).max_slope);
  return r;
}

RungResult evolve_rung(const RunConfig& c, double h) {
  RungResult rung;
  rung.h = h;
  RungSetup setup = setup_rung(c, h);
  rung.grid = setup.grid;
  rung.am = setup.am;
  const std::vector<double> times = merged_times(c);
  rung.time = make_time_spec(setup.problem, h, setup.am.Cs, c.T, times);

  const double mass_ref = rung.grid.v_right - rung.grid.v_left;
  const auto [a, b] = datum_support(c.datum);
  const double pad = rung.grid.x(rung.grid.i_max) - b;
  const double tail_radius = std::max(std::abs(a), std::abs(b)) + 0.5 * pad;
  double prev_sup = std::numeric_limits<double>::infinity();

  EvolveOptions opts;
  opts.threads = c.threads;
  opts.on_step = [&](std::size_t, const VField& f) {
    const UField u = differentiate(f);
    if (mass_ref > 0.0)
      rung.max_mass_drift = std::max(rung.max_mass_drift, std::abs(mass(u) - mass_ref) / mass_ref);
    const double sup = sup_norm(u);
    if (sup > prev_sup * (1.0 + 1e-12)) rung.sup_u_nonincreasing = false;
    prev_sup = sup;
    if (!is_nondecreasing(f)) rung.monotone = false;
    const SnapshotMeta meta = describe(f);
    rung.max_boundary_gap = std::max({rung.max_boundary_gap, meta.left_gap, meta.right_gap});
    rung.max_tail_mass = std::max(rung.max_tail_mass, tail_mass(u, tail_radius));
  };

  const auto start = std::chrono::steady_clock::now();
  try {
    rung.trajectory = evolve(setup.table, setup.problem, setup.v0, rung.time, times, opts);
  } catch (const CflViolation& e) {
    rung.ok = false;
    rung.failure = e.what();
  } catch (const NumericalBlowup& e) {
    rung.ok = false;
    rung.failure = e.what();
  }
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  rung.errors.h = h;
  rung.errors.tau = rung.time.tau;
  rung.errors.runtime_seconds = c.timing ? elapsed : 0.0;
  return rung;
}

Reference make_reference(const RunConfig& c) {
  Reference ref;
  if (c.reference == ReferenceKind::Analytic) {
    ExplicitSolutionParams p = c.reference_params;
    p.s = c.s;
    const double T = c.T;
    ref.v = [p, T](double x) { return explicit_v(x, T, p); };
    ref.u = [p, T](double x) { return explicit_u(x, T, p); };
    ref.v_sup = mass_explicit(p.R, p.s);
  } else if (c.reference == ReferenceKind::Numerical) {
    RunConfig fine = c;
    fine.snapshots.clear();
    fine.probe_t.clear();
    RungResult r = evolve_rung(fine, c.reference_h);
    if (!r.ok) throw std::runtime_error("reference run failed: " + r.failure);
    auto final_v = std::make_shared<VField>(r.trajectory.snapshots.back().field);
    auto final_u = std::make_shared<UField>(differentiate(*final_v));
    ref.v = [final_v](double x) { return eval_v(*final_v, x); };
    ref.u = [final_u](double x) { return eval_u(*final_u, x); };
    ref.v_sup = describe(*final_v).sup_norm;
  }
  return ref;
}

void evaluate(RungResult& rung, const Reference& ref) {
  const VField& V = rung.trajectory.snapshots.back().field;
  const UField U = differentiate(V);
  const GridSpec& g = V.grid;

  std::vector<double> ref_v;
  std::vector<double> u_bar;
  std::vector<double> ref_u;
  for (long i = g.i_min; i <= g.i_max; ++i) {
    const double x = g.x(i);
    ref_v.push_back(ref.v(x));
    u_bar.push_back(eval_u(U, x));  // cell [x_i, x_{i+1})
    ref_u.push_back(ref.u(x));
  }
  rung.errors.E_v = error_Ev(V.values, ref_v, ref.v_sup);
  rung.errors.E_u = error_Eu(u_bar, ref_u, g.h);
  rung.errors.E_u_weak = error_Eu_weak(u_bar, ref_u, g.h);

  CellDensity f1{g.h, U.values};
  CellDensity f2{g.h, {}};
  for (long i = U.first_cell(); i <= U.last_cell(); ++i)
    f2.values.push_back((ref.v(g.x(i)) - ref.v(g.x(i - 1))) / g.h);
  rung.errors.d0_bound = d0_upper_bound(f1, f2);
}

void write_manifest(const std::filesystem::path& path, const RunResult& result) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "# resolved configuration\n" << format_config(result.config) << "\n# rungs\n";
  for (std::size_t k = 0; k < result.rungs.size(); ++k) {
    const RungResult& r = result.rungs[k];
    out << "rung " << k << ": h=" << num(r.h) << " window=[" << r.grid.i_min << ',' << r.grid.i_max
        << "] K=" << (r.grid.i_max - r.grid.i_min + 1) << " c1=" << num(r.am.c1) << " c2=" << num(r.am.c2)
        << " c3=" << num(r.am.c3) << " Cs=" << num(r.am.Cs) << " cfl=" << to_string(r.time.mode)
        << " tau_bound=" << num(r.time.tau_bound) << " tau=" << num(r.time.tau) << " J=" << r.time.J
        << " mass_drift=" << num(r.max_mass_drift) << " sup_u_nonincreasing=" << r.sup_u_nonincreasing
        << " boundary_gap=" << num(r.max_boundary_gap) << " tail_mass=" << num(r.max_tail_mass)
        << " status=" << (r.ok ? "ok" : "aborted: " + r.failure) << '\n';
    for (const ProbeValue& p : r.probes)
      out << "  probe x=" << num(p.x) << " t=" << num(p.t) << " V=" << num(p.value) << '\n';
  }
}

void write_outputs(const RunResult& result) {
  const auto& dir = result.config.out;
  std::filesystem::create_directories(dir);
  write_errors_csv(dir / "errors.csv", result.table);
  write_manifest(dir / "manifest.txt", result);
  for (std::size_t k = 0; k < result.rungs.size(); ++k) {
    const RungResult& r = result.rungs[k];
    if (!r.ok) continue;
    const auto sub = dir / ("rung" + std::to_string(k) + "_h" + tag(r.h));
    std::vector<double> times;
    std::vector<std::string> files;
    for (const Snapshot& s : r.trajectory.snapshots) {
      const std::string file = "snapshot_t" + tag(s.t) + ".csv";
      write_snapshot_csv(sub / file, s.field);
      times.push_back(s.t);
      files.push_back(file);
    }
    write_snapshot_manifest(sub / "snapshots.csv", times, files);
  }
}

}  // namespace

RunResult run(const RunConfig& config) {
  config.validate();
  RunResult result;
  result.config = config;
  const Reference ref = make_reference(config);

  for (double h : config.ladder) {
    RungResult rung = evolve_rung(config, h);
    if (rung.ok) {
      for (double t : config.probe_t) {
        const auto it = std::find_if(rung.trajectory.snapshots.begin(), rung.trajectory.snapshots.end(),
                                     [t](const Snapshot& s) { return s.t == t; });
        for (double x : config.probe_x) rung.probes.push_back({x, t, eval_v(it->field, x)});
      }
      if (config.reference != ReferenceKind::None) evaluate(rung, ref);
      result.table.rows.push_back(rung.errors);
    } else {
      result.ok = false;
    }
    result.rungs.push_back(std::move(rung));
  }
  if (!config.out.empty()) write_outputs(result);
  return result;
}

RunConfig preset_exp1(double s) {
  RunConfig c;
  c.name = "exp1_s" + tag(s);
  c.s = s;
  c.m = 2.0;
  c.cfl_mode = CflMode::CFL1;
  c.datum = ExplicitProfileDatum{{s, 1.0, 0.5}, {{1.0, 0.0}}};
  c.T = 1.0;
  c.ladder = {0.125, 0.0625, 0.03125, 0.015625};
  c.snapshots = {1.0};
  c.reference = ReferenceKind::Analytic;
  c.reference_params = {s, 1.0, 0.5};
  return c;
}

RunConfig preset_exp2(double s, bool use_cfl2) {
  RunConfig c;
  c.name = "exp2_s" + tag(s);
  c.s = s;
  c.m = 2.0;
  c.cfl_mode = use_cfl2 ? CflMode::CFL2 : CflMode::CFL1;
  c.datum = DiracDatum{mass_explicit(1.0, s), 0.0};
  c.T = 1.0;
  c.ladder = {0.125, 0.0625, 0.03125, 0.015625};
  c.snapshots = {0.5, 1.0};
  c.probe_x = {-1.0, 1.0};
  c.probe_t = {0.5, 1.0};
  c.reference = ReferenceKind::Analytic;
  c.reference_params = {s, 0.0, 1.0};
  return c;
}

RunConfig preset_exp3(double s) {
  RunConfig c;
  c.name = "exp3_s" + tag(s);
  c.s = s;
  c.m = 4.0;
  c.cfl_mode = CflMode::CFL2;
  c.datum = BumpSumDatum{};
  c.pad = 1.0;
  c.T = 1.0;
  c.ladder = {0.125, 0.0625, 0.03125, 0.015625};
  c.snapshots = {1.0};
  c.reference = ReferenceKind::Numerical;
  c.reference_h = 1.0 / 512.0;
  return c;
}

Exp4Report run_exp4(double s, double h, double T, const std::filesystem::path& out, unsigned threads) {
  const ExplicitSolutionParams params{s, 1.0, 0.5};
  const InitialDatum d1 = ExplicitProfileDatum{params, {{1.0, 1.0}}};
  const InitialDatum d2 = ExplicitProfileDatum{params, {{1.0, 1.0}, {2.0, -1.0}}};

  Exp4Report rep;
  rep.s = s;
  rep.h = h;
  rep.T = T;

  const auto [a, b] = datum_support(d2);
  GridSpec g1 = padded_window(a, b, params.R, T, s, h, 0.0, datum_mass(d1));
  GridSpec g2 = g1;
  g2.v_right = datum_mass(d2);
  const WeightTable table = window_weights(s, g1);
  const AmReport am = check_Am(table);

  VField v1 = sample(g1, [&](double x) { return datum_v0(d1, x); });
  VField v2 = sample(g2, [&](double x) { return datum_v0(d2, x); });

  ProblemSpec p;
  p.s = s;
  p.m = 2.0;
  p.M = std::max(describe(v1).sup_norm, describe(v2).sup_norm);
  p.L = std::max(*datum_sup(d1), *datum_sup(d2));
  p.cfl_mode = CflMode::CFL1;
  const std::vector<double> snaps{0.0, 0.25 * T, 0.5 * T, 0.75 * T, T};
  rep.time = make_time_spec(p, h, am.Cs, T, snaps);

  std::vector<double> snap_times;
  std::vector<std::string> files;
  auto dump = [&](std::size_t j) {
    if (out.empty()) return;
    const double t = static_cast<double>(j) * rep.time.tau;
    for (double st : snaps) {
      if (std::abs(st - t) > 1e-9 * std::max(1.0, T)) continue;
      const std::string file = "snapshot_t" + tag(st) + ".csv";
      write_snapshot_csv(out / "u1" / file, v1);
      write_snapshot_csv(out / "u2" / file, v2);
      snap_times.push_back(st);
      files.push_back(file);
    }
  };

  rep.min_v_gap = std::numeric_limits<double>::infinity();
  auto inspect = [&](std::size_t j) {
    for (std::size_t k = 0; k < v1.values.size(); ++k) {
      const double gap = v2.values[k] - v1.values[k];
      rep.min_v_gap = std::min(rep.min_v_gap, gap);
      if (!(v1.values[k] <= v2.values[k])) rep.v_ordered = false;
    }
    if (!(g1.v_left <= g2.v_left && g1.v_right <= g2.v_right)) rep.v_ordered = false;
    const UField u1 = differentiate(v1);
    const UField u2 = differentiate(v2);
    // ignore round-off sized differences where both densities coincide
    const double tol = 1e-8 * sup_norm(u2);
    bool crossed = false;
    for (long i = u1.first_cell(); i <= u1.last_cell(); ++i) {
      if (u1[i] > u2[i] + tol) {
        if (j == 0) rep.u_initially_ordered = false;
        if (!rep.crossing && j > 0)
          rep.crossing = Exp4Witness{static_cast<double>(j) * rep.time.tau, g1.x(i), u1[i], u2[i]};
        crossed = true;
      }
    }
    if (crossed && j > 0) ++rep.crossing_steps;
  };

  inspect(0);
  dump(0);
  for (std::size_t j = 1; j <= rep.time.J; ++j) {
    v1 = step(table, p, v1, rep.time.tau, StepCheck::Enforce, threads);
    v2 = step(table, p, v2, rep.time.tau, StepCheck::Enforce, threads);
    inspect(j);
    dump(j);
  }

  if (!out.empty()) {
    write_snapshot_manifest(out / "u1" / "snapshots.csv", snap_times, files);
    write_snapshot_manifest(out / "u2" / "snapshots.csv", snap_times, files);
    std::ofstream rpt(out / "exp4_report.txt");
    rpt << "s = " << num(s) << "\nh = " << num(h) << "\nT = " << num(T) << "\ntau = " << num(rep.time.tau)
        << "\nJ = " << rep.time.J << "\nCs = " << num(am.Cs) << "\nv_ordered = " << rep.v_ordered
        << "\nmin_v_gap = " << num(rep.min_v_gap) << "\nu_initially_ordered = " << rep.u_initially_ordered
        << "\ncrossing_steps = " << rep.crossing_steps << '\n';
    if (rep.crossing)
      rpt << "witness: t = " << num(rep.crossing->t) << " x = " << num(rep.crossing->x)
          << " U1 = " << num(rep.crossing->U1) << " U2 = " << num(rep.crossing->U2) << '\n';
    else
      rpt << "witness: none\n";
  }
  return rep;
}

}  // namespace fpme
