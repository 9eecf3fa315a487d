#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <sstream>

#include "fpme/harness.hpp"

namespace fpme {
namespace {

constexpr double kQuantum = 0x1p-30;  // data live on this lattice so shifts by dyadic c are exact

double quantize(double x) { return std::round(x / kQuantum) * kQuantum; }

struct PairCase {
  double s = 0.5;
  double m = 2.0;
  double h = 0.0625;
  VField phi;
  VField psi;
  double L = 0.0;
};

// Nondecreasing field from nonnegative increments; inc[0] is the jump from
// v_left to the first node and inc.back() the jump from the last node to v_right.
VField from_increments(const GridSpec& base, double v_left, const std::vector<double>& inc) {
  GridSpec g = base;
  VField v{g, std::vector<double>(g.size()), 0};
  double acc = quantize(v_left);
  v.grid.v_left = acc;
  for (std::size_t k = 0; k < v.values.size(); ++k) {
    acc = quantize(acc + inc[k]);
    v.values[k] = acc;
  }
  v.grid.v_right = quantize(acc + inc.back());
  return v;
}

std::vector<double> random_increments(std::mt19937_64& rng, std::size_t cells, CflMode mode, double h,
                                      double L) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> inc(cells);
  if (mode == CflMode::CFL1) {
    // mixture of flat stretches, small ramps and sharp jumps
    for (double& x : inc) {
      const double r = unit(rng);
      x = r < 0.4 ? 0.0 : (r < 0.85 ? 0.1 * unit(rng) : unit(rng));
    }
    double total = 0.0;
    for (double x : inc) total += x;
    const double target = 0.5 + 1.5 * unit(rng);
    if (total == 0.0) inc[cells / 2] = target;
    else
      for (double& x : inc) x *= target / total;
  } else {
    for (double& x : inc) {
      const double r = unit(rng);
      x = r < 0.3 ? 0.0 : L * h * unit(rng);
    }
  }
  return inc;
}

std::vector<double> padded(std::vector<double> inner, std::size_t margin) {
  std::vector<double> inc(margin, 0.0);
  inc.insert(inc.end(), inner.begin(), inner.end());
  inc.insert(inc.end(), margin, 0.0);
  return inc;
}

// Flat margins wider than the number of steps: a node only moves once its
// upwind neighbour differs, so the frozen extensions then coincide with the
// scheme on the whole lattice.
PairCase random_pair(std::mt19937_64& rng, CflMode mode, std::size_t steps) {
  std::uniform_int_distribution<int> pick(0, 2);
  std::uniform_int_distribution<long> width(16, 48);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  PairCase c;
  c.s = std::array{0.25, 0.5, 0.75}[static_cast<std::size_t>(pick(rng))];
  c.m = std::array{2.0, 2.0, 3.0}[static_cast<std::size_t>(pick(rng))];
  c.h = std::array{0.125, 0.0625, 0.03125}[static_cast<std::size_t>(pick(rng))];
  c.L = 0.5 + 3.5 * unit(rng);

  const std::size_t margin = steps + 1;
  const long inner = width(rng);
  GridSpec g;
  g.h = c.h;
  g.i_min = 0;
  g.i_max = inner + 2 * static_cast<long>(margin);

  if (unit(rng) < 0.25) {
    // a single jump from -M to M, and a copy lifted just below the jump:
    // the configuration where monotonicity in each argument is tightest
    const double M = quantize(0.5 + unit(rng));
    std::vector<double> inc(g.size() + 1, 0.0);
    const std::size_t at = margin + static_cast<std::size_t>(inner) / 2;
    inc[at] = 2.0 * M;
    c.phi = from_increments(g, -M, inc);
    c.psi = c.phi;
    const double lift = quantize(0.05 * M * unit(rng));
    c.psi.values[at - 1] += lift;
    return c;
  }

  const double left1 = unit(rng) < 0.5 ? 0.0 : -unit(rng);
  c.phi = from_increments(g, left1, padded(random_increments(rng, static_cast<std::size_t>(inner) + 2, mode, c.h, c.L), margin));
  const double left2 = left1 + (unit(rng) < 0.5 ? 0.0 : 0.2 * unit(rng));
  const VField chi = from_increments(g, left2, padded(random_increments(rng, static_cast<std::size_t>(inner) + 2, mode, c.h, c.L), margin));

  // psi = max(phi, chi) is nondecreasing, dominates phi and keeps the Lipschitz bound
  c.psi = c.phi;
  c.psi.grid.v_left = std::max(c.phi.grid.v_left, chi.grid.v_left);
  c.psi.grid.v_right = std::max(c.phi.grid.v_right, chi.grid.v_right);
  for (std::size_t k = 0; k < c.psi.values.size(); ++k) c.psi.values[k] = std::max(c.phi.values[k], chi.values[k]);
  return c;
}

double sup_abs(const VField& v) { return describe(v).sup_norm; }

double sup_diff(const VField& a, const VField& b) {
  double d = std::max(std::abs(a.grid.v_left - b.grid.v_left), std::abs(a.grid.v_right - b.grid.v_right));
  for (std::size_t k = 0; k < a.values.size(); ++k) d = std::max(d, std::abs(a.values[k] - b.values[k]));
  return d;
}

std::string dump_field(const char* name, const VField& v) {
  std::ostringstream os;
  os.precision(17);
  os << name << ": v_left=" << v.grid.v_left << " v_right=" << v.grid.v_right << " values=[";
  for (std::size_t k = 0; k < v.values.size(); ++k) os << (k ? ", " : "") << v.values[k];
  os << "]\n";
  return os.str();
}

}  // namespace

PropertyReport property_suite(const PropertyConfig& config) {
  PropertyReport report;
  report.config = config;
  std::mt19937_64 rng(config.seed);
  const double eps = std::numeric_limits<double>::epsilon();

  for (std::size_t pair = 0; pair < config.pairs; ++pair) {
    PairCase c = random_pair(rng, config.mode, config.steps);
    const WeightTable table = window_weights(c.s, c.phi.grid);
    const AmReport am = check_Am(table);

    ProblemSpec p;
    p.s = c.s;
    p.m = c.m;
    p.M = std::max(sup_abs(c.phi), sup_abs(c.psi));
    p.L = std::max(describe(c.phi).max_slope, describe(c.psi).max_slope);
    p.cfl_mode = config.mode;
    p.safety = config.safety;
    const double tau = config.tau_factor * p.safety * cfl_tau(p, c.h, am.Cs);

    const double tol = 8.0 * eps * std::max(1.0, p.M);
    const double slope_tol = tol / c.h;
    const double sup0_phi = sup_abs(c.phi);
    const double sup0_psi = sup_abs(c.psi);
    const double gap0 = sup_diff(c.phi, c.psi);

    PropertyCounts before = report.violations;
    std::string first_failure;
    VField phi = c.phi;
    VField psi = c.psi;
    for (std::size_t j = 1; j <= config.steps; ++j) {
      const double slope_phi = describe(phi).max_slope;
      const double slope_psi = describe(psi).max_slope;
      phi = step(table, p, phi, tau, StepCheck::Skip);
      psi = step(table, p, psi, tau, StepCheck::Skip);

      auto note = [&](std::size_t& counter, const char* what) {
        ++counter;
        if (first_failure.empty()) first_failure = std::string(what) + " at step " + std::to_string(j);
      };
      if (!is_nondecreasing(phi) || !is_nondecreasing(psi)) note(report.violations.monotonicity, "monotonicity");
      bool ordered = true;
      for (std::size_t k = 0; k < phi.values.size(); ++k)
        if (phi.values[k] > psi.values[k] + tol) ordered = false;
      if (!ordered) note(report.violations.comparison, "comparison");
      if (sup_diff(phi, psi) > gap0 + tol) note(report.violations.contraction, "l-inf contraction");
      if (sup_abs(phi) > sup0_phi + tol || sup_abs(psi) > sup0_psi + tol)
        note(report.violations.stability, "l-inf stability");
      if (describe(phi).max_slope > slope_phi + slope_tol || describe(psi).max_slope > slope_psi + slope_tol)
        note(report.violations.lipschitz, "Lipschitz stability");
    }

    if (report.violations.total() > before.total()) {
      ++report.pairs_with_violation;
      if (report.counterexamples.size() < config.max_dumps) {
        std::ostringstream os;
        os.precision(17);
        os << "pair " << pair << ": " << first_failure << "; s=" << c.s << " m=" << c.m << " h=" << c.h
           << " tau=" << tau << " Cs=" << am.Cs << " M=" << p.M << " L=" << *p.L << '\n'
           << dump_field("phi0", c.phi) << dump_field("psi0", c.psi);
        report.counterexamples.push_back(os.str());
      }
    }

    // translation: evolve(v0 + c) must equal evolve(v0) + c in floating point
    if (config.tau_factor <= 1.0) {
      VField base = c.phi;
      const double shift = base.grid.v_left;
      base.grid.v_left = 0.0;
      base.grid.v_right -= shift;
      for (double& x : base.values) x -= shift;
      const double cst = 1.5;
      VField moved = base;
      moved.grid.v_left += cst;
      moved.grid.v_right += cst;
      for (double& x : moved.values) x += cst;

      TimeSpec ts;
      ts.tau = tau;
      ts.J = config.steps;
      ts.T = tau * static_cast<double>(config.steps);
      const Trajectory a = evolve(table, p, base, ts, {}, {StepCheck::Skip, 1, {}});
      const Trajectory b = evolve(table, p, moved, ts, {}, {StepCheck::Skip, 1, {}});
      const VField& fa = a.snapshots.back().field;
      const VField& fb = b.snapshots.back().field;
      for (std::size_t k = 0; k < fa.values.size(); ++k) {
        const double dev = std::abs(fb.values[k] - (fa.values[k] + cst));
        if (dev != 0.0) report.translation_exact = false;
        report.translation_max_deviation = std::max(report.translation_max_deviation, dev);
      }
    }
  }
  return report;
}

std::string format_report(const PropertyReport& r) {
  std::ostringstream os;
  os << "mode=" << to_string(r.config.mode) << " seed=" << r.config.seed << " pairs=" << r.config.pairs
     << " steps=" << r.config.steps << " tau_factor=" << r.config.tau_factor << '\n'
     << "violations: comparison=" << r.violations.comparison << " contraction=" << r.violations.contraction
     << " monotonicity=" << r.violations.monotonicity << " stability=" << r.violations.stability
     << " lipschitz=" << r.violations.lipschitz << " (pairs affected: " << r.pairs_with_violation << ")\n";
  if (r.config.tau_factor <= 1.0)
    os << "translation: exact=" << (r.translation_exact ? "yes" : "no")
       << " max deviation=" << r.translation_max_deviation << '\n';
  for (const auto& c : r.counterexamples) os << "counterexample " << c;
  return os.str();
}

}  // namespace fpme
