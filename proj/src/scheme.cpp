#include "fpme/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

#include "fpme/errors.hpp"

namespace fpme {

std::string to_string(CflMode mode) { return mode == CflMode::CFL1 ? "CFL1" : "CFL2"; }

CflMode parse_cfl_mode(const std::string& text) {
  if (text == "CFL1" || text == "cfl1" || text == "1") return CflMode::CFL1;
  if (text == "CFL2" || text == "cfl2" || text == "2") return CflMode::CFL2;
  throw ParameterError("unknown CFL mode '" + text + "'");
}

void GridSpec::validate() const {
  if (!(h > 0.0) || !std::isfinite(h)) throw ParameterError("grid spacing must be positive");
  if (!(i_min < i_max)) throw ParameterError("grid window needs i_min < i_max");
  if (!(v_left <= v_right)) throw ParameterError("extensions must satisfy v_left <= v_right");
}

void ProblemSpec::validate() const {
  if (!(s > 0.0 && s < 1.0)) throw ParameterError("s must lie in (0,1)");
  if (!(m >= 2.0)) throw ParameterError("m must be at least 2");
  if (!(M >= 0.0)) throw ParameterError("M must be nonnegative");
  if (!(safety > 0.0)) throw ParameterError("CFL safety factor must be positive");
  if (cfl_mode == CflMode::CFL2 && (!L || !(*L >= 0.0)))
    throw ParameterError("CFL2 requires a Lipschitz bound L");
}

double upwind_gradient(const VField& v, long i, double lap) {
  const double h = v.grid.h;
  if (lap <= 0.0) return (v.at(i + 1) - v.at(i)) / h;
  return (v.at(i) - v.at(i - 1)) / h;
}

double quasilinear_op(const WeightTable& table, const VField& v, long i, double m) {
  const double lap = apply_lap(table, v, i);
  const double grad = upwind_gradient(v, i, lap);
  return -std::pow(std::abs(grad), m - 1.0) * lap;
}

double cfl_tau(const ProblemSpec& p, double h, double Cs) {
  p.validate();
  if (!(h > 0.0 && h < 1.0)) throw ParameterError("CFL step requires 0 < h < 1");
  if (!(Cs > 0.0)) throw ParameterError("Cs must be positive");
  if (p.M == 0.0) return std::numeric_limits<double>::infinity();

  if (p.cfl_mode == CflMode::CFL1) {
    return std::pow(h, 2.0 * p.s + p.m - 1.0) / (Cs * p.m * std::pow(2.0 * p.M, p.m - 1.0));
  }
  const double L = *p.L;
  const double f = p.s == 0.5 ? 1.0 / std::abs(std::log(h)) : 1.0;
  const double denom = Cs * p.m * std::pow(L, p.m - 2.0) * std::max(L, 2.0 * p.M);
  if (denom == 0.0) return std::numeric_limits<double>::infinity();
  return std::pow(h, std::max(1.0, 2.0 * p.s)) * f / denom;
}

namespace {

bool on_grid(double t, double T, std::size_t J) {
  const double q = t / T * static_cast<double>(J);
  return std::abs(q - std::round(q)) <= 1e-9 * std::max(1.0, q);
}

}  // namespace

TimeSpec make_time_spec(const ProblemSpec& p, double h, double Cs, double T,
                        const std::vector<double>& snapshot_times) {
  if (!(T >= 0.0)) throw ParameterError("horizon T must be nonnegative");
  TimeSpec ts;
  ts.T = T;
  ts.Cs = Cs;
  ts.mode = p.cfl_mode;
  ts.tau_bound = cfl_tau(p, h, Cs);
  if (T == 0.0) return ts;

  const double limit = p.safety * ts.tau_bound;
  std::size_t J = std::isinf(limit) ? 1 : static_cast<std::size_t>(std::ceil(T / limit));
  J = std::max<std::size_t>(J, 1);
  while (T / static_cast<double>(J) > limit) ++J;

  const std::size_t J0 = J;
  auto aligned = [&](std::size_t j) {
    return std::all_of(snapshot_times.begin(), snapshot_times.end(),
                       [&](double t) { return on_grid(t, T, j); });
  };
  while (!aligned(J)) {
    ++J;
    if (J > J0 * 1000 + 1000000) throw ParameterError("snapshot times cannot be aligned with the time grid");
  }
  ts.J = J;
  ts.tau = T / static_cast<double>(J);
  return ts;
}

bool is_nondecreasing(const VField& v) {
  const GridSpec& g = v.grid;
  double prev = g.v_left;
  for (double x : v.values) {
    if (!(x >= prev)) return false;
    prev = x;
  }
  return g.v_right >= prev;
}

VField step(const WeightTable& table, const ProblemSpec& p, const VField& v, double tau,
            StepCheck check, unsigned threads) {
  VField out{v.grid, std::vector<double>(v.values.size()), v.time_index + 1};
  const long i_min = v.grid.i_min;
  const long i_max = v.grid.i_max;

  auto update = [&](long lo, long hi) {
    for (long i = lo; i <= hi; ++i) out[i] = v[i] + tau * quasilinear_op(table, v, i, p.m);
  };

  const long n = i_max - i_min + 1;
  if (threads <= 1 || n < 256) {
    update(i_min, i_max);
  } else {
    const long chunks = std::min<long>(threads, n);
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(chunks));
    for (long c = 0; c < chunks; ++c) {
      const long lo = i_min + c * n / chunks;
      const long hi = i_min + (c + 1) * n / chunks - 1;
      pool.emplace_back(update, lo, hi);
    }
    for (auto& t : pool) t.join();
  }

  if (check == StepCheck::Enforce && !is_nondecreasing(out)) {
    std::ostringstream os;
    os << "step " << out.time_index << " produced a non-monotone field (tau=" << tau
       << " too large for the data)";
    throw CflViolation(os.str(), static_cast<std::size_t>(out.time_index));
  }
  return out;
}

SnapshotMeta describe(const VField& v) {
  const GridSpec& g = v.grid;
  SnapshotMeta m;
  m.mass = g.v_right - g.v_left;
  m.sup_norm = std::max(std::abs(g.v_left), std::abs(g.v_right));
  double prev = g.v_left;
  for (double x : v.values) {
    m.sup_norm = std::max(m.sup_norm, std::abs(x));
    m.max_slope = std::max(m.max_slope, (x - prev) / g.h);
    prev = x;
  }
  m.max_slope = std::max(m.max_slope, (g.v_right - prev) / g.h);
  m.left_gap = v.values.front() - g.v_left;
  m.right_gap = g.v_right - v.values.back();
  return m;
}

Trajectory evolve(const WeightTable& table, const ProblemSpec& p, const VField& v0,
                  const TimeSpec& time, std::vector<double> snapshot_times,
                  const EvolveOptions& options) {
  v0.grid.validate();
  snapshot_times.push_back(0.0);
  snapshot_times.push_back(time.T);
  std::sort(snapshot_times.begin(), snapshot_times.end());
  snapshot_times.erase(std::unique(snapshot_times.begin(), snapshot_times.end()), snapshot_times.end());

  std::vector<std::size_t> snap_steps;
  for (double t : snapshot_times) {
    if (t < 0.0 || t > time.T * (1.0 + 1e-12))
      throw ContractViolation("snapshot time outside [0, T]");
    if (time.J == 0) {
      snap_steps.push_back(0);
      continue;
    }
    const double q = t / time.tau;
    if (std::abs(q - std::round(q)) > 1e-9 * std::max(1.0, q))
      throw ContractViolation("snapshot time is not on the time grid");
    snap_steps.push_back(static_cast<std::size_t>(std::llround(q)));
  }

  // Work on v - v_left so that constant shifts of the data do not alter the arithmetic.
  const double shift = v0.grid.v_left;
  VField cur = v0;
  cur.grid.v_left = 0.0;
  cur.grid.v_right = v0.grid.v_right - shift;
  for (double& x : cur.values) x -= shift;
  cur.time_index = 0;

  auto materialize = [&](const VField& f) {
    VField out = f;
    out.grid = v0.grid;
    for (double& x : out.values) x += shift;
    return out;
  };

  Trajectory traj;
  traj.time = time;
  std::size_t next = 0;
  auto record = [&](std::size_t j) {
    while (next < snap_steps.size() && snap_steps[next] == j) {
      VField f = materialize(cur);
      SnapshotMeta meta = describe(f);
      traj.snapshots.push_back({snapshot_times[next], std::move(f), meta});
      ++next;
    }
  };

  record(0);
  if (options.on_step) options.on_step(0, materialize(cur));
  for (std::size_t j = 1; j <= time.J; ++j) {
    cur = step(table, p, cur, time.tau, options.check, options.threads);
    for (double x : cur.values) {
      if (!std::isfinite(x)) {
        std::ostringstream os;
        os << "non-finite value at step " << j;
        throw NumericalBlowup(os.str(), j);
      }
    }
    record(j);
    if (options.on_step) options.on_step(j, materialize(cur));
  }
  return traj;
}

GridSpec padded_window(double a, double b, double R, double T, double s, double h, double v_left,
                       double v_right, std::optional<double> pad) {
  if (!(b >= a)) throw ParameterError("support must satisfy a <= b");
  const double width = pad ? *pad : std::max(4.0, 2.0 * std::pow(T, 1.0 / (1.0 + 2.0 * s))) * R;
  GridSpec g;
  g.h = h;
  g.origin = 0.0;
  g.i_min = static_cast<long>(std::floor((a - width) / h));
  g.i_max = static_cast<long>(std::ceil((b + width) / h));
  g.v_left = v_left;
  g.v_right = v_right;
  g.validate();
  return g;
}

WeightTable window_weights(double s, const GridSpec& grid) {
  return build_weights_fixed(s, grid.h, static_cast<std::size_t>(grid.i_max - grid.i_min) + 1);
}

}  // namespace fpme
