#include "fpme/density.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "fpme/errors.hpp"

namespace fpme {
namespace {

// Neumaier compensated running sum.
struct CompensatedSum {
  double sum = 0.0;
  double comp = 0.0;
  void add(double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      comp += (sum - t) + x;
    else
      comp += (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  return out;
}

}  // namespace

UField differentiate(const VField& v) {
  const GridSpec& g = v.grid;
  UField u{g, std::vector<double>(g.size() + 1), v.time_index};
  double prev = g.v_left;
  for (std::size_t k = 0; k < v.values.size(); ++k) {
    u.values[k] = (v.values[k] - prev) / g.h;
    prev = v.values[k];
  }
  u.values.back() = (g.v_right - prev) / g.h;
  return u;
}

VField cumulative(const UField& u, double v_left) {
  GridSpec g = u.grid;
  g.v_left = v_left;
  VField v{g, std::vector<double>(g.size()), u.time_index};
  CompensatedSum acc;
  acc.add(v_left);
  for (std::size_t k = 0; k < v.values.size(); ++k) {
    acc.add(g.h * u.values[k]);
    v.values[k] = acc.value();
  }
  acc.add(g.h * u.values.back());
  v.grid.v_right = acc.value();
  return v;
}

double mass(const UField& u) {
  CompensatedSum acc;
  for (double x : u.values) acc.add(x);
  return u.grid.h * acc.value();
}

double sup_norm(const UField& u) { return *std::max_element(u.values.begin(), u.values.end()); }

double tail_mass(const UField& u, double R) {
  CompensatedSum acc;
  for (long i = u.first_cell(); i <= u.last_cell(); ++i)
    if (std::abs(u.grid.x(i)) > R) acc.add(u[i]);
  return u.grid.h * acc.value();
}

double eval_v(const VField& v, double x) {
  const GridSpec& g = v.grid;
  // cell [x_{i-1}, x_i) containing x
  const double q = (x - g.origin) / g.h;
  const double node = std::round(q);
  if (std::abs(q - node) <= 1e-12 * std::max(1.0, std::abs(q))) return v.at(static_cast<long>(node));
  const long i = static_cast<long>(std::floor(q)) + 1;
  const double xi = g.x(i);
  const double xim1 = g.x(i - 1);
  return (xi - x) / g.h * v.at(i - 1) + (x - xim1) / g.h * v.at(i);
}

double eval_u(const UField& u, double x) {
  const GridSpec& g = u.grid;
  const double q = (x - g.origin) / g.h;
  const double node = std::round(q);
  // x_i itself belongs to the cell [x_i, x_{i+1})
  if (std::abs(q - node) <= 1e-12 * std::max(1.0, std::abs(q))) return u.at(static_cast<long>(node) + 1);
  return u.at(static_cast<long>(std::floor(q)) + 1);
}

Interpolant::Interpolant(InterpolantKind kind, std::vector<double> times, std::vector<VField> fields)
    : kind_(kind), times_(std::move(times)), fields_(std::move(fields)) {
  if (times_.empty() || times_.size() != fields_.size())
    throw ContractViolation("interpolant needs one field per snapshot time");
  if (!std::is_sorted(times_.begin(), times_.end()))
    throw ContractViolation("snapshot times must be sorted");
  if (kind_ == InterpolantKind::PiecewiseConstantU)
    for (const VField& f : fields_) densities_.push_back(differentiate(f));
}

Interpolant Interpolant::from(const Trajectory& traj, InterpolantKind kind) {
  std::vector<double> times;
  std::vector<VField> fields;
  for (const Snapshot& s : traj.snapshots) {
    times.push_back(s.t);
    fields.push_back(s.field);
  }
  return Interpolant(kind, std::move(times), std::move(fields));
}

double Interpolant::operator()(double x, double t) const {
  if (t < times_.front() || t > times_.back())
    throw ContractViolation("interpolant evaluated outside its time horizon");
  // left-constant: last snapshot with t_j <= t
  const auto it = std::upper_bound(times_.begin(), times_.end(), t);
  const auto j = static_cast<std::size_t>(std::distance(times_.begin(), it)) - 1;
  if (kind_ == InterpolantKind::PiecewiseLinearV) return eval_v(fields_[j], x);
  return eval_u(densities_[j], x);
}

void write_v_csv(const std::filesystem::path& path, const VField& v) {
  auto out = open_out(path);
  out << "x,V\n";
  for (long i = v.grid.i_min; i <= v.grid.i_max; ++i) out << fmt(v.grid.x(i)) << ',' << fmt(v[i]) << '\n';
}

void write_u_csv(const std::filesystem::path& path, const UField& u) {
  auto out = open_out(path);
  out << "x,U\n";
  for (long i = u.first_cell(); i <= u.last_cell(); ++i) out << fmt(u.grid.x(i)) << ',' << fmt(u[i]) << '\n';
}

void write_snapshot_csv(const std::filesystem::path& path, const VField& v) {
  const UField u = differentiate(v);
  auto out = open_out(path);
  out << "x,V,U\n";
  for (long i = v.grid.i_min; i <= v.grid.i_max; ++i)
    out << fmt(v.grid.x(i)) << ',' << fmt(v[i]) << ',' << fmt(u[i]) << '\n';
}

void write_snapshot_manifest(const std::filesystem::path& path, const std::vector<double>& times,
                             const std::vector<std::string>& files) {
  auto out = open_out(path);
  out << "index,t,file\n";
  for (std::size_t k = 0; k < times.size(); ++k) out << k << ',' << fmt(times[k]) << ',' << files[k] << '\n';
}

}  // namespace fpme
