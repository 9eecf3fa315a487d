#include "fpme/oplib.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "fpme/errors.hpp"

namespace fpme {
namespace {

void require_order(double s) {
  if (!(s > 0.0 && s < 1.0)) {
    std::ostringstream os;
    os << "fractional order s must lie in (0,1), got " << s;
    throw ParameterError(os.str());
  }
}

void require_spacing(double h) {
  if (!(h > 0.0) || !std::isfinite(h)) throw ParameterError("grid spacing h must be positive and finite");
}

// log of 2^{2s} Gamma(1/2+s) / (sqrt(pi) |Gamma(-s)|), the k-independent factor.
double log_prefactor(double s) {
  return 2.0 * s * std::numbers::ln2 + std::lgamma(0.5 + s) - 0.5 * std::log(std::numbers::pi) -
         std::lgamma(-s);
}

// Scale-free w_k from the closed formula.
double weight_closed(double s, double k) {
  return std::exp(log_prefactor(s) + std::lgamma(k - s) - std::lgamma(k + 1.0 + s));
}

// Scale-free one-sided tail sum_{k>d} w_k from the closed formula, d >= 1.
double tail_closed(double s, double d) { return weight_closed(s, d) * (d - s) / (2.0 * s); }

// Scale-free two-sided total sum_{k != 0} w_k.
double sum_all_scaled(double s) {
  return std::exp(log_prefactor(s) + std::lgamma(1.0 - s) - std::lgamma(1.0 + s)) / s;
}

// Largest k with k*h <= 1 (0 when h > 1).
std::size_t unit_radius(double h) {
  if (h > 1.0) return 0;
  auto n = static_cast<std::size_t>(std::floor(1.0 / h));
  while (static_cast<double>(n + 1) * h <= 1.0) ++n;
  while (n > 0 && static_cast<double>(n) * h > 1.0) --n;
  return n;
}

std::vector<double> recurrence_weights(double s, std::size_t count) {
  std::vector<double> w(count);
  if (count == 0) return w;
  w[0] = first_weight_scaled(s);
  for (std::size_t k = 1; k < count; ++k) {
    const double kk = static_cast<double>(k);
    w[k] = w[k - 1] * (kk - s) / (kk + 1.0 + s);
  }
  return w;
}

WeightTable assemble(double s, double h, std::size_t K) {
  WeightTable t;
  t.s = s;
  t.h = h;
  t.K = K;
  const std::size_t n_unit = unit_radius(h);
  std::vector<double> all = recurrence_weights(s, std::max(K, n_unit));

  const double scale = std::pow(h, -2.0 * s);
  const double total = sum_all_scaled(s);

  // near sum: sum over 1 <= k <= n_unit of k*h*w_k, both sides
  double near = 0.0;
  for (std::size_t k = n_unit; k >= 1; --k) near += static_cast<double>(k) * all[k - 1];
  near *= 2.0 * h;

  const double far = n_unit == 0 ? total
                                 : 2.0 * all[n_unit - 1] * (static_cast<double>(n_unit) - s) / (2.0 * s);

  all.resize(K);
  t.w = std::move(all);
  t.sum_all = total * scale;
  t.sum_far = far * scale;
  t.sum_near_weighted = near * scale;
  t.tail = 2.0 * t.tail_scaled(K) * scale;
  return t;
}

}  // namespace

double WeightTable::scale() const { return std::pow(h, -2.0 * s); }

double WeightTable::tail_scaled(std::size_t d) const {
  if (d == 0) return 0.5 * sum_all_scaled(s);
  if (d > K) throw ContractViolation("tail_scaled: cutoff beyond stored weights");
  return w[d - 1] * (static_cast<double>(d) - s) / (2.0 * s);
}

double first_weight_scaled(double s) {
  require_order(s);
  return weight_closed(s, 1.0);
}

WeightTable build_weights(double s, double h, double eps_tail, std::size_t max_terms) {
  require_order(s);
  require_spacing(h);
  if (!(eps_tail > 0.0 && eps_tail < 1.0)) throw ParameterError("eps_tail must lie in (0,1)");

  const double target = eps_tail * sum_all_scaled(s);
  auto tail_ok = [&](std::size_t k) { return 2.0 * tail_closed(s, static_cast<double>(k)) < target; };

  if (!tail_ok(max_terms)) {
    const double achieved = 2.0 * tail_closed(s, static_cast<double>(max_terms)) / sum_all_scaled(s);
    std::ostringstream os;
    os << "relative tail " << eps_tail << " not reachable with K <= " << max_terms
       << " (achieved " << achieved << ")";
    throw TruncationError(os.str(), achieved);
  }
  std::size_t hi = 1;
  while (!tail_ok(hi)) hi = std::min(hi * 2, max_terms);
  std::size_t lo = hi / 2;  // tail_ok(lo) is false unless lo == 0
  while (hi - lo > 1) {
    const std::size_t mid = lo + (hi - lo) / 2;
    (tail_ok(mid) ? hi : lo) = mid;
  }
  return assemble(s, h, std::max<std::size_t>(hi, 1));
}

WeightTable build_weights_fixed(double s, double h, std::size_t K) {
  require_order(s);
  require_spacing(h);
  if (K == 0) throw ParameterError("truncation index K must be positive");
  return assemble(s, h, K);
}

double apply_lap(const WeightTable& table, const VField& v, long i) {
  const GridSpec& g = v.grid;
  if (!g.contains(i)) throw ContractViolation("apply_lap: index outside the stored window");

  const auto K = static_cast<long>(table.K);
  const long kl = std::min(i - g.i_min, K);
  const long kr = std::min(g.i_max - i, K);
  const double vi = v[i];
  const double* w = table.w.data();

  double acc = 0.0;
  for (long k = 1; k <= kl; ++k) acc += w[k - 1] * (vi - v[i - k]);
  for (long k = 1; k <= kr; ++k) acc += w[k - 1] * (vi - v[i + k]);
  acc += (vi - g.v_left) * table.tail_scaled(static_cast<std::size_t>(kl));
  acc += (vi - g.v_right) * table.tail_scaled(static_cast<std::size_t>(kr));
  return acc * table.scale();
}

double apply_lap_fn(const WeightTable& table, const std::function<double(double)>& f, double x,
                    double far_left, double far_right) {
  const double fx = f(x);
  const double h = table.h;
  double acc = 0.0;
  // far terms first: they are the smallest
  for (std::size_t k = table.K; k >= 1; --k) {
    const double kh = static_cast<double>(k) * h;
    acc += table.w[k - 1] * ((fx - f(x - kh)) + (fx - f(x + kh)));
  }
  const double t = table.tail_scaled(table.K);
  acc += (fx - far_left) * t + (fx - far_right) * t;
  return acc * table.scale();
}

double am_branch(double s, double h) {
  if (s > 0.5) return std::pow(h, 1.0 - 2.0 * s);
  if (s == 0.5) return std::abs(std::log(h));
  return 1.0;
}

AmReport check_Am(const WeightTable& table) {
  if (!(table.h < 1.0)) throw ParameterError("check_Am requires h < 1");
  AmReport r;
  r.c1 = table.sum_all * std::pow(table.h, 2.0 * table.s);
  r.c2 = table.sum_far;
  r.c3 = table.sum_near_weighted / am_branch(table.s, table.h);
  r.Cs = std::max({r.c1, r.c2, r.c3});
  return r;
}

ConsistencyProbe cosine_probe() {
  ConsistencyProbe p;
  p.f = [](double x) { return std::cos(x); };
  p.reference = [](double x) { return std::cos(x); };
  p.far_left = 0.0;
  p.far_right = 0.0;
  for (int j = -4; j <= 4; ++j) p.sample_points.push_back(j * std::numbers::pi / 4.0);
  return p;
}

AcReport check_Ac(double s, const std::vector<double>& hs, const ConsistencyProbe& probe,
                  double eps_tail) {
  AcReport report;
  for (double h : hs) {
    const WeightTable table = build_weights(s, h, eps_tail);
    double worst = 0.0;
    for (double x : probe.sample_points) {
      const double approx = apply_lap_fn(table, probe.f, x, probe.far_left, probe.far_right);
      worst = std::max(worst, std::abs(approx - probe.reference(x)));
    }
    report.rows.push_back({h, worst});
  }
  report.decreasing = true;
  for (std::size_t k = 0; k + 1 < report.rows.size(); ++k) {
    const AcRow& a = report.rows[k];
    const AcRow& b = report.rows[k + 1];
    if (!(b.max_error < a.max_error)) report.decreasing = false;
    report.orders.push_back(std::log2(a.max_error / b.max_error) / std::log2(a.h / b.h));
  }
  return report;
}

}  // namespace fpme
