#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "fpme/field.hpp"

namespace fpme {

/// Quadrature weights of the "powers of the discrete Laplacian" family,
///
///   w_k = h^{-2s} 2^{2s} Gamma(1/2+s) Gamma(|k|-s) / (sqrt(pi) |Gamma(-s)| Gamma(|k|+1+s)),
///
/// stored scale-free (w_k h^{2s}) for k = 1..K. Symmetry w_{-k} = w_k is
/// implicit. The one-sided tail has the closed form
///
///   sum_{k>d} w_k = w_d (d - s) / (2s),
///
/// which follows from Gamma(k-s)/Gamma(k+1+s) telescoping, so truncation
/// against constant extensions carries no error.
struct WeightTable {
  double s = 0.0;
  double h = 0.0;
  std::size_t K = 0;
  std::vector<double> w;  // w[k-1] = w_k * h^{2s}

  // Physical sums (units of w_k).
  double sum_all = 0.0;            // sum over k != 0
  double sum_far = 0.0;            // sum over |kh| > 1
  double sum_near_weighted = 0.0;  // sum over 0 < |kh| <= 1 of |kh| w_k
  double tail = 0.0;               // two-sided sum over |k| > K

  double scale() const;  // h^{-2s}

  /// Physical w_k for 1 <= k <= K.
  double weight(std::size_t k) const { return w[k - 1] * scale(); }

  /// Scale-free one-sided tail sum_{k>d} w_k h^{2s}, for 0 <= d <= K.
  double tail_scaled(std::size_t d) const;
};

inline constexpr std::size_t kDefaultMaxTerms = std::size_t{1} << 24;
inline constexpr double kDefaultEpsTail = 1e-8;

/// Scale-free w_1 from the closed Gamma formula (log-Gamma evaluation).
double first_weight_scaled(double s);

/// Builds the table with the smallest K whose two-sided tail is below
/// eps_tail * sum_all. Throws TruncationError if K would exceed max_terms.
WeightTable build_weights(double s, double h, double eps_tail = kDefaultEpsTail,
                          std::size_t max_terms = kDefaultMaxTerms);

/// Builds the table with a fixed truncation index K (at least 1). Used when
/// K must cover a grid window: with K >= window width, apply_lap is exact
/// for constant extensions.
WeightTable build_weights_fixed(double s, double h, std::size_t K);

/// Discrete fractional Laplacian at window node i,
///   sum_{0<|k|<=K} (v_i - v_{i+k}) w_k + tail corrections,
/// with neighbours beyond the window replaced by the extension values.
double apply_lap(const WeightTable& table, const VField& v, long i);

/// Same operator applied to a function of x. far_left / far_right are the
/// limits (or means) of f at -inf / +inf, used for the tail beyond K.
double apply_lap_fn(const WeightTable& table, const std::function<double(double)>& f,
                    double x, double far_left, double far_right);

/// Empirical constants of the (A_m) bounds computed from the table itself.
struct AmReport {
  double c1 = 0.0;  // sum_all * h^{2s}
  double c2 = 0.0;  // sum_far
  double c3 = 0.0;  // sum_near_weighted / branch(s, h)
  double Cs = 0.0;  // max(c1, c2, c3)
};

/// branch(s,h) = h^{1-2s} (s > 1/2), |log h| (s = 1/2), 1 (s < 1/2).
double am_branch(double s, double h);

/// Throws ParameterError for h >= 1.
AmReport check_Am(const WeightTable& table);

/// Smooth probe with a known fractional Laplacian.
struct ConsistencyProbe {
  std::function<double(double)> f;
  std::function<double(double)> reference;  // (-Delta)^s f
  double far_left = 0.0;
  double far_right = 0.0;
  std::vector<double> sample_points;
};

/// cos(x), whose fractional Laplacian is cos(x) for every s; far means 0.
ConsistencyProbe cosine_probe();

struct AcRow {
  double h = 0.0;
  double max_error = 0.0;
};

struct AcReport {
  std::vector<AcRow> rows;  // in the order of the given h values
  bool decreasing = false;
  std::vector<double> orders;  // log2(e_k / e_{k+1}) / log2(h_k / h_{k+1})
};

/// Max nodal consistency error of the discrete operator for each h.
AcReport check_Ac(double s, const std::vector<double>& hs, const ConsistencyProbe& probe,
                  double eps_tail = 1e-6);

}  // namespace fpme
