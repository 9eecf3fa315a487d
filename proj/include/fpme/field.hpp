#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace fpme {

/// Uniform grid window [i_min, i_max] with spacing h. Nodes outside the
/// window take the constant values v_left (i < i_min) and v_right (i > i_max).
struct GridSpec {
  double h = 0.0;
  long i_min = 0;
  long i_max = 0;
  double origin = 0.0;  // physical coordinate of index 0
  double v_left = 0.0;
  double v_right = 0.0;

  std::size_t size() const { return static_cast<std::size_t>(i_max - i_min + 1); }
  double x(long i) const { return origin + static_cast<double>(i) * h; }
  bool contains(long i) const { return i >= i_min && i <= i_max; }

  /// Throws ParameterError unless h > 0, i_min < i_max and v_left <= v_right.
  void validate() const;
};

/// Integrated variable V on a grid window. Nondecreasing in i for all
/// fields produced by the scheme.
struct VField {
  GridSpec grid;
  std::vector<double> values;  // values[i - i_min]
  long time_index = 0;

  double operator[](long i) const { return values[static_cast<std::size_t>(i - grid.i_min)]; }
  double& operator[](long i) { return values[static_cast<std::size_t>(i - grid.i_min)]; }

  /// Value at any index, applying the constant extensions outside the window.
  double at(long i) const {
    if (i < grid.i_min) return grid.v_left;
    if (i > grid.i_max) return grid.v_right;
    return (*this)[i];
  }

  std::span<const double> view() const { return values; }
};

/// Density U_i = (V_i - V_{i-1}) / h, stored for the cells
/// [x_{i-1}, x_i) with i = i_min .. i_max + 1. The last cell carries the jump
/// from V_{i_max} to the right extension, so h * sum(U) = v_right - v_left.
struct UField {
  GridSpec grid;
  std::vector<double> values;  // values[i - i_min], i in [i_min, i_max + 1]
  long time_index = 0;

  long first_cell() const { return grid.i_min; }
  long last_cell() const { return grid.i_max + 1; }
  double operator[](long i) const { return values[static_cast<std::size_t>(i - grid.i_min)]; }

  /// Zero outside the stored cells.
  double at(long i) const {
    if (i < first_cell() || i > last_cell()) return 0.0;
    return (*this)[i];
  }
};

/// Samples f at every node of the window.
template <class F>
VField sample(const GridSpec& grid, F&& f) {
  VField v{grid, std::vector<double>(grid.size()), 0};
  for (long i = grid.i_min; i <= grid.i_max; ++i) v[i] = f(grid.x(i));
  return v;
}

}  // namespace fpme
