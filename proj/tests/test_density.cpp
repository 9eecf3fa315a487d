#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <string>

#include "fpme/density.hpp"
#include "fpme/errors.hpp"

using namespace fpme;

namespace {

VField ramp(double h, long lo, long hi, double vl, double vr) {
  GridSpec g;
  g.h = h;
  g.i_min = lo;
  g.i_max = hi;
  g.v_left = vl;
  g.v_right = vr;
  return sample(g, [&](double x) {
    const double a = g.x(lo);
    const double b = g.x(hi);
    return vl + (vr - vl) * std::clamp((x - a) / (b - a), 0.0, 1.0) * 0.9;
  });
}

}  // namespace

TEST(Differentiate, CellsAndMass) {
  const VField v = ramp(0.25, -4, 4, 0.5, 2.5);
  const UField u = differentiate(v);
  EXPECT_EQ(u.values.size(), v.values.size() + 1);
  EXPECT_EQ(u.first_cell(), -4);
  EXPECT_EQ(u.last_cell(), 5);
  EXPECT_DOUBLE_EQ(u[-4], (v[-4] - 0.5) / 0.25);
  EXPECT_DOUBLE_EQ(u[5], (2.5 - v[4]) / 0.25);
  EXPECT_NEAR(mass(u), 2.0, 1e-15);
  EXPECT_EQ(u.at(-5), 0.0);
  EXPECT_EQ(u.at(6), 0.0);
}

TEST(Differentiate, RoundTripWithinFourUlp) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    GridSpec g;
    g.h = std::ldexp(1.0, -2 - trial % 6);
    g.i_min = -30 - trial;
    g.i_max = 30 + trial;
    g.v_left = 10.0 * (unit(rng) - 0.5);
    VField v{g, std::vector<double>(g.size()), 0};
    double acc = g.v_left;
    for (double& x : v.values) x = acc += unit(rng);
    v.grid.v_right = acc + unit(rng);
    const double M = std::max(std::abs(v.grid.v_left), std::abs(v.grid.v_right));
    const VField back = cumulative(differentiate(v), v.grid.v_left);
    const double tol = 4.0 * M * std::numeric_limits<double>::epsilon();
    for (std::size_t k = 0; k < v.values.size(); ++k) ASSERT_NEAR(back.values[k], v.values[k], tol);
    ASSERT_NEAR(back.grid.v_right, v.grid.v_right, tol);
  }
}

TEST(Density, SupAndTail) {
  const VField v = ramp(0.5, -4, 4, 0.0, 1.0);
  const UField u = differentiate(v);
  double mx = 0.0;
  for (double x : u.values) mx = std::max(mx, x);
  EXPECT_EQ(sup_norm(u), mx);
  EXPECT_NEAR(tail_mass(u, 100.0), 0.0, 0.0);
  // the cell ending at x = 0 is the only one with |x_i| <= 0
  EXPECT_NEAR(tail_mass(u, 0.0), mass(u) - 0.5 * u[0], 1e-15);
}

TEST(Interpolant, SpaceAndTime) {
  GridSpec g;
  g.h = 0.5;
  g.i_min = 0;
  g.i_max = 3;
  g.v_left = 0.0;
  g.v_right = 4.0;
  VField a{g, {0.0, 1.0, 2.0, 3.0}, 0};
  VField b{g, {1.0, 2.0, 3.0, 3.5}, 1};
  EXPECT_DOUBLE_EQ(eval_v(a, 0.25), 0.5);
  EXPECT_DOUBLE_EQ(eval_v(a, 1.0), 2.0);
  EXPECT_DOUBLE_EQ(eval_v(a, -3.0), 0.0);
  EXPECT_DOUBLE_EQ(eval_v(a, 9.0), 4.0);
  const UField u = differentiate(a);
  // x in [x_i, x_{i+1}) reads the cell that ends at x_{i+1}
  EXPECT_DOUBLE_EQ(eval_u(u, 0.0), 2.0);
  EXPECT_DOUBLE_EQ(eval_u(u, 1.6), 2.0);
  EXPECT_DOUBLE_EQ(eval_u(u, -0.2), 0.0);

  const Interpolant iv(InterpolantKind::PiecewiseLinearV, {0.0, 0.5}, {a, b});
  EXPECT_DOUBLE_EQ(iv(0.25, 0.0), 0.5);
  EXPECT_DOUBLE_EQ(iv(0.25, 0.49), 0.5);
  EXPECT_DOUBLE_EQ(iv(0.25, 0.5), 1.5);
  EXPECT_THROW(iv(0.0, 0.6), ContractViolation);
  const Interpolant iu(InterpolantKind::PiecewiseConstantU, {0.0, 0.5}, {a, b});
  EXPECT_DOUBLE_EQ(iu(1.0, 0.5), 1.0);
}

TEST(Csv, SnapshotColumns) {
  const auto dir = std::filesystem::temp_directory_path() / "fpme_density_test";
  std::filesystem::create_directories(dir);
  const VField v = ramp(0.5, -2, 2, 0.0, 1.0);
  write_snapshot_csv(dir / "snap.csv", v);
  std::ifstream in(dir / "snap.csv");
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "x,V,U");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 5);
  write_snapshot_manifest(dir / "snapshots.csv", {0.0, 1.0}, {"a.csv", "b.csv"});
  std::ifstream m(dir / "snapshots.csv");
  std::getline(m, line);
  EXPECT_EQ(line, "index,t,file");
  std::filesystem::remove_all(dir);
}
