#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "fpme/errors.hpp"
#include "fpme/harness.hpp"

using namespace fpme;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

const char* kSmall = R"(
name = small
s = 0.5
m = 2
datum = explicit
t0 = 1
R = 0.5
T = 0.25
ladder = 2^-3, 2^-4
snapshots = 0.125
probe_x = 0
probe_t = 0.25
timing = off
)";

}  // namespace

TEST(Config, Numbers) {
  EXPECT_DOUBLE_EQ(parse_number("0.125"), 0.125);
  EXPECT_DOUBLE_EQ(parse_number("2^-3"), 0.125);
  EXPECT_DOUBLE_EQ(parse_number(" 1/8 "), 0.125);
  EXPECT_THROW(parse_number("abc"), ParameterError);
  EXPECT_THROW(parse_number("1.5x"), ParameterError);
}

TEST(Config, ParseAndFormatRoundTrip) {
  const RunConfig c = parse_config(kSmall);
  EXPECT_EQ(c.name, "small");
  EXPECT_EQ(c.ladder.size(), 2u);
  EXPECT_FALSE(c.timing);
  const RunConfig again = parse_config(format_config(c));
  EXPECT_EQ(format_config(again), format_config(c));
}

TEST(Config, Rejections) {
  EXPECT_THROW(parse_config("bogus = 1\n"), ParameterError);
  EXPECT_THROW(parse_config("s = 1.5\n"), ParameterError);
  EXPECT_THROW(parse_config("ladder = 0.1, 0.2\n"), ParameterError);
  EXPECT_THROW(parse_config("m = 3\nreference = analytic\n"), ParameterError);
  EXPECT_THROW(parse_config("datum = nothing\n"), ParameterError);
  EXPECT_THROW(parse_config("just a line\n"), ParameterError);
  EXPECT_EQ(parse_config("datum = bump3\nm = 4\n").reference, ReferenceKind::Numerical);
}

TEST(Presets, ExperimentParameters) {
  const RunConfig e1 = preset_exp1(0.25);
  EXPECT_EQ(e1.m, 2.0);
  EXPECT_EQ(e1.reference_params.t0, 1.0);
  EXPECT_EQ(e1.reference_params.R, 0.5);
  EXPECT_EQ(e1.T, 1.0);
  EXPECT_EQ(e1.cfl_mode, CflMode::CFL1);
  ASSERT_EQ(e1.ladder.size(), 4u);
  EXPECT_EQ(e1.ladder.front(), 0.125);
  EXPECT_EQ(e1.ladder.back(), 0.015625);

  const RunConfig e2 = preset_exp2(0.5);
  EXPECT_EQ(e2.reference_params.t0, 0.0);
  EXPECT_EQ(e2.reference_params.R, 1.0);
  EXPECT_TRUE(std::holds_alternative<DiracDatum>(e2.datum));
  EXPECT_EQ(preset_exp2(0.5, true).cfl_mode, CflMode::CFL2);

  const RunConfig e3 = preset_exp3(0.5);
  EXPECT_EQ(e3.m, 4.0);
  EXPECT_EQ(e3.reference, ReferenceKind::Numerical);
  EXPECT_TRUE(std::holds_alternative<BumpSumDatum>(e3.datum));
}

TEST(Run, SmallLadderWritesOutputs) {
  const fs::path dir = fs::temp_directory_path() / "fpme_run_test";
  fs::remove_all(dir);
  RunConfig c = parse_config(kSmall);
  c.out = dir;
  const RunResult r = run(c);
  ASSERT_TRUE(r.ok);
  ASSERT_EQ(r.rungs.size(), 2u);
  EXPECT_LT(r.rungs[1].errors.E_v, r.rungs[0].errors.E_v);
  EXPECT_EQ(r.rungs[0].probes.size(), 1u);
  EXPECT_LE(r.rungs[0].max_mass_drift, 1e-12);
  EXPECT_TRUE(fs::exists(dir / "errors.csv"));
  EXPECT_TRUE(fs::exists(dir / "manifest.txt"));
  bool snapshot = false;
  for (const auto& e : fs::recursive_directory_iterator(dir))
    if (e.path().filename().string().rfind("snapshot_t", 0) == 0) snapshot = true;
  EXPECT_TRUE(snapshot);
  const std::string manifest = slurp(dir / "manifest.txt");
  EXPECT_NE(manifest.find("Cs"), std::string::npos);
  EXPECT_NE(manifest.find("tau"), std::string::npos);
  fs::remove_all(dir);
}

TEST(Run, DeterministicWithTimingOff) {
  const fs::path a = fs::temp_directory_path() / "fpme_det_a";
  const fs::path b = fs::temp_directory_path() / "fpme_det_b";
  RunConfig c = parse_config(kSmall);
  c.out = a;
  run(c);
  c.out = b;
  c.threads = 3;
  run(c);
  EXPECT_EQ(slurp(a / "errors.csv"), slurp(b / "errors.csv"));
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST(Run, NumericalReference) {
  RunConfig c = parse_config("datum = step\nM = 1\nT = 0.125\nladder = 2^-3, 2^-4\nreference = numerical\n"
                             "reference_h = 2^-6\ntiming = off\n");
  const RunResult r = run(c);
  ASSERT_TRUE(r.ok);
  EXPECT_LT(r.rungs[1].errors.E_v, r.rungs[0].errors.E_v);
}

TEST(Properties, SmallSuiteIsClean) {
  PropertyConfig pc;
  pc.pairs = 20;
  pc.steps = 20;
  const PropertyReport r = property_suite(pc);
  EXPECT_EQ(r.violations.total(), 0u);
  EXPECT_TRUE(r.translation_exact);
  EXPECT_NE(format_report(r).find("violations"), std::string::npos);
}

TEST(Properties, SameSeedSameReport) {
  PropertyConfig pc;
  pc.pairs = 30;
  pc.steps = 10;
  pc.tau_factor = 2.0;
  EXPECT_EQ(format_report(property_suite(pc)), format_report(property_suite(pc)));
}
