#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include "fpme/errors.hpp"
#include "fpme/harness.hpp"

namespace {

void print_run(const fpme::RunResult& r) {
  std::printf("%s: s=%g m=%g %s\n", r.config.name.c_str(), r.config.s, r.config.m,
              fpme::to_string(r.config.cfl_mode).c_str());
  std::printf("%10s %12s %8s %12s %12s %12s %12s\n", "h", "tau", "J", "E_v", "E_u", "d0_bound", "Cs");
  for (const auto& g : r.rungs) {
    if (!g.ok) {
      std::printf("%10g  aborted: %s\n", g.h, g.failure.c_str());
      continue;
    }
    std::printf("%10g %12.4e %8zu %12.4e %12.4e %12.4e %12.4e\n", g.h, g.time.tau, g.time.J, g.errors.E_v,
                g.errors.E_u, g.errors.d0_bound, g.am.Cs);
  }
  for (const auto& g : r.rungs)
    for (const auto& p : g.probes) std::printf("probe h=%g x=%g t=%g V=%.12g\n", g.h, p.x, p.t, p.value);
  if (!r.config.out.empty()) std::printf("wrote %s\n", r.config.out.string().c_str());
}

int finish_run(const fpme::RunConfig& config) {
  const fpme::RunResult r = fpme::run(config);
  print_run(r);
  return r.ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"explicit monotone scheme for the fractional porous medium equation in 1d"};
  app.require_subcommand(1);

  auto* run_cmd = app.add_subcommand("run", "run an experiment described by a config file");
  std::string config_path;
  run_cmd->add_option("--config", config_path, "key = value config file")->required()->check(CLI::ExistingFile);
  std::string run_out;
  run_cmd->add_option("--out", run_out, "output directory (overrides the config)");

  auto* preset_cmd = app.add_subcommand("preset", "run one of the four reference experiments");
  std::string which;
  preset_cmd->add_option("name", which, "exp1|exp2|exp3|exp4")
      ->required()
      ->check(CLI::IsMember({"exp1", "exp2", "exp3", "exp4"}));
  double preset_s = 0.5;
  preset_cmd->add_option("--s", preset_s, "fractional order");
  std::string preset_out;
  preset_cmd->add_option("--out", preset_out, "output directory");
  bool use_cfl2 = false;
  preset_cmd->add_flag("--cfl2", use_cfl2, "run exp2 under CFL2 instead of CFL1");
  unsigned threads = 1;
  preset_cmd->add_option("--threads", threads, "worker threads per step")->check(CLI::PositiveNumber);
  preset_cmd->set_help_flag("--help", "print this help message and exit");
  std::optional<std::string> reference_h;
  preset_cmd->add_option("--reference-h", reference_h, "grid spacing of the numerical reference, e.g. 2^-8 (exp3)");
  double exp4_h = 1.0 / 32.0;
  preset_cmd->add_option("--h", exp4_h, "grid spacing for exp4");

  auto* weights_cmd = app.add_subcommand("weights", "print the weight table as CSV");
  weights_cmd->set_help_flag("--help", "print this help message and exit");
  double ws = 0.5;
  double wh = 1.0;
  weights_cmd->add_option("--s", ws, "fractional order")->required();
  weights_cmd->add_option("--h", wh, "grid spacing")->required();
  std::size_t wK = 64;
  weights_cmd->add_option("--K", wK, "number of weights")->check(CLI::PositiveNumber);
  std::optional<double> weps;
  weights_cmd->add_option("--eps", weps, "choose K from a relative tail tolerance instead");

  auto* props_cmd = app.add_subcommand("props", "randomized structure suite");
  std::uint64_t seed = 20240601;
  props_cmd->add_option("--seed", seed, "random seed");
  std::size_t pairs = 200;
  props_cmd->add_option("--pairs", pairs, "pairs per CFL mode");
  std::size_t steps = 50;
  props_cmd->add_option("--steps", steps, "steps per pair");
  double tau_factor = 1.0;
  props_cmd->add_option("--tau-factor", tau_factor, "multiplier on the CFL step");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      fpme::RunConfig c = fpme::load_config(config_path);
      if (!run_out.empty()) c.out = run_out;
      return finish_run(c);
    }

    if (preset_cmd->parsed()) {
      if (which == "exp4") {
        const fpme::Exp4Report r = fpme::run_exp4(preset_s, exp4_h, 1.0, preset_out, threads);
        std::printf("exp4: s=%g h=%g tau=%.6e J=%zu\n", r.s, r.h, r.time.tau, r.time.J);
        std::printf("V1 <= V2 at all nodes and steps: %s (min gap %.3e)\n", r.v_ordered ? "yes" : "no",
                    r.min_v_gap);
        if (r.crossing)
          std::printf("U1 > U2 first at t=%.6g x=%.6g (U1=%.6g U2=%.6g), %zu steps with a crossing\n",
                      r.crossing->t, r.crossing->x, r.crossing->U1, r.crossing->U2, r.crossing_steps);
        else
          std::printf("no U crossing found\n");
        return r.v_ordered ? 0 : 1;
      }
      fpme::RunConfig c = which == "exp1"   ? fpme::preset_exp1(preset_s)
                          : which == "exp2" ? fpme::preset_exp2(preset_s, use_cfl2)
                                            : fpme::preset_exp3(preset_s);
      c.out = preset_out;
      c.threads = threads;
      if (reference_h) {
        c.reference_h = fpme::parse_number(*reference_h);
        c.validate();
      }
      return finish_run(c);
    }

    if (weights_cmd->parsed()) {
      const fpme::WeightTable t =
          weps ? fpme::build_weights(ws, wh, *weps) : fpme::build_weights_fixed(ws, wh, wK);
      std::printf("k,w,scaled_cumsum\n");
      double cum = 0.0;
      for (std::size_t k = 1; k <= t.K; ++k) {
        cum += t.w[k - 1];
        std::printf("%zu,%.17g,%.17g\n", k, t.w[k - 1], cum);
      }
      return 0;
    }

    if (props_cmd->parsed()) {
      bool clean = true;
      for (auto mode : {fpme::CflMode::CFL1, fpme::CflMode::CFL2}) {
        fpme::PropertyConfig pc;
        pc.seed = seed;
        pc.pairs = pairs;
        pc.steps = steps;
        pc.mode = mode;
        pc.tau_factor = tau_factor;
        const fpme::PropertyReport r = fpme::property_suite(pc);
        std::cout << fpme::format_report(r);
        clean = clean && r.violations.total() == 0 && r.translation_exact;
      }
      return clean ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
