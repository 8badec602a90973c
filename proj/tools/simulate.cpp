// Copyright 2026 The tqdyn Authors
// SPDX-License-Identifier: Apache-2.0
//
// CLI front end: run a catalog scenario or a JSON config, emit CSV/JSON/SVG.
// Exit codes: 0 ok, 2 usage or config error, 3 numerical failure.

#include "tqdyn/tqdyn.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

namespace {

void print_catalog() {
  std::printf("%-8s %-7s %-13s %s\n", "name", "qubits", "realizations", "randomized");
  for (const auto& s : tqdyn::runner::catalog()) {
    std::string randomized;
    auto add = [&randomized](const char* tag, const auto& opt) {
      if (opt) randomized += randomized.empty() ? tag : std::string(",") + tag;
    };
    add("g", s.random.coupling);
    add("eta", s.random.eta);
    add("gamma_down", s.random.gamma_down);
    add("gamma_up", s.random.gamma_up);
    if (randomized.empty()) randomized = "-";
    std::printf("%-8s %-7d %-13d %s\n", s.name.c_str(), s.qubit_count,
                s.ensemble.realizations, randomized.c_str());
  }
}

void print_summary(const tqdyn::runner::RunSummary& s) {
  std::printf("scenario %s: N=%d, seed=%llu, runtime %.2fs\n", s.scenario.c_str(),
              s.realizations, static_cast<unsigned long long>(s.seed), s.runtime_seconds);
  std::printf("  gate: target |%s>  t_g=%.6f  peak=%.6f\n", s.gate.target.str().c_str(),
              s.gate.gate_time, s.gate.peak_probability);
  std::printf("  %s events:", tqdyn::measures::to_string(s.entanglement.kind).c_str());
  if (s.entanglement.times.empty()) std::printf(" none");
  for (size_t i = 0; i < s.entanglement.times.size(); ++i) {
    std::printf(" t=%.3f (%.3f)", s.entanglement.times[i], s.entanglement.values[i]);
  }
  std::printf("\n  final populations:");
  for (double p : s.final_populations) std::printf(" %.4f", p);
  std::printf("\n");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Open two- and three-qubit transmon dynamics under the Lindblad master "
      "equation, with classical-randomness disorder ensembles"};

  std::string scenario, config, out_dir = ".", format = "both";
  std::uint64_t seed = 0;
  int realizations = 0, points = 0, threads = 0;
  double t_max = 0.0;
  bool plot = false, list = false;

  app.add_option("scenario", scenario, "catalog scenario name (see --list)");
  auto* config_opt =
      app.add_option("--config", config, "JSON scenario file")->check(CLI::ExistingFile);
  auto* seed_opt = app.add_option("--seed", seed, "master seed (uint64)");
  auto* n_opt =
      app.add_option("--realizations", realizations, "ensemble size override")
          ->check(CLI::PositiveNumber);
  auto* tmax_opt =
      app.add_option("--t-max", t_max, "simulated time span")->check(CLI::PositiveNumber);
  auto* points_opt =
      app.add_option("--points", points, "output grid points")->check(CLI::Range(2, 1 << 22));
  app.add_option("--out", out_dir, "output directory (default .)");
  app.add_option("--format", format, "csv|json|both (default both)")
      ->check(CLI::IsMember({"csv", "json", "both"}));
  app.add_flag("--plot", plot, "also emit an SVG population plot");
  app.add_option("--threads", threads, "ensemble worker threads (0 = auto)")
      ->check(CLI::NonNegativeNumber);
  app.add_flag("--list", list, "list catalog scenarios and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (list) {
    print_catalog();
    return 0;
  }

  try {
    tqdyn::runner::ScenarioSpec spec;
    if (*config_opt) {
      if (!scenario.empty()) {
        std::cerr << "error: give either a scenario name or --config, not both\n";
        return 2;
      }
      spec = tqdyn::runner::load_scenario_file(config);
    } else if (!scenario.empty()) {
      spec = tqdyn::runner::find_scenario(scenario);
    } else {
      std::cerr << "error: a scenario name or --config FILE is required (try --list)\n";
      return 2;
    }

    tqdyn::runner::RunOptions opt;
    if (*seed_opt) opt.seed = seed;
    if (*n_opt) opt.realizations = realizations;
    if (*tmax_opt) opt.t_max = t_max;
    if (*points_opt) opt.points = points;
    opt.out_dir = out_dir;
    opt.threads = threads;
    opt.plot = plot;
    if (format == "csv") {
      opt.format = tqdyn::runner::RunOptions::Format::Csv;
    } else if (format == "json") {
      opt.format = tqdyn::runner::RunOptions::Format::Json;
    }

    const auto summary = tqdyn::runner::run(spec, opt);
    print_summary(summary);
    return 0;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const tqdyn::dynamics::IntegrationError& e) {
    std::cerr << "integration failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << "\n";
    return 3;
  }
}
