// Copyright 2026 The tqdyn Authors
// SPDX-License-Identifier: Apache-2.0
//
// Scenario catalog (one preset per figure panel of the reproduced results),
// JSON config parsing, execution, and CSV/JSON/SVG emission.

#pragma once

#include "tqdyn/measures.hpp"
#include "tqdyn/model.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

namespace tqdyn::runner {

using json = nlohmann::json;

/// Full description of one experiment. `coupling` holds the base coupling
/// values (one entry for two qubits, three for g12/g23/g13); under a random
/// coupling draw they act as fixed ratios scaled by the shared draw.
struct ScenarioSpec {
  std::string name = "custom";
  int qubit_count = 2;
  std::vector<double> frequencies;
  std::vector<double> coupling;
  disorder::RandomSpec random;
  dynamics::NoiseRates noise;
  qops::BasisLabel initial;
  dynamics::IntegratorConfig integrator;
  disorder::EnsembleConfig ensemble;

  void validate() const {
    if (qubit_count != 2 && qubit_count != 3) {
      throw std::invalid_argument("scenario '" + name + "': qubit_count must be 2 or 3");
    }
    if (frequencies.size() != static_cast<size_t>(qubit_count)) {
      throw std::invalid_argument("scenario '" + name + "': frequencies must list " +
                                  std::to_string(qubit_count) + " entries");
    }
    for (double w : frequencies) {
      if (w <= 0) throw std::invalid_argument("scenario '" + name + "': frequencies must be > 0");
    }
    const size_t pairs = qubit_count == 2 ? 1 : 3;
    if (coupling.size() != pairs) {
      throw std::invalid_argument("scenario '" + name + "': coupling must list " +
                                  std::to_string(pairs) + " entries");
    }
    for (double g : coupling) {
      if (g < 0) throw std::invalid_argument("scenario '" + name + "': couplings must be >= 0");
    }
    if (initial.qubits() != qubit_count) {
      throw std::invalid_argument("scenario '" + name +
                                  "': initial state must have one bit per qubit");
    }
    noise.validate();
    random.validate();
    integrator.validate();
    ensemble.validate();
  }
};

namespace detail {

inline ScenarioSpec base_two(const std::string& name) {
  ScenarioSpec s;
  s.name = name;
  s.qubit_count = 2;
  s.frequencies = {1.0, 1.0};
  s.coupling = {1.0};
  s.initial = qops::BasisLabel::from_string("01");
  s.ensemble.realizations = 1;
  return s;
}

inline ScenarioSpec base_three(const std::string& name) {
  ScenarioSpec s;
  s.name = name;
  s.qubit_count = 3;
  s.frequencies = {1.0, 0.5, 1.0};
  s.coupling = {1.0, 1.0, 0.5};
  s.initial = qops::BasisLabel::from_string("101");
  s.ensemble.realizations = 1;
  return s;
}

}  // namespace detail

/// The named presets: fig2a-fig2f and fig4a-fig4f follow the reproduced
/// figure panels; fig2g is the extra all-random variant discussed in the
/// text without a figure (no reference values).
inline std::vector<ScenarioSpec> catalog() {
  const disorder::Uniform unit{0.0, 1.0};
  std::vector<ScenarioSpec> out;

  auto two = detail::base_two("fig2a");
  out.push_back(two);

  two = detail::base_two("fig2b");
  two.random.coupling = unit;
  two.ensemble.realizations = 1500;
  out.push_back(two);

  two = detail::base_two("fig2c");
  two.random.eta = unit;
  two.ensemble.realizations = 1500;
  out.push_back(two);

  two = detail::base_two("fig2d");
  two.random.gamma_down = unit;
  two.ensemble.realizations = 1500;
  out.push_back(two);

  two = detail::base_two("fig2e");
  two.random.gamma_up = unit;
  two.ensemble.realizations = 1500;
  out.push_back(two);

  two = detail::base_two("fig2f");
  two.random.eta = unit;
  two.random.gamma_down = unit;
  two.random.gamma_up = unit;
  two.ensemble.realizations = 1500;
  out.push_back(two);

  two = detail::base_two("fig2g");  // no paper reference values
  two.random.coupling = unit;
  two.random.eta = unit;
  two.random.gamma_down = unit;
  two.random.gamma_up = unit;
  two.ensemble.realizations = 1500;
  out.push_back(two);

  auto three = detail::base_three("fig4a");
  out.push_back(three);

  three = detail::base_three("fig4b");
  three.random.coupling = unit;
  three.ensemble.realizations = 150;
  out.push_back(three);

  three = detail::base_three("fig4c");
  three.random.eta = unit;
  three.ensemble.realizations = 150;
  out.push_back(three);

  three = detail::base_three("fig4d");
  three.random.gamma_down = unit;
  three.ensemble.realizations = 150;
  out.push_back(three);

  three = detail::base_three("fig4e");
  three.random.gamma_up = unit;
  three.ensemble.realizations = 150;
  out.push_back(three);

  three = detail::base_three("fig4f");
  three.random.eta = unit;
  three.random.gamma_down = unit;
  three.random.gamma_up = unit;
  three.ensemble.realizations = 150;
  out.push_back(three);

  return out;
}

inline ScenarioSpec find_scenario(const std::string& name) {
  for (auto& s : catalog()) {
    if (s.name == name) return s;
  }
  throw std::invalid_argument("unknown scenario '" + name + "'");
}

/// Exchange Hamiltonian of a scenario with resolved coupling values.
inline Mat scenario_hamiltonian(const ScenarioSpec& spec, const std::vector<double>& g) {
  if (spec.qubit_count == 2) {
    model::TwoQubitParams p{spec.frequencies[0], spec.frequencies[1],
                            model::Constant{g[0]}};
    return model::build_rwa_two(p, g[0]);
  }
  model::ThreeQubitParams p{spec.frequencies[0], spec.frequencies[1], spec.frequencies[2]};
  return model::build_three(p, {g[0], g[1], g[2]});
}

inline dynamics::LindbladSystem scenario_system(const ScenarioSpec& spec,
                                                const disorder::Realization& real) {
  return dynamics::LindbladSystem::constant(
      scenario_hamiltonian(spec, real.couplings),
      dynamics::qubit_noise_channels(real.qubit_noise));
}

/// Target of the nominal gate: two qubits swap their bits; three qubits swap
/// qubits 2 and 3 (the |101> <-> |110> sector of the reproduced experiment).
inline qops::BasisLabel gate_target(const qops::BasisLabel& initial) {
  qops::BasisLabel target = initial;
  if (target.qubits() == 2) {
    std::swap(target.bits[0], target.bits[1]);
  } else if (target.qubits() == 3) {
    std::swap(target.bits[1], target.bits[2]);
  }
  return target;
}

struct RunOptions {
  std::optional<std::uint64_t> seed;
  std::optional<int> realizations;
  std::optional<double> t_max;
  std::optional<int> points;
  std::string out_dir = ".";
  enum class Format { Csv, Json, Both } format = Format::Both;
  bool plot = false;
  int threads = 0;
};

inline ScenarioSpec apply_overrides(ScenarioSpec spec, const RunOptions& opt) {
  if (opt.seed) spec.ensemble.master_seed = *opt.seed;
  if (opt.realizations) spec.ensemble.realizations = *opt.realizations;
  if (opt.t_max) spec.integrator.t_max = *opt.t_max;
  if (opt.points) spec.integrator.grid_points = *opt.points;
  if (opt.threads > 0) spec.ensemble.threads = opt.threads;
  return spec;
}

struct RunSummary {
  std::string scenario;
  std::uint64_t seed = 0;
  int realizations = 1;
  double runtime_seconds = 0.0;
  measures::GateReport gate;
  measures::EntanglementReport entanglement;
  std::vector<double> final_populations;

  friend bool operator==(const RunSummary& a, const RunSummary& b) {
    return a.scenario == b.scenario && a.seed == b.seed &&
           a.realizations == b.realizations && a.runtime_seconds == b.runtime_seconds &&
           a.gate.gate_time == b.gate.gate_time &&
           a.gate.peak_probability == b.gate.peak_probability &&
           a.gate.target == b.gate.target && a.entanglement.kind == b.entanglement.kind &&
           a.entanglement.times == b.entanglement.times &&
           a.entanglement.values == b.entanglement.values &&
           a.final_populations == b.final_populations;
  }
};

/// Everything a run produces before any file is written.
struct RunResult {
  RunSummary summary;
  int qubits = 2;
  Eigen::VectorXd times;
  std::vector<Mat> states;                          // trajectory or ensemble mean
  std::vector<Eigen::VectorXd> population_stderr;   // empty for single runs
  dynamics::TrajectoryDiagnostics diagnostics;
};

inline RunResult execute(const ScenarioSpec& spec) {
  spec.validate();
  const auto start = std::chrono::steady_clock::now();

  RunResult result;
  result.qubits = spec.qubit_count;

  const auto rho0 = qops::basis_state(spec.initial);
  const bool single = spec.random.empty() && spec.ensemble.realizations == 1;
  if (single) {
    const disorder::Realization real{
        spec.coupling, std::vector<dynamics::NoiseRates>(spec.qubit_count, spec.noise)};
    auto traj = dynamics::integrate(scenario_system(spec, real), rho0, spec.integrator);
    result.times = std::move(traj.times);
    result.states = std::move(traj.states);
    result.diagnostics = traj.diagnostics;
  } else {
    disorder::EnsembleProblem problem{spec.coupling, spec.noise,   spec.qubit_count,
                                      spec.random,   rho0,         spec.integrator,
                                      nullptr};
    problem.make_system = [&spec](const disorder::Realization& real) {
      return scenario_system(spec, real);
    };
    auto ens = disorder::run_ensemble(problem, spec.ensemble);
    result.times = std::move(ens.times);
    result.states = std::move(ens.mean_states);
    result.population_stderr = std::move(ens.population_stderr);
    result.diagnostics = ens.diagnostics;
  }

  auto& summary = result.summary;
  summary.scenario = spec.name;
  summary.seed = spec.ensemble.master_seed;
  summary.realizations = spec.ensemble.realizations;
  summary.gate = measures::find_gate_event(result.times, result.states,
                                           gate_target(spec.initial));
  summary.entanglement = measures::find_entanglement_events(
      result.times, result.states, measures::default_measure(spec.qubit_count));
  const Eigen::VectorXd final_pops = measures::populations(result.states.back());
  summary.final_populations.assign(final_pops.data(), final_pops.data() + final_pops.size());
  summary.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

// ---------------------------------------------------------------------------
// serialization

namespace detail {

inline std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline disorder::Uniform uniform_from_json(const json& j, const std::string& field) {
  if (!j.is_object() || !j.contains("lo") || !j.contains("hi")) {
    throw std::invalid_argument("config: field '" + field +
                                "' must be an object {\"lo\": ..., \"hi\": ...}");
  }
  disorder::Uniform u{j.at("lo").get<double>(), j.at("hi").get<double>()};
  u.validate();
  return u;
}

template <typename T>
T get_or(const json& j, const std::string& field, T fallback) {
  if (!j.contains(field)) return fallback;
  try {
    return j.at(field).get<T>();
  } catch (const json::exception& e) {
    throw std::invalid_argument("config: field '" + field + "': " + e.what());
  }
}

}  // namespace detail

/// Parse a ScenarioSpec from its JSON form. Field names mirror the struct;
/// omitted sections fall back to defaults.
inline ScenarioSpec scenario_from_json(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("config: top level must be an object");
  ScenarioSpec spec;
  spec.name = detail::get_or<std::string>(j, "name", "custom");
  spec.qubit_count = detail::get_or<int>(j, "qubit_count", 2);
  const size_t pairs = spec.qubit_count == 3 ? 3 : 1;
  spec.frequencies = detail::get_or<std::vector<double>>(
      j, "frequencies", std::vector<double>(spec.qubit_count, 1.0));
  spec.coupling = detail::get_or<std::vector<double>>(j, "coupling",
                                                      std::vector<double>(pairs, 1.0));
  spec.initial = qops::BasisLabel::from_string(detail::get_or<std::string>(
      j, "initial", spec.qubit_count == 3 ? "101" : "01"));

  if (j.contains("noise")) {
    const json& n = j.at("noise");
    spec.noise.gamma_down = detail::get_or<double>(n, "gamma_down", 0.0);
    spec.noise.gamma_up = detail::get_or<double>(n, "gamma_up", 0.0);
    spec.noise.eta = detail::get_or<double>(n, "eta", 0.0);
  }
  if (j.contains("random")) {
    const json& r = j.at("random");
    if (r.contains("coupling")) {
      spec.random.coupling = detail::uniform_from_json(r.at("coupling"), "random.coupling");
    }
    if (r.contains("eta")) {
      spec.random.eta = detail::uniform_from_json(r.at("eta"), "random.eta");
    }
    if (r.contains("gamma_down")) {
      spec.random.gamma_down =
          detail::uniform_from_json(r.at("gamma_down"), "random.gamma_down");
    }
    if (r.contains("gamma_up")) {
      spec.random.gamma_up = detail::uniform_from_json(r.at("gamma_up"), "random.gamma_up");
    }
  }
  if (j.contains("integrator")) {
    const json& i = j.at("integrator");
    spec.integrator.rel_tol = detail::get_or<double>(i, "rel_tol", spec.integrator.rel_tol);
    spec.integrator.abs_tol = detail::get_or<double>(i, "abs_tol", spec.integrator.abs_tol);
    spec.integrator.t_max = detail::get_or<double>(i, "t_max", spec.integrator.t_max);
    spec.integrator.grid_points =
        detail::get_or<int>(i, "grid_points", spec.integrator.grid_points);
  }
  if (j.contains("ensemble")) {
    const json& e = j.at("ensemble");
    spec.ensemble.realizations =
        detail::get_or<int>(e, "realizations", spec.ensemble.realizations);
    spec.ensemble.master_seed =
        detail::get_or<std::uint64_t>(e, "master_seed", spec.ensemble.master_seed);
    spec.ensemble.threads = detail::get_or<int>(e, "threads", spec.ensemble.threads);
  }
  spec.validate();
  return spec;
}

inline json scenario_to_json(const ScenarioSpec& spec) {
  json j;
  j["name"] = spec.name;
  j["qubit_count"] = spec.qubit_count;
  j["frequencies"] = spec.frequencies;
  j["coupling"] = spec.coupling;
  j["initial"] = spec.initial.str();
  j["noise"] = {{"gamma_down", spec.noise.gamma_down},
                {"gamma_up", spec.noise.gamma_up},
                {"eta", spec.noise.eta}};
  json r = json::object();
  auto put = [&r](const char* key, const std::optional<disorder::Uniform>& u) {
    if (u) r[key] = {{"lo", u->lo}, {"hi", u->hi}};
  };
  put("coupling", spec.random.coupling);
  put("eta", spec.random.eta);
  put("gamma_down", spec.random.gamma_down);
  put("gamma_up", spec.random.gamma_up);
  if (!r.empty()) j["random"] = r;
  j["integrator"] = {{"rel_tol", spec.integrator.rel_tol},
                     {"abs_tol", spec.integrator.abs_tol},
                     {"t_max", spec.integrator.t_max},
                     {"grid_points", spec.integrator.grid_points}};
  j["ensemble"] = {{"realizations", spec.ensemble.realizations},
                   {"master_seed", spec.ensemble.master_seed},
                   {"threads", spec.ensemble.threads}};
  return j;
}

inline ScenarioSpec load_scenario_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open '" + path.string() + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("config: " + path.string() + ": " + e.what());
  }
  return scenario_from_json(j);
}

inline json summary_to_json(const RunSummary& s) {
  json j;
  j["scenario"] = s.scenario;
  j["seed"] = s.seed;
  j["realizations"] = s.realizations;
  j["runtime_seconds"] = s.runtime_seconds;
  j["gate"] = {{"target", s.gate.target.str()},
               {"gate_time", s.gate.gate_time},
               {"peak_probability", s.gate.peak_probability}};
  j["entanglement"] = {{"kind", measures::to_string(s.entanglement.kind)},
                       {"times", s.entanglement.times},
                       {"values", s.entanglement.values}};
  j["final_populations"] = s.final_populations;
  return j;
}

inline RunSummary summary_from_json(const json& j) {
  RunSummary s;
  s.scenario = j.at("scenario").get<std::string>();
  s.seed = j.at("seed").get<std::uint64_t>();
  s.realizations = j.at("realizations").get<int>();
  s.runtime_seconds = j.at("runtime_seconds").get<double>();
  s.gate.target = qops::BasisLabel::from_string(j.at("gate").at("target").get<std::string>());
  s.gate.gate_time = j.at("gate").at("gate_time").get<double>();
  s.gate.peak_probability = j.at("gate").at("peak_probability").get<double>();
  const std::string kind = j.at("entanglement").at("kind").get<std::string>();
  if (kind == "concurrence") {
    s.entanglement.kind = measures::MeasureKind::Concurrence;
  } else if (kind == "w_fidelity") {
    s.entanglement.kind = measures::MeasureKind::WFidelity;
  } else if (kind == "population_balance") {
    s.entanglement.kind = measures::MeasureKind::PopulationBalance;
  } else {
    throw std::invalid_argument("summary: unknown measure kind '" + kind + "'");
  }
  s.entanglement.times = j.at("entanglement").at("times").get<std::vector<double>>();
  s.entanglement.values = j.at("entanglement").at("values").get<std::vector<double>>();
  s.final_populations = j.at("final_populations").get<std::vector<double>>();
  return s;
}

// ---------------------------------------------------------------------------
// file emission

/// Time-series CSV: t, populations, the default entanglement measure, and
/// (for ensembles) per-population standard errors. Floats carry 17
/// significant digits so equal runs emit byte-identical files.
inline void write_csv(const std::filesystem::path& path, const RunResult& result) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  const Eigen::Index dim = result.states.front().rows();
  const auto kind = measures::default_measure(result.qubits);

  out << "# tqdyn scenario " << result.summary.scenario
      << "; basis index: qubit 1 = most significant bit; paper labels are 1-based:"
         " rho_kk -> column rho_{k-1}\n";
  out << "t";
  for (Eigen::Index i = 0; i < dim; ++i) out << ",rho_" << i;
  out << "," << measures::to_string(kind);
  const bool with_stderr = !result.population_stderr.empty();
  if (with_stderr) {
    for (Eigen::Index i = 0; i < dim; ++i) out << ",stderr_" << i;
  }
  out << "\n";

  for (Eigen::Index row = 0; row < result.times.size(); ++row) {
    out << detail::fmt17(result.times[row]);
    const Eigen::VectorXd pops = measures::populations(result.states[row]);
    for (Eigen::Index i = 0; i < dim; ++i) out << "," << detail::fmt17(pops[i]);
    out << "," << detail::fmt17(measures::evaluate_measure(kind, result.states[row]));
    if (with_stderr) {
      for (Eigen::Index i = 0; i < dim; ++i) {
        out << "," << detail::fmt17(result.population_stderr[row][i]);
      }
    }
    out << "\n";
  }
}

/// Dependency-free SVG line plot of the populations versus time.
inline void write_svg(const std::filesystem::path& path, const RunResult& result) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");

  constexpr int kW = 960, kH = 600, kL = 70, kR = 200, kT = 48, kB = 56;
  const double plot_w = kW - kL - kR, plot_h = kH - kT - kB;
  const double t_max = result.times[result.times.size() - 1];
  const Eigen::Index dim = result.states.front().rows();
  static const char* kPalette[8] = {"#d62728", "#1f77b4", "#2c2c2c", "#17becf",
                                    "#9467bd", "#ff7f0e", "#2ca02c", "#8c564b"};

  auto xpix = [&](double t) { return kL + plot_w * (t / t_max); };
  auto ypix = [&](double p) { return kT + plot_h * (1.0 - std::clamp(p, 0.0, 1.0)); };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << kW << " " << kH
      << "\" font-family=\"sans-serif\" font-size=\"14\">\n";
  out << "<rect width=\"" << kW << "\" height=\"" << kH << "\" fill=\"white\"/>\n";
  out << "<text x=\"" << kL << "\" y=\"24\" font-size=\"17\">" << result.summary.scenario
      << " &#8212; populations vs dimensionless time</text>\n";

  // axes and ticks
  out << "<g stroke=\"#444\" stroke-width=\"1\">\n";
  out << "<line x1=\"" << kL << "\" y1=\"" << kT + plot_h << "\" x2=\"" << kL + plot_w
      << "\" y2=\"" << kT + plot_h << "\"/>\n";
  out << "<line x1=\"" << kL << "\" y1=\"" << kT << "\" x2=\"" << kL << "\" y2=\""
      << kT + plot_h << "\"/>\n</g>\n";
  for (int k = 0; k <= 5; ++k) {
    const double t = t_max * k / 5.0;
    const double p = k / 5.0;
    out << "<line x1=\"" << xpix(t) << "\" y1=\"" << kT + plot_h << "\" x2=\"" << xpix(t)
        << "\" y2=\"" << kT + plot_h + 5 << "\" stroke=\"#444\"/>\n";
    out << "<text x=\"" << xpix(t) << "\" y=\"" << kT + plot_h + 22
        << "\" text-anchor=\"middle\">" << detail::fmt17(t).substr(0, 4) << "</text>\n";
    out << "<line x1=\"" << kL - 5 << "\" y1=\"" << ypix(p) << "\" x2=\"" << kL
        << "\" y2=\"" << ypix(p) << "\" stroke=\"#444\"/>\n";
    out << "<text x=\"" << kL - 10 << "\" y=\"" << ypix(p) + 5
        << "\" text-anchor=\"end\">" << 0.2 * k << "</text>\n";
  }
  out << "<text x=\"" << kL + plot_w / 2 << "\" y=\"" << kH - 14
      << "\" text-anchor=\"middle\">t</text>\n";

  const int n = result.qubits;
  for (Eigen::Index s = 0; s < dim; ++s) {
    out << "<polyline fill=\"none\" stroke=\"" << kPalette[s % 8]
        << "\" stroke-width=\"1.6\" points=\"";
    for (Eigen::Index row = 0; row < result.times.size(); ++row) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.2f,%.2f ", xpix(result.times[row]),
                    ypix(result.states[row](s, s).real()));
      out << buf;
    }
    out << "\"/>\n";
    // legend
    const double ly = kT + 18.0 * static_cast<double>(s);
    out << "<rect x=\"" << kL + plot_w + 16 << "\" y=\"" << ly << "\" width=\"12\""
        << " height=\"12\" fill=\"" << kPalette[s % 8] << "\"/>\n";
    out << "<text x=\"" << kL + plot_w + 34 << "\" y=\"" << ly + 11 << "\">rho_" << s
        << " |" << qops::BasisLabel::from_index(s, n).str() << "&#x27E9;</text>\n";
  }
  out << "</svg>\n";
}

/// Execute a scenario and emit its files; returns the summary.
inline RunSummary run(const ScenarioSpec& spec, const RunOptions& opt) {
  const ScenarioSpec effective = apply_overrides(spec, opt);
  const RunResult result = execute(effective);

  std::filesystem::create_directories(opt.out_dir);
  const std::filesystem::path base =
      std::filesystem::path(opt.out_dir) / effective.name;
  if (opt.format != RunOptions::Format::Json) {
    write_csv(base.string() + ".csv", result);
  }
  if (opt.format != RunOptions::Format::Csv) {
    std::ofstream out(base.string() + ".summary.json");
    if (!out) throw std::runtime_error("cannot write summary for '" + effective.name + "'");
    out << summary_to_json(result.summary).dump(2) << "\n";
  }
  if (opt.plot) write_svg(base.string() + ".svg", result);
  return result.summary;
}

}  // namespace tqdyn::runner
