// Copyright 2026 The tqdyn Authors
// SPDX-License-Identifier: Apache-2.0
//
// Observables and reports extracted from trajectories and ensemble means:
// populations, W-state fidelity, Wootters concurrence, purity, excitation
// number, gate-time/peak extraction, entanglement events and truth tables.

#pragma once

#include "tqdyn/disorder.hpp"

#include <algorithm>
#include <array>
#include <string>
#include <vector>

namespace tqdyn::measures {

/// Real diagonal of rho in basis order.
inline Eigen::VectorXd populations(const Mat& rho) {
  if (rho.rows() != rho.cols()) throw std::invalid_argument("populations: not square");
  return rho.diagonal().real();
}

/// F = <W| rho |W>; three-qubit states only.
inline double w_fidelity(const Mat& rho) {
  if (rho.rows() != 8 || rho.cols() != 8) {
    throw std::invalid_argument("w_fidelity: state must be three qubits (dim 8)");
  }
  const Eigen::VectorXcd w = qops::w_vector();
  return (w.adjoint() * rho * w)(0, 0).real();
}

/// Wootters concurrence of a two-qubit state: max(0, l1 - l2 - l3 - l4) with
/// l_i the descending square roots of the eigenvalues of
/// rho (y x y) conj(rho) (y x y).
inline double concurrence(const Mat& rho) {
  if (rho.rows() != 4 || rho.cols() != 4) {
    throw std::invalid_argument("concurrence: state must be two qubits (dim 4)");
  }
  const Mat yy = qops::sigma(qops::Pauli::Y, 1, 2) * qops::sigma(qops::Pauli::Y, 2, 2);
  const Mat r = rho * yy * rho.conjugate() * yy;
  Eigen::ComplexEigenSolver<Mat> es(r, false);
  std::array<double, 4> lambda{};
  for (int i = 0; i < 4; ++i) {
    lambda[i] = std::sqrt(std::max(0.0, es.eigenvalues()[i].real()));
  }
  std::sort(lambda.begin(), lambda.end(), std::greater<>());
  return std::max(0.0, lambda[0] - lambda[1] - lambda[2] - lambda[3]);
}

inline double purity(const Mat& rho) { return (rho * rho).trace().real(); }

/// trace(rho sum_j (sigma_j^z + I)/2).
inline double excitation_number(const Mat& rho) {
  const int n = qops::qubit_count(rho.rows());
  return (qops::number_operator(n) * rho).trace().real();
}

/// min/max ratio of the three W populations (|011>, |101>, |110>); the
/// population-equality criterion used alongside w_fidelity.
inline double population_balance(const Mat& rho) {
  if (rho.rows() != 8) {
    throw std::invalid_argument("population_balance: state must be three qubits");
  }
  const double a = rho(3, 3).real(), b = rho(5, 5).real(), c = rho(6, 6).real();
  const double hi = std::max({a, b, c});
  if (hi <= 0.0) return 0.0;
  return std::max(0.0, std::min({a, b, c})) / hi;
}

enum class MeasureKind { Concurrence, WFidelity, PopulationBalance };

inline std::string to_string(MeasureKind kind) {
  switch (kind) {
    case MeasureKind::Concurrence: return "concurrence";
    case MeasureKind::WFidelity: return "w_fidelity";
    case MeasureKind::PopulationBalance: return "population_balance";
  }
  return "?";
}

inline double evaluate_measure(MeasureKind kind, const Mat& rho) {
  switch (kind) {
    case MeasureKind::Concurrence: return concurrence(rho);
    case MeasureKind::WFidelity: return w_fidelity(rho);
    case MeasureKind::PopulationBalance: return population_balance(rho);
  }
  throw std::invalid_argument("evaluate_measure: unknown kind");
}

/// Default entanglement measure per register size: concurrence for two
/// qubits, W fidelity for three.
inline MeasureKind default_measure(int qubits) {
  return qubits == 2 ? MeasureKind::Concurrence : MeasureKind::WFidelity;
}

struct GateReport {
  double gate_time = 0.0;
  double peak_probability = 0.0;
  qops::BasisLabel target;
};

struct EntanglementReport {
  MeasureKind kind = MeasureKind::Concurrence;
  std::vector<double> times;
  std::vector<double> values;
};

namespace detail {

// Quadratic refinement of a grid argmax through its bracketing neighbours;
// falls back to the grid point at boundaries or degenerate curvature.
inline std::pair<double, double> refine_peak(const Eigen::VectorXd& times,
                                             const std::vector<double>& values,
                                             int i) {
  const int n = static_cast<int>(values.size());
  if (i <= 0 || i >= n - 1) return {times[i], values[i]};
  const double ym = values[i - 1], y0 = values[i], yp = values[i + 1];
  const double denom = ym - 2.0 * y0 + yp;
  if (!(denom < 0.0)) return {times[i], values[i]};
  const double delta = 0.5 * (ym - yp) / denom;
  const double dt = times[i + 1] - times[i];
  return {times[i] + delta * dt, y0 - 0.25 * (ym - yp) * delta};
}

// Peaks whose refined values agree within this window count as tied; the
// earliest one wins. The window absorbs the O(h^4) spread of the quadratic
// refinement across repeats of an oscillatory maximum.
inline constexpr double kPeakTieWindow = 1e-6;

// Local maxima of a sampled curve; plateaus dedup to their first sample,
// endpoints count when they top their single neighbour.
inline std::vector<int> local_maxima(const std::vector<double>& values) {
  const int n = static_cast<int>(values.size());
  std::vector<int> candidates;
  for (int i = 0; i < n; ++i) {
    const bool left_ok = i == 0 || values[i] >= values[i - 1];
    const bool right_ok = i == n - 1 || values[i] >= values[i + 1];
    const bool strict = (i > 0 && values[i] > values[i - 1]) ||
                        (i + 1 < n && values[i] > values[i + 1]);
    const bool plateau_repeat = i > 0 && values[i] == values[i - 1];
    if (left_ok && right_ok && strict && !plateau_repeat) candidates.push_back(i);
  }
  return candidates;
}

// Global maximum of a sampled curve with quadratic refinement and
// earliest-time tie-breaking; a curve with no local maxima (constant)
// reports its first sample.
inline std::pair<double, double> best_peak(const Eigen::VectorXd& times,
                                           const std::vector<double>& values) {
  const std::vector<int> candidates = local_maxima(values);
  if (candidates.empty()) return {times[0], values[0]};

  std::vector<std::pair<double, double>> refined;
  refined.reserve(candidates.size());
  double best = -std::numeric_limits<double>::infinity();
  for (int i : candidates) {
    refined.push_back(refine_peak(times, values, i));
    best = std::max(best, refined.back().second);
  }
  const double cutoff = best - kPeakTieWindow * std::max(1.0, std::abs(best));
  for (const auto& peak : refined) {
    if (peak.second >= cutoff) return peak;
  }
  return refined.front();
}

}  // namespace detail

/// Global population maximum of the target basis state, refined by local
/// quadratic interpolation; ties break to the earliest time.
inline GateReport find_gate_event(const Eigen::VectorXd& times,
                                  const std::vector<Mat>& states,
                                  const qops::BasisLabel& target) {
  if (states.empty() || times.size() != static_cast<Eigen::Index>(states.size())) {
    throw std::invalid_argument("find_gate_event: empty or mismatched grid");
  }
  const Eigen::Index idx = target.index();
  if (idx >= states.front().rows()) {
    throw std::invalid_argument("find_gate_event: target outside register");
  }
  std::vector<double> pop(states.size());
  for (size_t i = 0; i < states.size(); ++i) pop[i] = states[i](idx, idx).real();
  const auto [t, v] = detail::best_peak(times, pop);
  return GateReport{t, v, target};
}

inline GateReport find_gate_event(const dynamics::Trajectory& traj,
                                  const qops::BasisLabel& target) {
  return find_gate_event(traj.times, traj.states, target);
}

inline GateReport find_gate_event(const disorder::EnsembleResult& ens,
                                  const qops::BasisLabel& target) {
  return find_gate_event(ens.times, ens.mean_states, target);
}

struct EventOptions {
  double relative_threshold = 0.9;  // fraction of the global maximum
};

/// Local maxima of the selected measure exceeding the relative threshold,
/// sorted in time and quadratically refined. An identically-zero measure
/// yields an empty report.
inline EntanglementReport find_entanglement_events(const Eigen::VectorXd& times,
                                                   const std::vector<Mat>& states,
                                                   MeasureKind kind,
                                                   const EventOptions& opt = {}) {
  if (states.empty() || times.size() != static_cast<Eigen::Index>(states.size())) {
    throw std::invalid_argument("find_entanglement_events: empty or mismatched grid");
  }
  const int n = static_cast<int>(states.size());
  std::vector<double> m(n);
  for (int i = 0; i < n; ++i) m[i] = evaluate_measure(kind, states[i]);

  EntanglementReport report;
  report.kind = kind;
  const double global_max = *std::max_element(m.begin(), m.end());
  if (global_max <= 1e-12) return report;
  const double threshold = opt.relative_threshold * global_max;

  for (int i : detail::local_maxima(m)) {
    if (m[i] < threshold) continue;
    const auto [t, v] = detail::refine_peak(times, m, i);
    report.times.push_back(t);
    report.values.push_back(v);
  }
  return report;
}

inline EntanglementReport find_entanglement_events(const dynamics::Trajectory& traj,
                                                   MeasureKind kind,
                                                   const EventOptions& opt = {}) {
  return find_entanglement_events(traj.times, traj.states, kind, opt);
}

inline EntanglementReport find_entanglement_events(const disorder::EnsembleResult& ens,
                                                   MeasureKind kind,
                                                   const EventOptions& opt = {}) {
  return find_entanglement_events(ens.times, ens.mean_states, kind, opt);
}

/// Per-input behaviour of the evolution at the gate time: the most probable
/// output basis state and its probability. The table reports the empirical
/// permutation; comparisons against ideal gates are the caller's business.
struct TruthTable {
  int qubits = 0;
  std::vector<Eigen::Index> output;     // argmax output index per input index
  std::vector<double> probability;     // its population

  bool is_permutation() const {
    std::vector<bool> seen(output.size(), false);
    for (Eigen::Index o : output) {
      if (o < 0 || o >= static_cast<Eigen::Index>(output.size()) || seen[o]) return false;
      seen[o] = true;
    }
    return true;
  }
};

/// Integrate every basis state of a noiseless Hamiltonian to t_g and record
/// the dominant output. Ties break to the lowest basis index.
inline TruthTable truth_table(const Mat& hamiltonian, double t_g,
                              dynamics::IntegratorConfig cfg = {}) {
  if (hamiltonian.rows() != hamiltonian.cols()) {
    throw std::invalid_argument("truth_table: Hamiltonian must be square");
  }
  if (t_g <= 0) throw std::invalid_argument("truth_table: gate time must be > 0");
  const Eigen::Index dim = hamiltonian.rows();
  const int n = qops::qubit_count(dim);

  cfg.t_max = t_g;
  cfg.grid_points = std::max(2, static_cast<int>(std::ceil(t_g / 0.01)) + 1);

  TruthTable table;
  table.qubits = n;
  const auto sys = dynamics::LindbladSystem::constant(hamiltonian);
  for (Eigen::Index in = 0; in < dim; ++in) {
    const auto traj =
        dynamics::integrate(sys, qops::basis_state(qops::BasisLabel::from_index(in, n)), cfg);
    const Eigen::VectorXd pops = populations(traj.states.back());
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < dim; ++i) {
      if (pops[i] > pops[best]) best = i;
    }
    table.output.push_back(best);
    table.probability.push_back(pops[best]);
  }
  return table;
}

/// The two-qubit SWAP permutation on basis indices.
inline std::vector<Eigen::Index> swap_permutation() { return {0, 2, 1, 3}; }

/// CSWAP with qubit 1 as control, swapping qubits 2 and 3: |101> <-> |110>.
inline std::vector<Eigen::Index> cswap_permutation() { return {0, 1, 2, 3, 4, 6, 5, 7}; }

}  // namespace tqdyn::measures
