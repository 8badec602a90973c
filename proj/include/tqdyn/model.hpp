// Copyright 2026 The tqdyn Authors
// SPDX-License-Identifier: Apache-2.0
//
// Hamiltonian builders for capacitively coupled transmon qubits reduced to
// two levels: the lab-frame four-term interaction, the rotating-frame
// interaction picture, the excitation-conserving exchange (RWA) forms for two
// and three qubits, and the conversion from physical circuit parameters to
// the dimensionless model parameters.

#pragma once

#include "tqdyn/qops.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <variant>
#include <vector>

namespace tqdyn::model {

// ---------------------------------------------------------------------------
// Coupling models

/// g(t) = g_m.
struct Constant {
  double g_m = 0.0;
};

/// g(t) = g0 + g_m cos(omega_m t); the modulation frequency omega_m bridges
/// the qubit detuning ("parametric coupling").
struct Parametric {
  double g0 = 0.0;
  double g_m = 0.0;
  double omega_m = 0.0;
};

/// One static draw per realization, uniform on [lo, hi]; resolved to a
/// concrete value by the disorder sampler before any Hamiltonian is built.
struct UniformRandom {
  double lo = 0.0;
  double hi = 1.0;
};

using CouplingModel = std::variant<Constant, Parametric, UniformRandom>;

inline void validate(const CouplingModel& c) {
  if (const auto* k = std::get_if<Constant>(&c)) {
    if (k->g_m < 0) throw std::invalid_argument("CouplingModel: g_m must be >= 0");
  } else if (const auto* p = std::get_if<Parametric>(&c)) {
    if (p->omega_m <= 0) throw std::invalid_argument("CouplingModel: omega_m must be > 0");
  } else if (const auto* u = std::get_if<UniformRandom>(&c)) {
    if (u->lo > u->hi) throw std::invalid_argument("CouplingModel: lo > hi");
  }
}

inline bool is_random(const CouplingModel& c) {
  return std::holds_alternative<UniformRandom>(c);
}

/// Coupling strength at time t. UniformRandom has no value until sampled.
inline double coupling_value(const CouplingModel& c, double t) {
  if (const auto* k = std::get_if<Constant>(&c)) return k->g_m;
  if (const auto* p = std::get_if<Parametric>(&c)) {
    return p->g0 + p->g_m * std::cos(p->omega_m * t);
  }
  throw std::invalid_argument(
      "coupling_value: UniformRandom coupling must be sampled first");
}

// ---------------------------------------------------------------------------
// Parameter bundles

struct TwoQubitParams {
  double omega1 = 1.0;
  double omega2 = 1.0;
  CouplingModel coupling = Constant{1.0};
};

struct ThreeQubitParams {
  double omega1 = 1.0;
  double omega2 = 1.0;
  double omega3 = 1.0;
  CouplingModel g12 = Constant{1.0};
  CouplingModel g23 = Constant{1.0};
  CouplingModel g13 = Constant{0.5};
};

// ---------------------------------------------------------------------------
// Hamiltonians

/// H0 = sum_j (omega_j / 2) sigma_j^z.
inline Mat build_h0(const std::vector<double>& omegas) {
  const int n = static_cast<int>(omegas.size());
  if (n < 1 || n > 3) {
    throw std::invalid_argument("build_h0: need 1..3 qubit frequencies");
  }
  const Eigen::Index dim = Eigen::Index{1} << n;
  Mat h = Mat::Zero(dim, dim);
  for (int j = 1; j <= n; ++j) {
    if (omegas[j - 1] <= 0) throw std::invalid_argument("build_h0: omega must be > 0");
    h += 0.5 * omegas[j - 1] * qops::sigma(qops::Pauli::Z, j, n);
  }
  return h;
}

/// Lab-frame interaction g (x1 x2 + z1 x2 + x1 z2 + z1 z2) for two qubits.
inline Mat build_hint_lab(double g) {
  using qops::Pauli;
  const Mat x1 = qops::sigma(Pauli::X, 1, 2), x2 = qops::sigma(Pauli::X, 2, 2);
  const Mat z1 = qops::sigma(Pauli::Z, 1, 2), z2 = qops::sigma(Pauli::Z, 2, 2);
  return g * (x1 * x2 + z1 * x2 + x1 * z2 + z1 * z2);
}

/// Rotating-frame (interaction picture) Hamiltonian at time t:
///   g(t) [ s1+ s2- e^{+i(w1-w2)t} + s1- s2+ e^{-i(w1-w2)t}
///        + s1+ s2+ e^{+i(w1+w2)t} + s1- s2- e^{-i(w1+w2)t} ].
/// Reentrant; evaluated at integrator query times.
inline Mat build_hrot(double t, const TwoQubitParams& p) {
  using qops::Pauli;
  const double g = coupling_value(p.coupling, t);
  const double diff = p.omega1 - p.omega2;
  const double sum = p.omega1 + p.omega2;
  const Mat flip = qops::sigma(Pauli::Plus, 1, 2) * qops::sigma(Pauli::Minus, 2, 2);
  const Mat raise_both = qops::sigma(Pauli::Plus, 1, 2) * qops::sigma(Pauli::Plus, 2, 2);
  const Complex ed = std::polar(1.0, diff * t);
  const Complex es = std::polar(1.0, sum * t);
  Mat h = flip * ed + raise_both * es;
  h += h.adjoint().eval();
  return g * h;
}

/// Two-qubit exchange Hamiltonian H0 + g (s1+ s2- + s1- s2+); conserves the
/// total excitation number.
inline Mat build_rwa_two(const TwoQubitParams& p, double g_value) {
  using qops::Pauli;
  Mat flip = qops::sigma(Pauli::Plus, 1, 2) * qops::sigma(Pauli::Minus, 2, 2);
  flip += flip.adjoint().eval();
  return build_h0({p.omega1, p.omega2}) + g_value * flip;
}

/// Three-qubit exchange Hamiltonian with pair couplings (g12, g23, g13).
inline Mat build_three(const ThreeQubitParams& p, const std::array<double, 3>& g) {
  using qops::Pauli;
  auto exchange = [](int a, int b) {
    Mat m = qops::sigma(Pauli::Plus, a, 3) * qops::sigma(Pauli::Minus, b, 3);
    m += m.adjoint().eval();
    return m;
  };
  return build_h0({p.omega1, p.omega2, p.omega3}) + g[0] * exchange(1, 2) +
         g[1] * exchange(2, 3) + g[2] * exchange(1, 3);
}

// ---------------------------------------------------------------------------
// Physical circuit conversion

/// SI inputs for the dimensionless conversion. Josephson junctions may be
/// given either as inductances (henries) or as energies (joules); exactly one
/// of the two vectors must be filled.
struct PhysicalCircuitParams {
  std::vector<double> qubit_capacitance;        // farads, one per qubit
  Eigen::MatrixXd coupling_capacitance;         // farads, symmetric, diagonal ignored
  std::vector<double> josephson_inductance;     // henries
  std::vector<double> josephson_energy;         // joules
  double reference_omega = 0.0;                 // omega_c = E_c/hbar, rad/s
  double flux_quantum = 2.067833848e-15;        // Wb
  double electron_charge = 1.602176634e-19;     // C
  double hbar = 1.054571817e-34;                // J s
};

struct DimensionlessParams {
  std::vector<double> omegas;  // qubit frequencies, units of omega_c
  Eigen::MatrixXd g;           // pair couplings, dimensionless, symmetric
};

/// omega_i = (sqrt(8 E_C E_J) - E_C) / (hbar omega_c).
inline double qubit_frequency(double e_c, double e_j, double hbar_omega_c) {
  if (e_c <= 0 || e_j <= 0 || hbar_omega_c <= 0) {
    throw std::invalid_argument("qubit_frequency: energies must be > 0");
  }
  return (std::sqrt(8.0 * e_c * e_j) - e_c) / hbar_omega_c;
}

/// g_ij = C_ij sqrt(omega_i omega_j) / (2 sqrt(C_i C_j)); omegas dimensionless.
inline double coupling_strength(double c_ij, double c_i, double c_j,
                                double omega_i, double omega_j) {
  if (c_i <= 0 || c_j <= 0) {
    throw std::invalid_argument("coupling_strength: qubit capacitances must be > 0");
  }
  return c_ij * std::sqrt(omega_i * omega_j) / (2.0 * std::sqrt(c_i * c_j));
}

inline DimensionlessParams dimensionless_from_circuit(const PhysicalCircuitParams& p) {
  const int n = static_cast<int>(p.qubit_capacitance.size());
  if (n < 1) throw std::invalid_argument("circuit: need at least one qubit");
  const bool from_l = !p.josephson_inductance.empty();
  if (from_l ? p.josephson_inductance.size() != static_cast<size_t>(n)
             : p.josephson_energy.size() != static_cast<size_t>(n)) {
    throw std::invalid_argument("circuit: one Josephson parameter per qubit");
  }
  if (p.reference_omega <= 0) {
    throw std::invalid_argument("circuit: reference_omega must be > 0");
  }
  if (p.coupling_capacitance.rows() != n || p.coupling_capacitance.cols() != n) {
    throw std::invalid_argument("circuit: coupling capacitance must be n x n");
  }

  DimensionlessParams out;
  out.omegas.resize(n);
  for (int i = 0; i < n; ++i) {
    const double c = p.qubit_capacitance[i];
    if (c <= 0) throw std::invalid_argument("circuit: capacitance must be > 0");
    const double e_c = p.electron_charge * p.electron_charge / (2.0 * c);
    double e_j;
    if (from_l) {
      const double l = p.josephson_inductance[i];
      if (l <= 0) throw std::invalid_argument("circuit: inductance must be > 0");
      const double phi = p.flux_quantum / (2.0 * M_PI);
      e_j = phi * phi / l;
    } else {
      e_j = p.josephson_energy[i];
    }
    out.omegas[i] = qubit_frequency(e_c, e_j, p.hbar * p.reference_omega);
  }

  out.g = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      out.g(i, j) = coupling_strength(p.coupling_capacitance(i, j),
                                      p.qubit_capacitance[i], p.qubit_capacitance[j],
                                      out.omegas[i], out.omegas[j]);
      out.g(j, i) = out.g(i, j);
    }
  }
  return out;
}

}  // namespace tqdyn::model
