// Copyright 2026 The tqdyn Authors
// SPDX-License-Identifier: Apache-2.0
//
// Lindblad master-equation dynamics: the dissipator, the right-hand side,
// adaptive Dormand-Prince 5(4) integration onto a uniform output grid, and an
// independent vectorized-Liouvillian matrix-exponential propagator used as a
// cross-check oracle for constant Hamiltonians.

#pragma once

#include "tqdyn/qops.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace tqdyn::dynamics {

// Trajectory invariant bounds; integrate() aborts at 10x these.
inline constexpr double kTraceDriftTol = 1e-8;
inline constexpr double kHermDriftTol = 1e-10;
inline constexpr double kMinEigenTol = -1e-9;

/// Dimensionless per-qubit noise rates of the three standard channels.
struct NoiseRates {
  double gamma_down = 0.0;  // emission, collapse sigma^-
  double gamma_up = 0.0;    // absorption, collapse sigma^+
  double eta = 0.0;         // dephasing, collapse sigma^z

  bool any() const { return gamma_down > 0 || gamma_up > 0 || eta > 0; }
  void validate() const {
    if (gamma_down < 0 || gamma_up < 0 || eta < 0) {
      throw std::invalid_argument("NoiseRates: rates must be >= 0");
    }
  }
};

/// One collapse operator with its rate.
struct Channel {
  Mat op;
  double rate = 0.0;
};

/// Hamiltonian (constant matrix or reentrant time callback) plus collapse
/// channels on a shared Hilbert space.
class LindbladSystem {
 public:
  static LindbladSystem constant(Mat hamiltonian, std::vector<Channel> channels = {}) {
    LindbladSystem sys;
    sys.dim_ = hamiltonian.rows();
    sys.h_ = std::move(hamiltonian);
    sys.channels_ = std::move(channels);
    sys.check();
    return sys;
  }

  static LindbladSystem time_dependent(std::function<Mat(double)> hamiltonian,
                                       Eigen::Index dim,
                                       std::vector<Channel> channels = {}) {
    LindbladSystem sys;
    sys.dim_ = dim;
    sys.h_fn_ = std::move(hamiltonian);
    sys.channels_ = std::move(channels);
    sys.check();
    return sys;
  }

  Eigen::Index dim() const { return dim_; }
  bool is_time_dependent() const { return static_cast<bool>(h_fn_); }

  Mat hamiltonian(double t) const { return h_fn_ ? h_fn_(t) : h_; }

  const Mat& constant_hamiltonian() const {
    if (h_fn_) {
      throw std::invalid_argument("LindbladSystem: Hamiltonian is time-dependent");
    }
    return h_;
  }

  const std::vector<Channel>& channels() const { return channels_; }

 private:
  LindbladSystem() = default;

  void check() const {
    if (dim_ < 2) throw std::invalid_argument("LindbladSystem: dim must be >= 2");
    if (!h_fn_ && (h_.rows() != dim_ || h_.cols() != dim_)) {
      throw std::invalid_argument("LindbladSystem: Hamiltonian must be square");
    }
    for (const auto& ch : channels_) {
      if (ch.op.rows() != dim_ || ch.op.cols() != dim_) {
        throw std::invalid_argument("LindbladSystem: channel dimension mismatch");
      }
      if (ch.rate < 0) {
        throw std::invalid_argument("LindbladSystem: channel rate must be >= 0");
      }
    }
  }

  Eigen::Index dim_ = 0;
  Mat h_;
  std::function<Mat(double)> h_fn_;
  std::vector<Channel> channels_;
};

/// Emission/absorption/dephasing channels with the same rates on every qubit.
inline std::vector<Channel> qubit_noise_channels(const NoiseRates& rates, int n) {
  rates.validate();
  std::vector<Channel> out;
  for (int j = 1; j <= n; ++j) {
    if (rates.gamma_down > 0) {
      out.push_back({qops::sigma(qops::Pauli::Minus, j, n), rates.gamma_down});
    }
    if (rates.gamma_up > 0) {
      out.push_back({qops::sigma(qops::Pauli::Plus, j, n), rates.gamma_up});
    }
    if (rates.eta > 0) {
      out.push_back({qops::sigma(qops::Pauli::Z, j, n), rates.eta});
    }
  }
  return out;
}

/// Same, with independent rates per qubit (disorder realizations).
inline std::vector<Channel> qubit_noise_channels(const std::vector<NoiseRates>& per_qubit) {
  const int n = static_cast<int>(per_qubit.size());
  std::vector<Channel> out;
  for (int j = 1; j <= n; ++j) {
    const NoiseRates& r = per_qubit[j - 1];
    r.validate();
    if (r.gamma_down > 0) out.push_back({qops::sigma(qops::Pauli::Minus, j, n), r.gamma_down});
    if (r.gamma_up > 0) out.push_back({qops::sigma(qops::Pauli::Plus, j, n), r.gamma_up});
    if (r.eta > 0) out.push_back({qops::sigma(qops::Pauli::Z, j, n), r.eta});
  }
  return out;
}

/// D[L] rho = L rho L^dag - (L^dag L rho + rho L^dag L)/2.
inline Mat dissipator(const Mat& l, const Mat& rho) {
  if (l.rows() != rho.rows() || l.cols() != rho.cols() || rho.rows() != rho.cols()) {
    throw std::invalid_argument("dissipator: dimension mismatch");
  }
  const Mat ldl = l.adjoint() * l;
  return l * rho * l.adjoint() - 0.5 * (ldl * rho + rho * ldl);
}

namespace detail {

// RHS with lumped anticommutator: with A = H(t) - (i/2) sum_c rate L^dag L,
//   drho = -i (A rho - rho A^dag) + sum_c rate L rho L^dag.
// Temporaries are preallocated; safe to reuse across steps.
class RhsEvaluator {
 public:
  explicit RhsEvaluator(const LindbladSystem& sys)
      : sys_(&sys), k_(Mat::Zero(sys.dim(), sys.dim())) {
    const Eigen::Index d = sys.dim();
    for (const auto& ch : sys.channels()) {
      if (ch.rate == 0) continue;
      ops_.push_back({ch.op, ch.op.adjoint(), ch.rate});
      k_ += ch.rate * (ch.op.adjoint() * ch.op);
    }
    if (!sys.is_time_dependent()) {
      a_ = sys.constant_hamiltonian() - Complex(0, 0.5) * k_;
    } else {
      a_.resize(d, d);
    }
    t1_.resize(d, d);
    t2_.resize(d, d);
  }

  void operator()(double t, const Mat& rho, Mat& out) {
    ++evals_;
    if (sys_->is_time_dependent()) {
      a_ = sys_->hamiltonian(t) - Complex(0, 0.5) * k_;
    }
    t1_.noalias() = a_ * rho;
    t2_.noalias() = rho * a_.adjoint();
    out = Complex(0, -1) * (t1_ - t2_);
    for (const auto& c : ops_) {
      t1_.noalias() = c.l * rho;
      t2_.noalias() = t1_ * c.l_adj;
      out += c.rate * t2_;
    }
  }

  long evaluations() const { return evals_; }

 private:
  struct Op {
    Mat l, l_adj;
    double rate;
  };
  const LindbladSystem* sys_;
  std::vector<Op> ops_;
  Mat k_, a_, t1_, t2_;
  long evals_ = 0;
};

}  // namespace detail

/// Full master-equation right-hand side at time t.
inline Mat lindblad_rhs(double t, const Mat& rho, const LindbladSystem& sys) {
  if (rho.rows() != sys.dim() || rho.cols() != sys.dim()) {
    throw std::invalid_argument("lindblad_rhs: dimension mismatch");
  }
  detail::RhsEvaluator rhs(sys);
  Mat out(sys.dim(), sys.dim());
  rhs(t, rho, out);
  return out;
}

struct IntegratorConfig {
  double rel_tol = 1e-9;
  double abs_tol = 1e-9;
  double t_max = 10.0;
  int grid_points = 1001;

  void validate() const {
    if (rel_tol <= 0 || abs_tol <= 0) {
      throw std::invalid_argument("IntegratorConfig: tolerances must be > 0");
    }
    if (t_max <= 0) throw std::invalid_argument("IntegratorConfig: t_max must be > 0");
    if (grid_points < 2) {
      throw std::invalid_argument("IntegratorConfig: grid_points must be >= 2");
    }
  }
};

/// Worst-case state-quality numbers accumulated over the sampled grid.
struct TrajectoryDiagnostics {
  double max_trace_drift = 0.0;
  double max_hermiticity_error = 0.0;
  double min_eigenvalue = std::numeric_limits<double>::infinity();
  double max_excitation_drift = 0.0;
  long steps = 0;
  long rhs_evaluations = 0;

  void merge(const TrajectoryDiagnostics& o) {
    max_trace_drift = std::max(max_trace_drift, o.max_trace_drift);
    max_hermiticity_error = std::max(max_hermiticity_error, o.max_hermiticity_error);
    min_eigenvalue = std::min(min_eigenvalue, o.min_eigenvalue);
    max_excitation_drift = std::max(max_excitation_drift, o.max_excitation_drift);
    steps += o.steps;
    rhs_evaluations += o.rhs_evaluations;
  }
};

/// rho(t) sampled on a uniform grid.
struct Trajectory {
  Eigen::VectorXd times;
  std::vector<Mat> states;
  TrajectoryDiagnostics diagnostics;
};

class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& message, double t_reached, long long realization = -1)
      : std::runtime_error(message), t_reached_(t_reached), realization_(realization) {}

  double t_reached() const { return t_reached_; }
  long long realization() const { return realization_; }

 private:
  double t_reached_;
  long long realization_;
};

inline Eigen::VectorXd uniform_grid(double t_max, int points) {
  Eigen::VectorXd grid(points);
  for (int i = 0; i < points; ++i) {
    grid[i] = t_max * (static_cast<double>(i) / static_cast<double>(points - 1));
  }
  return grid;
}

namespace detail {

// Dormand-Prince 5(4) coefficients.
inline constexpr double kC[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
inline constexpr double kA21 = 1.0 / 5;
inline constexpr double kA31 = 3.0 / 40, kA32 = 9.0 / 40;
inline constexpr double kA41 = 44.0 / 45, kA42 = -56.0 / 15, kA43 = 32.0 / 9;
inline constexpr double kA51 = 19372.0 / 6561, kA52 = -25360.0 / 2187,
                        kA53 = 64448.0 / 6561, kA54 = -212.0 / 729;
inline constexpr double kA61 = 9017.0 / 3168, kA62 = -355.0 / 33,
                        kA63 = 46732.0 / 5247, kA64 = 49.0 / 176,
                        kA65 = -5103.0 / 18656;
inline constexpr double kB1 = 35.0 / 384, kB3 = 500.0 / 1113, kB4 = 125.0 / 192,
                        kB5 = -2187.0 / 6784, kB6 = 11.0 / 84;
// b - bhat, the embedded 4th-order error weights
inline constexpr double kE1 = 71.0 / 57600, kE3 = -71.0 / 16695, kE4 = 71.0 / 1920,
                        kE5 = -17253.0 / 339200, kE6 = 22.0 / 525, kE7 = -1.0 / 40;

inline double error_norm(const Mat& yerr, const Mat& y0, const Mat& y1,
                         double abs_tol, double rel_tol) {
  double sum = 0.0;
  for (Eigen::Index j = 0; j < yerr.cols(); ++j) {
    for (Eigen::Index i = 0; i < yerr.rows(); ++i) {
      const double scale =
          abs_tol + rel_tol * std::max(std::abs(y0(i, j)), std::abs(y1(i, j)));
      const double e = std::abs(yerr(i, j)) / scale;
      sum += e * e;
    }
  }
  return std::sqrt(sum / static_cast<double>(yerr.size()));
}

}  // namespace detail

/// Integrate the master equation from rho0, sampling states exactly on the
/// uniform output grid (accepted steps are shortened to land on grid points,
/// so sampled states carry no interpolation error). Trace renormalization is
/// never applied; drifts are diagnostics and abort the run at 10x the
/// documented bounds.
inline Trajectory integrate(const LindbladSystem& sys, const qops::DensityMatrix& rho0,
                            const IntegratorConfig& cfg) {
  using namespace detail;
  cfg.validate();
  if (rho0.dim() != sys.dim()) {
    throw std::invalid_argument("integrate: state/system dimension mismatch");
  }

  const Eigen::Index d = sys.dim();
  const int n_qubits = qops::qubit_count(d);
  const Mat number_op = qops::number_operator(n_qubits);

  Trajectory traj;
  traj.times = uniform_grid(cfg.t_max, cfg.grid_points);
  traj.states.reserve(cfg.grid_points);

  RhsEvaluator rhs(sys);
  Mat y = rho0.matrix();
  Mat k1(d, d), k2(d, d), k3(d, d), k4(d, d), k5(d, d), k6(d, d), k7(d, d);
  Mat ytmp(d, d), ynew(d, d), yerr(d, d);

  const double excitation0 = (number_op * y).trace().real();
  Eigen::SelfAdjointEigenSolver<Mat> es;

  auto record = [&](double t, const Mat& state) {
    traj.states.push_back(state);
    auto& diag = traj.diagnostics;
    const double trace_drift = std::abs(state.trace().real() - 1.0) +
                               std::abs(state.trace().imag());
    const double herm = qops::hermiticity_error(state);
    es.compute(0.5 * (state + state.adjoint()), Eigen::EigenvaluesOnly);
    const double min_eig = es.eigenvalues().minCoeff();
    const double exc_drift = std::abs((number_op * state).trace().real() - excitation0);
    diag.max_trace_drift = std::max(diag.max_trace_drift, trace_drift);
    diag.max_hermiticity_error = std::max(diag.max_hermiticity_error, herm);
    diag.min_eigenvalue = std::min(diag.min_eigenvalue, min_eig);
    diag.max_excitation_drift = std::max(diag.max_excitation_drift, exc_drift);
    if (trace_drift > 10.0 * kTraceDriftTol) {
      throw IntegrationError("integrate: trace drift " + std::to_string(trace_drift) +
                                 " at t=" + std::to_string(t),
                             t);
    }
    if (herm > 10.0 * kHermDriftTol) {
      throw IntegrationError("integrate: hermiticity error " + std::to_string(herm) +
                                 " at t=" + std::to_string(t),
                             t);
    }
    if (min_eig < 10.0 * kMinEigenTol) {
      throw IntegrationError("integrate: negative eigenvalue " + std::to_string(min_eig) +
                                 " at t=" + std::to_string(t),
                             t);
    }
  };

  double t = 0.0;
  record(t, y);
  rhs(t, y, k1);

  // initial step proposal
  const double dx = traj.times[1] - traj.times[0];
  double h_prop = dx;
  {
    const double d0 = std::max(qops::max_abs(y), 1e-8);
    const double d1 = qops::max_abs(k1);
    if (d1 > 1e-12) h_prop = std::min(dx, 0.01 * d0 / d1);
  }

  bool rejected_last = false;
  for (int gi = 1; gi < cfg.grid_points; ++gi) {
    const double t_target = traj.times[gi];
    while (t < t_target) {
      double h = h_prop;
      bool hits_target = false;
      const double remaining = t_target - t;
      if (h >= remaining * (1.0 - 1e-12)) {
        h = remaining;
        hits_target = true;
      }
      if (h < 1e-14 * std::max(1.0, std::abs(t))) {
        throw IntegrationError("integrate: step size underflow at t=" + std::to_string(t), t);
      }

      // DP5 stages (k1 holds f(t, y), first-same-as-last)
      ytmp = y + h * (kA21 * k1);
      rhs(t + kC[1] * h, ytmp, k2);
      ytmp = y + h * (kA31 * k1 + kA32 * k2);
      rhs(t + kC[2] * h, ytmp, k3);
      ytmp = y + h * (kA41 * k1 + kA42 * k2 + kA43 * k3);
      rhs(t + kC[3] * h, ytmp, k4);
      ytmp = y + h * (kA51 * k1 + kA52 * k2 + kA53 * k3 + kA54 * k4);
      rhs(t + kC[4] * h, ytmp, k5);
      ytmp = y + h * (kA61 * k1 + kA62 * k2 + kA63 * k3 + kA64 * k4 + kA65 * k5);
      rhs(t + h, ytmp, k6);
      ynew = y + h * (kB1 * k1 + kB3 * k3 + kB4 * k4 + kB5 * k5 + kB6 * k6);
      rhs(t + h, ynew, k7);
      yerr = h * (kE1 * k1 + kE3 * k3 + kE4 * k4 + kE5 * k5 + kE6 * k6 + kE7 * k7);

      const double err = error_norm(yerr, y, ynew, cfg.abs_tol, cfg.rel_tol);
      if (err <= 1.0) {
        ++traj.diagnostics.steps;
        t = hits_target ? t_target : t + h;
        y.swap(ynew);
        k1.swap(k7);
        const double facmax = rejected_last ? 1.0 : 5.0;
        const double fac =
            std::clamp(0.9 * std::pow(std::max(err, 1e-10), -0.2), 0.2, facmax);
        const double h_next = h * fac;
        // a step truncated to the grid should not shrink the proposal
        h_prop = hits_target ? std::max(h_prop, h_next) : h_next;
        rejected_last = false;
      } else {
        h_prop = h * std::clamp(0.9 * std::pow(err, -0.2), 0.2, 1.0);
        rejected_last = true;
      }
    }
    record(t, y);
  }
  traj.diagnostics.rhs_evaluations = rhs.evaluations();
  return traj;
}

/// Column-stacked Liouvillian: vec(drho/dt) = L vec(rho) with
/// L = -i (I x H - H^T x I) + sum_c rate (conj(L) x L - I x L^dag L / 2
//      - (L^dag L)^T x I / 2).
inline Mat liouvillian(const LindbladSystem& sys) {
  const Mat& h = sys.constant_hamiltonian();
  const Eigen::Index d = sys.dim();
  const Mat id = Mat::Identity(d, d);
  Mat l = Complex(0, -1) * (Eigen::kroneckerProduct(id, h).eval() -
                            Eigen::kroneckerProduct(h.transpose(), id).eval());
  for (const auto& ch : sys.channels()) {
    if (ch.rate == 0) continue;
    const Mat ldl = ch.op.adjoint() * ch.op;
    l += ch.rate *
         (Eigen::kroneckerProduct(ch.op.conjugate(), ch.op).eval() -
          0.5 * Eigen::kroneckerProduct(id, ldl).eval() -
          0.5 * Eigen::kroneckerProduct(ldl.transpose(), id).eval());
  }
  return l;
}

/// Independent oracle: rho(t_k) = unvec(exp(L t_k) vec(rho0)) by
/// scaling-and-squaring matrix exponentials; constant Hamiltonians only.
inline Trajectory propagate_expm(const LindbladSystem& sys, const qops::DensityMatrix& rho0,
                                 const Eigen::VectorXd& grid) {
  if (sys.is_time_dependent()) {
    throw std::invalid_argument("propagate_expm: Hamiltonian must be constant");
  }
  if (rho0.dim() != sys.dim()) {
    throw std::invalid_argument("propagate_expm: state/system dimension mismatch");
  }
  if (grid.size() < 1 || grid[0] != 0.0) {
    throw std::invalid_argument("propagate_expm: grid must start at t=0");
  }

  const Eigen::Index d = sys.dim();
  const Mat l = liouvillian(sys);

  Trajectory traj;
  traj.times = grid;
  traj.states.reserve(grid.size());
  traj.states.push_back(rho0.matrix());

  // uniform grids reuse a single exp(L dt)
  bool uniform = grid.size() > 1;
  const double dt0 = grid.size() > 1 ? grid[1] - grid[0] : 0.0;
  for (Eigen::Index i = 2; i < grid.size() && uniform; ++i) {
    uniform = std::abs((grid[i] - grid[i - 1]) - dt0) <= 1e-12 * std::max(1.0, grid[grid.size() - 1]);
  }

  Eigen::VectorXcd v = Eigen::Map<const Eigen::VectorXcd>(rho0.matrix().data(), d * d);
  if (uniform) {
    const Mat step = (l * dt0).exp();
    for (Eigen::Index i = 1; i < grid.size(); ++i) {
      v = step * v;
      traj.states.emplace_back(Eigen::Map<const Mat>(v.data(), d, d));
    }
  } else {
    for (Eigen::Index i = 1; i < grid.size(); ++i) {
      const Mat step = (l * (grid[i] - grid[i - 1])).exp();
      v = step * v;
      traj.states.emplace_back(Eigen::Map<const Mat>(v.data(), d, d));
    }
  }
  return traj;
}

}  // namespace tqdyn::dynamics
