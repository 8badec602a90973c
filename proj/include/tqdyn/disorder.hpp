// Copyright 2026 The tqdyn Authors
// SPDX-License-Identifier: Apache-2.0
//
// Classical-randomness disorder ensembles: per-realization parameter draws
// from a counter-based RNG (Philox4x32-10), independent trajectories, and a
// deterministic mean/standard-error reduction whose result is independent of
// the degree of parallelism.

#pragma once

#include "tqdyn/dynamics.hpp"

#include <array>
#include <atomic>
#include <cstdint>
#include <functional>
#include <optional>
#include <thread>
#include <vector>

namespace tqdyn::disorder {

inline constexpr std::uint64_t kDefaultMasterSeed = 20260810;

// Draw-slot layout inside one realization's counter stream. The coupling
// draw is shared (one value scales all base couplings); the noise channels
// draw independently per qubit.
inline constexpr std::uint32_t kSlotCoupling = 0;
inline constexpr std::uint32_t kSlotEta = 8;
inline constexpr std::uint32_t kSlotGammaDown = 16;
inline constexpr std::uint32_t kSlotGammaUp = 24;

/// Philox4x32-10 (Salmon et al., Random123). Stateless: each (key, counter)
/// pair maps to an independent 128-bit block, so realization k and draw slot
/// s are addressable in isolation.
class Philox4x32 {
 public:
  explicit Philox4x32(std::uint64_t key) : key_(key) {}

  std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> counter) const {
    std::uint32_t k0 = static_cast<std::uint32_t>(key_);
    std::uint32_t k1 = static_cast<std::uint32_t>(key_ >> 32);
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        k0 += 0x9E3779B9u;
        k1 += 0xBB67AE85u;
      }
      const std::uint64_t p0 = std::uint64_t{0xD2511F53u} * counter[0];
      const std::uint64_t p1 = std::uint64_t{0xCD9E8D57u} * counter[2];
      counter = {static_cast<std::uint32_t>(p1 >> 32) ^ counter[1] ^ k0,
                 static_cast<std::uint32_t>(p1),
                 static_cast<std::uint32_t>(p0 >> 32) ^ counter[3] ^ k1,
                 static_cast<std::uint32_t>(p0)};
    }
    return counter;
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01(std::uint64_t realization, std::uint32_t slot) const {
    const auto out = block({static_cast<std::uint32_t>(realization),
                            static_cast<std::uint32_t>(realization >> 32), slot, 0});
    const std::uint64_t bits = (std::uint64_t{out[0]} << 32) | out[1];
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
  }

 private:
  std::uint64_t key_;
};

struct Uniform {
  double lo = 0.0;
  double hi = 1.0;

  void validate() const {
    if (lo > hi) throw std::invalid_argument("Uniform: lo > hi");
  }
  double map(double u) const { return lo + u * (hi - lo); }
};

/// Which scenario parameters are randomized, each uniform on [lo, hi].
/// One static draw per realization; the coupling draw is a single shared
/// value scaling the base couplings, noise rates draw per qubit.
struct RandomSpec {
  std::optional<Uniform> coupling;
  std::optional<Uniform> eta;
  std::optional<Uniform> gamma_down;
  std::optional<Uniform> gamma_up;

  bool empty() const { return !coupling && !eta && !gamma_down && !gamma_up; }
  void validate() const {
    for (const auto& u : {coupling, eta, gamma_down, gamma_up}) {
      if (u) u->validate();
    }
  }
};

struct EnsembleConfig {
  int realizations = 1;
  std::uint64_t master_seed = kDefaultMasterSeed;
  int threads = 0;  // 0 = hardware concurrency; never affects results

  void validate() const {
    if (realizations < 1) {
      throw std::invalid_argument("EnsembleConfig: realizations must be >= 1");
    }
    if (threads < 0) throw std::invalid_argument("EnsembleConfig: threads must be >= 0");
  }
};

/// Concrete parameters of one realization.
struct Realization {
  std::vector<double> couplings;                 // resolved values
  std::vector<dynamics::NoiseRates> qubit_noise;  // one entry per qubit
};

/// Draw realization k. Non-randomized parameters pass through; the coupling
/// draw scales every base coupling (fixed ratios), noise rates are drawn
/// independently per qubit and channel.
inline Realization sample_realization(const RandomSpec& spec,
                                      const std::vector<double>& base_couplings,
                                      const dynamics::NoiseRates& base_noise, int qubits,
                                      std::uint64_t k, const EnsembleConfig& cfg) {
  spec.validate();
  base_noise.validate();
  const Philox4x32 rng(cfg.master_seed);

  Realization real;
  real.couplings = base_couplings;
  if (spec.coupling) {
    const double u = spec.coupling->map(rng.uniform01(k, kSlotCoupling));
    for (double& g : real.couplings) g *= u;
  }
  real.qubit_noise.assign(qubits, base_noise);
  for (int j = 0; j < qubits; ++j) {
    if (spec.eta) {
      real.qubit_noise[j].eta = spec.eta->map(rng.uniform01(k, kSlotEta + j));
    }
    if (spec.gamma_down) {
      real.qubit_noise[j].gamma_down =
          spec.gamma_down->map(rng.uniform01(k, kSlotGammaDown + j));
    }
    if (spec.gamma_up) {
      real.qubit_noise[j].gamma_up =
          spec.gamma_up->map(rng.uniform01(k, kSlotGammaUp + j));
    }
  }
  return real;
}

/// Everything run_ensemble needs to integrate one realization.
struct EnsembleProblem {
  std::vector<double> base_couplings;
  dynamics::NoiseRates base_noise;
  int qubits = 2;
  RandomSpec random;
  qops::DensityMatrix initial;
  dynamics::IntegratorConfig integrator;
  std::function<dynamics::LindbladSystem(const Realization&)> make_system;
};

/// Mean state, per-population standard error and aggregated diagnostics.
struct EnsembleResult {
  Eigen::VectorXd times;
  std::vector<Mat> mean_states;
  std::vector<Eigen::VectorXd> population_stderr;  // one vector per grid point
  int realizations = 0;
  dynamics::TrajectoryDiagnostics diagnostics;
};

namespace detail {

// Fixed reduction block: realizations [b*B, (b+1)*B) accumulate sequentially
// into one partial, partials combine in block order. The summation tree is a
// function of N alone, so results are bit-identical for any thread count.
inline constexpr int kReductionBlock = 8;

struct BlockPartial {
  std::vector<Mat> state_sum;
  std::vector<Eigen::VectorXd> pop_sum;
  std::vector<Eigen::VectorXd> pop_sq_sum;
  dynamics::TrajectoryDiagnostics diag;
  bool failed = false;
  bool integration_failure = false;
  long long failed_k = -1;
  double failed_t = 0.0;
  std::string error;
};

}  // namespace detail

/// Run the disorder ensemble. The reduction is deterministic and independent
/// of execution order; any realization failure is reported with its index
/// (the smallest failing index wins).
inline EnsembleResult run_ensemble(const EnsembleProblem& problem,
                                   const EnsembleConfig& cfg) {
  cfg.validate();
  problem.random.validate();
  problem.integrator.validate();
  if (!problem.make_system) {
    throw std::invalid_argument("run_ensemble: make_system is required");
  }

  const int n_real = cfg.realizations;
  const int points = problem.integrator.grid_points;
  const Eigen::Index dim = problem.initial.dim();
  const int n_blocks = (n_real + detail::kReductionBlock - 1) / detail::kReductionBlock;

  std::vector<detail::BlockPartial> partials(n_blocks);

  auto run_block = [&](int b) {
    auto& part = partials[b];
    part.state_sum.assign(points, Mat::Zero(dim, dim));
    part.pop_sum.assign(points, Eigen::VectorXd::Zero(dim));
    part.pop_sq_sum.assign(points, Eigen::VectorXd::Zero(dim));
    const int k_begin = b * detail::kReductionBlock;
    const int k_end = std::min(n_real, k_begin + detail::kReductionBlock);
    for (int k = k_begin; k < k_end; ++k) {
      try {
        const Realization real =
            sample_realization(problem.random, problem.base_couplings, problem.base_noise,
                               problem.qubits, static_cast<std::uint64_t>(k), cfg);
        const auto traj = dynamics::integrate(problem.make_system(real), problem.initial,
                                              problem.integrator);
        for (int i = 0; i < points; ++i) {
          part.state_sum[i] += traj.states[i];
          const Eigen::VectorXd pops = traj.states[i].diagonal().real();
          part.pop_sum[i] += pops;
          part.pop_sq_sum[i] += pops.cwiseProduct(pops);
        }
        part.diag.merge(traj.diagnostics);
      } catch (const dynamics::IntegrationError& e) {
        part.failed = true;
        part.integration_failure = true;
        part.failed_k = k;
        part.failed_t = e.t_reached();
        part.error = e.what();
        return;  // abandon the rest of this block
      } catch (const std::exception& e) {
        part.failed = true;
        part.failed_k = k;
        part.error = e.what();
        return;
      }
    }
  };

  int threads = cfg.threads > 0 ? cfg.threads
                                : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::clamp(threads, 1, n_blocks);
  if (threads == 1) {
    for (int b = 0; b < n_blocks; ++b) run_block(b);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int w = 0; w < threads; ++w) {
      pool.emplace_back([&] {
        for (int b = next.fetch_add(1); b < n_blocks; b = next.fetch_add(1)) run_block(b);
      });
    }
    for (auto& th : pool) th.join();
  }

  for (const auto& part : partials) {
    if (part.failed) {
      const std::string msg =
          "realization " + std::to_string(part.failed_k) + ": " + part.error;
      if (part.integration_failure) {
        throw dynamics::IntegrationError(msg, part.failed_t, part.failed_k);
      }
      throw std::runtime_error(msg);
    }
  }

  EnsembleResult result;
  result.times = dynamics::uniform_grid(problem.integrator.t_max, points);
  result.realizations = n_real;
  result.mean_states.assign(points, Mat::Zero(dim, dim));
  result.population_stderr.assign(points, Eigen::VectorXd::Zero(dim));

  std::vector<Eigen::VectorXd> pop_sum(points, Eigen::VectorXd::Zero(dim));
  std::vector<Eigen::VectorXd> pop_sq(points, Eigen::VectorXd::Zero(dim));
  for (int b = 0; b < n_blocks; ++b) {
    for (int i = 0; i < points; ++i) {
      result.mean_states[i] += partials[b].state_sum[i];
      pop_sum[i] += partials[b].pop_sum[i];
      pop_sq[i] += partials[b].pop_sq_sum[i];
    }
    result.diagnostics.merge(partials[b].diag);
  }

  const double n = static_cast<double>(n_real);
  for (int i = 0; i < points; ++i) {
    result.mean_states[i] /= n;
    if (n_real > 1) {
      const Eigen::VectorXd mean = pop_sum[i] / n;
      const Eigen::VectorXd var =
          (pop_sq[i] - n * mean.cwiseProduct(mean)) / (n - 1.0);
      result.population_stderr[i] = (var.cwiseMax(0.0) / n).cwiseSqrt();
    }
  }
  return result;
}

}  // namespace tqdyn::disorder
