// Copyright 2026 The tqdyn Authors
// SPDX-License-Identifier: Apache-2.0

#include "tqdyn/dynamics.hpp"

#include "tqdyn/model.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace tqdyn;
using namespace tqdyn::dynamics;
using qops::BasisLabel;
using qops::basis_state;
using Catch::Approx;

namespace {

Mat random_matrix(Eigen::Index d, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Mat m(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) m(i, j) = Complex(u(rng), u(rng));
  return m;
}

Mat random_density(Eigen::Index d, std::mt19937_64& rng) {
  const Mat a = random_matrix(d, rng);
  Mat rho = a * a.adjoint();
  rho /= rho.trace();
  return rho;
}

qops::DensityMatrix hermitized(const Mat& rho) {
  return qops::DensityMatrix(0.5 * (rho + rho.adjoint().eval()));
}

}  // namespace

TEST_CASE("dissipator evaluates the standard super-operator") {
  const Mat sm = qops::pauli(qops::Pauli::Minus);
  Mat excited = Mat::Zero(2, 2);
  excited(1, 1) = 1.0;
  Mat expect = Mat::Zero(2, 2);
  expect(0, 0) = 1.0;
  expect(1, 1) = -1.0;
  CHECK(qops::max_abs(dissipator(sm, excited) - expect) == 0.0);

  const Mat z = qops::pauli(qops::Pauli::Z);
  Mat diag = Mat::Zero(2, 2);
  diag(0, 0) = 0.3;
  diag(1, 1) = 0.7;
  CHECK(qops::max_abs(dissipator(z, diag)) == 0.0);

  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const Mat l = random_matrix(4, rng);
    const Mat rho = random_density(4, rng);
    const Mat d = dissipator(l, rho);
    CHECK(std::abs(d.trace()) < 1e-12);
    CHECK(qops::hermiticity_error(d) < 1e-12);
  }

  CHECK_THROWS_AS(dissipator(Mat::Identity(2, 2), Mat::Identity(4, 4)),
                  std::invalid_argument);
}

TEST_CASE("lindblad_rhs agrees with the explicit dissipator sum") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    Mat h = random_matrix(4, rng);
    h = 0.5 * (h + h.adjoint().eval());
    std::vector<Channel> channels;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int c = 0; c < 3; ++c) channels.push_back({random_matrix(4, rng), u(rng)});
    const auto sys = LindbladSystem::constant(h, channels);

    const Mat rho = random_density(4, rng);
    const Mat got = lindblad_rhs(0.0, rho, sys);
    Mat explicit_sum = Complex(0, -1) * (h * rho - rho * h);
    for (const auto& ch : channels) explicit_sum += ch.rate * dissipator(ch.op, rho);
    CHECK(qops::max_abs(got - explicit_sum) < 1e-13);
    CHECK(std::abs(got.trace()) < 1e-12);
    CHECK(qops::hermiticity_error(got) < 1e-12);
  }
}

TEST_CASE("lindblad_rhs special cases") {
  // commuting diagonal H and rho with zero rates
  Mat h = Mat::Zero(2, 2);
  h(0, 0) = 0.5;
  h(1, 1) = 1.5;
  Mat rho = Mat::Zero(2, 2);
  rho(0, 0) = 0.25;
  rho(1, 1) = 0.75;
  CHECK(qops::max_abs(lindblad_rhs(0.0, rho, LindbladSystem::constant(h))) == 0.0);

  // pure emission from |1><1|: d rho_00/dt = +1
  Mat excited = Mat::Zero(2, 2);
  excited(1, 1) = 1.0;
  const auto sys = LindbladSystem::constant(
      Mat::Zero(2, 2), {{qops::pauli(qops::Pauli::Minus), 1.0}});
  const Mat d = lindblad_rhs(0.0, excited, sys);
  CHECK(d(0, 0).real() == Approx(1.0).margin(1e-15));
  CHECK(d(1, 1).real() == Approx(-1.0).margin(1e-15));
}

TEST_CASE("noise channel construction") {
  NoiseRates r{0.1, 0.0, 0.3};
  const auto ch = qubit_noise_channels(r, 2);
  REQUIRE(ch.size() == 4);  // emission + dephasing per qubit
  CHECK(ch[0].rate == 0.1);
  CHECK(ch[1].rate == 0.3);

  const auto per_qubit =
      qubit_noise_channels(std::vector<NoiseRates>{{0.5, 0, 0}, {0, 0.25, 0}});
  REQUIRE(per_qubit.size() == 2);
  CHECK(per_qubit[0].rate == 0.5);
  CHECK(per_qubit[1].rate == 0.25);

  CHECK_THROWS_AS(qubit_noise_channels(NoiseRates{-1, 0, 0}, 2), std::invalid_argument);
}

TEST_CASE("free evolution leaves the state untouched") {
  const auto sys = LindbladSystem::constant(Mat::Zero(4, 4));
  IntegratorConfig cfg;
  cfg.t_max = 5.0;
  cfg.grid_points = 51;
  const auto traj = integrate(sys, basis_state(BasisLabel::from_string("01")), cfg);
  REQUIRE(traj.states.size() == 51);
  for (const auto& s : traj.states) {
    CHECK(qops::max_abs(s - basis_state(BasisLabel::from_string("01")).matrix()) == 0.0);
  }
}

TEST_CASE("ideal exchange dynamics reproduce sin^2 transfer") {
  model::TwoQubitParams p{1.0, 1.0, model::Constant{1.0}};
  const auto sys = LindbladSystem::constant(model::build_rwa_two(p, 1.0));
  const auto rho0 = basis_state(BasisLabel::from_string("01"));

  SECTION("gate and entanglement times") {
    IntegratorConfig cfg;
    cfg.t_max = M_PI / 2;
    cfg.grid_points = 3;  // grid {0, pi/4, pi/2}
    const auto traj = integrate(sys, rho0, cfg);
    CHECK(traj.states[2](2, 2).real() == Approx(1.0).margin(1e-6));
    CHECK(traj.states[1](1, 1).real() == Approx(0.5).margin(1e-6));
    CHECK(traj.states[1](2, 2).real() == Approx(0.5).margin(1e-6));
  }

  SECTION("whole curve against the closed form") {
    IntegratorConfig cfg;  // default [0, 10] x 1001
    const auto traj = integrate(sys, rho0, cfg);
    double worst = 0.0;
    for (int i = 0; i < cfg.grid_points; ++i) {
      const double t = traj.times[i];
      const double s2 = std::sin(t) * std::sin(t);
      worst = std::max(worst, std::abs(traj.states[i](2, 2).real() - s2));
      worst = std::max(worst, std::abs(traj.states[i](1, 1).real() - (1.0 - s2)));
    }
    CHECK(worst < 1e-8);
    CHECK(traj.diagnostics.max_excitation_drift < 1e-10);
    CHECK(traj.diagnostics.max_trace_drift < 1e-8);
  }
}

TEST_CASE("amplitude damping matches the closed-form decay") {
  const auto sys = LindbladSystem::constant(
      Mat::Zero(2, 2), {{qops::pauli(qops::Pauli::Minus), 1.0}});
  Mat excited = Mat::Zero(2, 2);
  excited(1, 1) = 1.0;
  const qops::DensityMatrix rho0(excited);

  IntegratorConfig cfg;
  cfg.t_max = 5.0;
  cfg.grid_points = 501;
  const auto rk = integrate(sys, rho0, cfg);
  const auto em = propagate_expm(sys, rho0, rk.times);
  for (int i = 0; i < cfg.grid_points; ++i) {
    const double expect = std::exp(-rk.times[i]);
    CHECK(std::abs(rk.states[i](1, 1).real() - expect) < 1e-10);
    CHECK(std::abs(em.states[i](1, 1).real() - expect) < 1e-10);
  }
}

TEST_CASE("matrix-exponential oracle agrees with the integrator") {
  model::TwoQubitParams p{1.0, 1.0, model::Constant{1.0}};
  const auto sys = LindbladSystem::constant(
      model::build_rwa_two(p, 1.0),
      qubit_noise_channels(NoiseRates{0.2, 0.1, 0.15}, 2));
  const auto rho0 = basis_state(BasisLabel::from_string("01"));

  IntegratorConfig cfg;
  const auto rk = integrate(sys, rho0, cfg);
  const auto em = propagate_expm(sys, rho0, rk.times);
  CHECK(qops::max_abs(em.states[0] - rho0.matrix()) == 0.0);
  double worst = 0.0;
  for (size_t i = 0; i < rk.states.size(); ++i) {
    worst = std::max(worst, qops::max_abs(rk.states[i] - em.states[i]));
  }
  CHECK(worst < 1e-8);

  CHECK(rk.diagnostics.max_trace_drift < 1e-8);
  CHECK(rk.diagnostics.max_hermiticity_error < 1e-10);
  CHECK(rk.diagnostics.min_eigenvalue > -1e-9);

  const auto tdep = LindbladSystem::time_dependent(
      [&](double t) { return model::build_hrot(t, p); }, 4);
  CHECK_THROWS_AS(propagate_expm(tdep, rho0, rk.times), std::invalid_argument);
}

TEST_CASE("halving tolerances leaves reported populations unchanged") {
  model::TwoQubitParams p{1.0, 1.0, model::Constant{1.0}};
  const auto sys = LindbladSystem::constant(model::build_rwa_two(p, 1.0));
  const auto rho0 = basis_state(BasisLabel::from_string("01"));

  IntegratorConfig cfg;
  const auto a = integrate(sys, rho0, cfg);
  cfg.rel_tol /= 2;
  cfg.abs_tol /= 2;
  const auto b = integrate(sys, rho0, cfg);
  double worst = 0.0;
  for (size_t i = 0; i < a.states.size(); ++i) {
    worst = std::max(
        worst, (a.states[i].diagonal() - b.states[i].diagonal()).cwiseAbs().maxCoeff());
  }
  CHECK(worst < 1e-7);
}

TEST_CASE("transfer out of |01> starts quadratically") {
  model::TwoQubitParams p{1.0, 1.0, model::Constant{1.0}};
  const auto sys = LindbladSystem::constant(model::build_rwa_two(p, 1.0));
  const Mat rhs0 = lindblad_rhs(0.0, basis_state(BasisLabel::from_string("01")).matrix(), sys);
  CHECK(std::abs(rhs0(2, 2)) < 1e-15);  // d rho_33 / dt = 0 at t = 0

  IntegratorConfig cfg;
  cfg.t_max = 0.1;
  cfg.grid_points = 11;
  const auto traj = integrate(sys, basis_state(BasisLabel::from_string("01")), cfg);
  const double s2 = std::sin(0.1) * std::sin(0.1);
  CHECK(traj.states.back()(2, 2).real() == Approx(s2).margin(1e-9));
  CHECK(traj.states.back()(2, 2).real() > 0.0);
}

TEST_CASE("rotating-frame dynamics approach the exchange model as frequencies grow") {
  // Parametric bridge at omega_m = |w1 - w2| leaves an effective resonant
  // exchange of strength g_m / 2; residual corrections shrink ~ 1/(w1+w2).
  auto deviation = [](double w1, double w2) {
    model::TwoQubitParams rot{w1, w2, model::Parametric{0.0, 1.0, std::abs(w1 - w2)}};
    const auto sys = LindbladSystem::time_dependent(
        [rot](double t) { return model::build_hrot(t, rot); }, 4);
    IntegratorConfig cfg;
    cfg.t_max = M_PI;
    cfg.grid_points = 101;
    const auto traj = integrate(sys, basis_state(BasisLabel::from_string("01")), cfg);

    model::TwoQubitParams res{1.0, 1.0, model::Constant{1.0}};
    const auto ref_sys = LindbladSystem::constant(model::build_rwa_two(res, 0.5));
    const auto ref = integrate(ref_sys, basis_state(BasisLabel::from_string("01")), cfg);

    double worst = 0.0;
    for (int i = 0; i < cfg.grid_points; ++i) {
      worst = std::max(worst, (traj.states[i].diagonal() - ref.states[i].diagonal())
                                  .cwiseAbs()
                                  .maxCoeff());
    }
    return worst;
  };

  const double dev20 = deviation(12.0, 8.0);
  const double dev100 = deviation(60.0, 40.0);
  INFO("dev20=" << dev20 << " dev100=" << dev100);
  CHECK(dev100 <= 0.5 * dev20);
}

TEST_CASE("integration failures surface as errors") {
  // a non-Hermitian generator violates trace preservation and must abort
  Mat bad = Mat::Zero(2, 2);
  bad(0, 1) = 1.0;
  const auto sys = LindbladSystem::constant(bad * Complex(0, 1));
  Mat excited = Mat::Zero(2, 2);
  excited(1, 1) = 1.0;
  IntegratorConfig cfg;
  cfg.t_max = 2.0;
  cfg.grid_points = 21;
  CHECK_THROWS_AS(integrate(sys, qops::DensityMatrix(excited), cfg), IntegrationError);

  IntegratorConfig invalid;
  invalid.grid_points = 1;
  CHECK_THROWS_AS(integrate(sys, qops::DensityMatrix(excited), invalid),
                  std::invalid_argument);
  invalid = IntegratorConfig{};
  invalid.rel_tol = 0.0;
  CHECK_THROWS_AS(integrate(sys, qops::DensityMatrix(excited), invalid),
                  std::invalid_argument);

  const auto ok_sys = LindbladSystem::constant(Mat::Zero(4, 4));
  CHECK_THROWS_AS(integrate(ok_sys, qops::DensityMatrix(excited), IntegratorConfig{}),
                  std::invalid_argument);
}

TEST_CASE("liouvillian reproduces the right-hand side") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    Mat h = random_matrix(4, rng);
    h = 0.5 * (h + h.adjoint().eval());
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<Channel> channels{{random_matrix(4, rng), u(rng)},
                                  {random_matrix(4, rng), u(rng)}};
    const auto sys = LindbladSystem::constant(h, channels);
    const Mat l = liouvillian(sys);

    const Mat rho = random_density(4, rng);
    const Eigen::VectorXcd v = Eigen::Map<const Eigen::VectorXcd>(rho.data(), 16);
    const Eigen::VectorXcd dv = l * v;
    const Mat from_l = Eigen::Map<const Mat>(dv.data(), 4, 4);
    CHECK(qops::max_abs(from_l - lindblad_rhs(0.0, rho, sys)) < 1e-12);
  }
}

TEST_CASE("density matrix helper keeps integrator inputs valid") {
  std::mt19937_64 rng(3);
  const Mat rho = random_density(4, rng);
  CHECK_NOTHROW(hermitized(rho));
}
