// Copyright 2026 The tqdyn Authors
// SPDX-License-Identifier: Apache-2.0

#include "tqdyn/qops.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace tqdyn;
using namespace tqdyn::qops;
using Catch::Approx;

namespace {

Mat random_2x2(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Mat m(2, 2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) m(i, j) = Complex(u(rng), u(rng));
  return m;
}

}  // namespace

TEST_CASE("pauli catalog follows the fixed basis convention") {
  const Mat z = pauli(Pauli::Z);
  CHECK(z(0, 0) == Complex(-1.0, 0.0));
  CHECK(z(1, 1) == Complex(1.0, 0.0));
  CHECK(z(0, 1) == Complex(0.0, 0.0));

  Eigen::Vector2cd ground(1.0, 0.0), excited(0.0, 1.0);
  CHECK(max_abs(pauli(Pauli::Plus) * ground - excited) == 0.0);
  CHECK(max_abs(pauli(Pauli::Plus) * excited) == 0.0);
  CHECK(max_abs(pauli(Pauli::Minus) * excited - ground) == 0.0);

  const Mat x = pauli(Pauli::X), y = pauli(Pauli::Y);
  CHECK(max_abs(x * y - y * x - Complex(0, 2) * z) < 1e-15);
  CHECK(max_abs(pauli(Pauli::Plus) - 0.5 * (x + Complex(0, 1) * y)) < 1e-15);
  CHECK(max_abs(pauli(Pauli::Minus) - 0.5 * (x - Complex(0, 1) * y)) < 1e-15);
}

TEST_CASE("embed places single-qubit operators by site") {
  const Mat z1 = embed(pauli(Pauli::Z), 1, 2);
  const Mat z2 = embed(pauli(Pauli::Z), 2, 2);
  Eigen::Vector4d d1 = z1.diagonal().real(), d2 = z2.diagonal().real();
  CHECK(d1.isApprox(Eigen::Vector4d(-1, -1, 1, 1)));
  CHECK(d2.isApprox(Eigen::Vector4d(-1, 1, -1, 1)));
  CHECK(max_abs(z1 - z1.diagonal().asDiagonal().toDenseMatrix()) == 0.0);

  // flip-flop action used by the exchange Hamiltonians: |01> -> |10>
  const Mat op = embed(pauli(Pauli::Plus), 1, 2) * embed(pauli(Pauli::Minus), 2, 2);
  Eigen::Vector4cd ket01 = Eigen::Vector4cd::Zero(), ket10 = Eigen::Vector4cd::Zero();
  ket01(1) = 1.0;
  ket10(2) = 1.0;
  CHECK(max_abs(op * ket01 - ket10) == 0.0);

  CHECK_THROWS_AS(embed(pauli(Pauli::X), 0, 2), std::invalid_argument);
  CHECK_THROWS_AS(embed(pauli(Pauli::X), 3, 2), std::invalid_argument);
  CHECK_THROWS_AS(embed(Mat::Identity(4, 4), 1, 2), std::invalid_argument);
}

TEST_CASE("embedded operators on distinct sites commute") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 50; ++trial) {
    const Mat a = random_2x2(rng), b = random_2x2(rng);
    const int n = 3;
    std::uniform_int_distribution<int> site(1, n);
    int j = site(rng), k = site(rng);
    while (k == j) k = site(rng);
    const Mat ea = embed(a, j, n), eb = embed(b, k, n);
    CHECK(max_abs(ea * eb - eb * ea) < 1e-14);
  }
}

TEST_CASE("basis_state builds pure projectors") {
  const DensityMatrix rho01 = basis_state(BasisLabel::from_string("01"));
  Eigen::Vector4d diag = rho01.matrix().diagonal().real();
  CHECK(diag.isApprox(Eigen::Vector4d(0, 1, 0, 0)));

  const DensityMatrix rho101 = basis_state(BasisLabel::from_string("101"));
  REQUIRE(rho101.dim() == 8);
  CHECK(rho101.matrix()(5, 5) == Complex(1.0, 0.0));
  CHECK(max_abs(rho101.matrix()) == 1.0);
  CHECK(rho101.matrix().cwiseAbs().sum() == 1.0);

  CHECK(basis_state(BasisLabel::from_string("11")).matrix().trace().real() == 1.0);
}

TEST_CASE("basis labels map bit strings to indices") {
  CHECK(BasisLabel::from_string("01").index() == 1);
  CHECK(BasisLabel::from_string("10").index() == 2);
  CHECK(BasisLabel::from_string("101").index() == 5);
  CHECK(BasisLabel::from_index(6, 3) == BasisLabel::from_string("110"));
  CHECK(BasisLabel::from_string("110").str() == "110");
  CHECK_THROWS_AS(BasisLabel::from_string(""), std::invalid_argument);
  CHECK_THROWS_AS(BasisLabel::from_string("012"), std::invalid_argument);
  CHECK_THROWS_AS(BasisLabel::from_index(8, 3), std::invalid_argument);
}

TEST_CASE("w_state is the pure W projector") {
  const DensityMatrix w = w_state();
  Eigen::VectorXd diag = w.matrix().diagonal().real();
  Eigen::VectorXd expected(8);
  expected << 0, 0, 0, 1.0 / 3, 0, 1.0 / 3, 1.0 / 3, 0;
  CHECK(diag.isApprox(expected, 1e-15));

  // purity of a pure state
  CHECK((w.matrix() * w.matrix()).trace().real() == Approx(1.0).margin(1e-14));
  // <011|W><W|101> = 1/3
  CHECK(w.matrix()(3, 5).real() == Approx(1.0 / 3).margin(1e-15));
  for (Eigen::Index i = 0; i < 8; ++i) {
    for (Eigen::Index j = 0; j < 8; ++j) {
      const bool in_w = (i == 3 || i == 5 || i == 6) && (j == 3 || j == 5 || j == 6);
      if (!in_w) CHECK(w.matrix()(i, j) == Complex(0, 0));
    }
  }
  CHECK_THROWS_AS(w_state(2), std::invalid_argument);
}

TEST_CASE("density matrix validation rejects bad states") {
  Mat ok = Mat::Zero(2, 2);
  ok(0, 0) = 0.5;
  ok(1, 1) = 0.5;
  CHECK_NOTHROW(DensityMatrix(ok));

  Mat bad_trace = ok;
  bad_trace(0, 0) = 0.7;
  CHECK_THROWS_AS(DensityMatrix(bad_trace), std::invalid_argument);

  Mat not_herm = ok;
  not_herm(0, 1) = Complex(0.1, 0.0);
  CHECK_THROWS_AS(DensityMatrix(not_herm), std::invalid_argument);

  Mat not_psd = Mat::Zero(2, 2);
  not_psd(0, 0) = 1.5;
  not_psd(1, 1) = -0.5;
  CHECK_THROWS_AS(DensityMatrix(not_psd), std::invalid_argument);

  CHECK_THROWS_AS(DensityMatrix(Mat::Identity(3, 3) / 3.0), std::invalid_argument);
}

TEST_CASE("number operator counts excitations") {
  const Mat n3 = number_operator(3);
  CHECK(n3.diagonal()(5).real() == 2.0);  // |101>
  CHECK(n3.diagonal()(0).real() == 0.0);  // |000>
  CHECK(n3.diagonal()(7).real() == 3.0);  // |111>
}
