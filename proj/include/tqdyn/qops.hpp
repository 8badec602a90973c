// Copyright 2026 The tqdyn Authors
// SPDX-License-Identifier: Apache-2.0
//
// Dense operator algebra for small qubit registers: the Pauli/ladder catalog,
// tensor embedding, basis labels and density-matrix constructors.
//
// Conventions, fixed project-wide:
//   * qubit 1 is the most significant bit of a basis index; the ground state
//     |0> is the first basis vector,
//   * sigma^z = |1><1| - |0><0|, so the excited state has eigenvalue +1 and
//     sigma^- = |0><1| decays |1> -> |0>.

#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tqdyn {

using Complex = std::complex<double>;
using Mat = Eigen::MatrixXcd;

namespace qops {

// Density-matrix invariant tolerances.
inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kMinEigenvalueTol = -1e-9;

enum class Pauli { X, Y, Z, Plus, Minus };

inline double max_abs(const Mat& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

inline double hermiticity_error(const Mat& a) {
  return max_abs(a - a.adjoint());
}

/// Smallest eigenvalue of the Hermitian part of `a`.
inline double min_eigenvalue(const Mat& a) {
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (a + a.adjoint()),
                                        Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

/// Number of qubits for a Hilbert-space dimension; rejects non powers of two.
inline int qubit_count(Eigen::Index dim) {
  if (dim < 2 || (dim & (dim - 1)) != 0) {
    throw std::invalid_argument("qops: dimension " + std::to_string(dim) +
                                " is not 2^n with n >= 1");
  }
  int n = 0;
  while ((Eigen::Index{1} << n) < dim) ++n;
  return n;
}

inline Mat pauli(Pauli kind) {
  Mat m = Mat::Zero(2, 2);
  switch (kind) {
    case Pauli::X:
      m(0, 1) = 1.0;
      m(1, 0) = 1.0;
      break;
    case Pauli::Y:
      m(0, 1) = Complex(0, 1);
      m(1, 0) = Complex(0, -1);
      break;
    case Pauli::Z:
      m(0, 0) = -1.0;
      m(1, 1) = 1.0;
      break;
    case Pauli::Plus:
      m(1, 0) = 1.0;  // |1><0|
      break;
    case Pauli::Minus:
      m(0, 1) = 1.0;  // |0><1|
      break;
  }
  return m;
}

/// I x ... x op (at `site`, 1-based) x ... x I on an n-qubit register.
inline Mat embed(const Mat& op, int site, int n) {
  if (op.rows() != 2 || op.cols() != 2) {
    throw std::invalid_argument("qops::embed: operator must be 2x2");
  }
  if (n < 1 || site < 1 || site > n) {
    throw std::invalid_argument("qops::embed: site " + std::to_string(site) +
                                " out of range 1.." + std::to_string(n));
  }
  const Eigen::Index left = Eigen::Index{1} << (site - 1);
  const Eigen::Index right = Eigen::Index{1} << (n - site);
  Mat tmp = Eigen::kroneckerProduct(Mat::Identity(left, left), op);
  return Eigen::kroneckerProduct(tmp, Mat::Identity(right, right));
}

/// Pauli operator acting on one qubit of an n-qubit register.
inline Mat sigma(Pauli kind, int site, int n) { return embed(pauli(kind), site, n); }

/// Total excitation number operator sum_j (sigma_j^z + I)/2.
inline Mat number_operator(int n) {
  const Eigen::Index dim = Eigen::Index{1} << n;
  Mat out = Mat::Zero(dim, dim);
  for (int j = 1; j <= n; ++j) {
    out += 0.5 * (sigma(Pauli::Z, j, n) + Mat::Identity(dim, dim));
  }
  return out;
}

/// Ordered bit string labelling a basis state; leftmost bit is qubit 1 and
/// the most significant binary digit, so e.g. "01" -> index 1.
struct BasisLabel {
  std::vector<int> bits;

  static BasisLabel from_string(std::string_view s) {
    if (s.empty()) throw std::invalid_argument("BasisLabel: empty bit string");
    BasisLabel label;
    label.bits.reserve(s.size());
    for (char c : s) {
      if (c != '0' && c != '1') {
        throw std::invalid_argument("BasisLabel: invalid character '" +
                                    std::string(1, c) + "' in \"" +
                                    std::string(s) + "\"");
      }
      label.bits.push_back(c - '0');
    }
    return label;
  }

  static BasisLabel from_index(Eigen::Index index, int qubits) {
    if (qubits < 1 || index < 0 || index >= (Eigen::Index{1} << qubits)) {
      throw std::invalid_argument("BasisLabel: index out of range");
    }
    BasisLabel label;
    label.bits.resize(qubits);
    for (int j = 0; j < qubits; ++j) {
      label.bits[j] = static_cast<int>((index >> (qubits - 1 - j)) & 1);
    }
    return label;
  }

  int qubits() const { return static_cast<int>(bits.size()); }

  Eigen::Index index() const {
    Eigen::Index idx = 0;
    for (int b : bits) {
      if (b != 0 && b != 1) throw std::invalid_argument("BasisLabel: bits must be 0/1");
      idx = (idx << 1) | b;
    }
    return idx;
  }

  std::string str() const {
    std::string s;
    for (int b : bits) s.push_back(static_cast<char>('0' + b));
    return s;
  }

  friend bool operator==(const BasisLabel&, const BasisLabel&) = default;
};

/// Hermitian, unit-trace, positive-semidefinite state; validated on
/// construction against the module tolerances.
class DensityMatrix {
 public:
  explicit DensityMatrix(Mat rho) : rho_(std::move(rho)) {
    if (rho_.rows() != rho_.cols()) {
      throw std::invalid_argument("DensityMatrix: matrix must be square");
    }
    qubit_count(rho_.rows());
    if (!rho_.allFinite()) {
      throw std::invalid_argument("DensityMatrix: non-finite entries");
    }
    if (hermiticity_error(rho_) > kHermitianTol) {
      throw std::invalid_argument("DensityMatrix: not Hermitian");
    }
    if (std::abs(rho_.trace().real() - 1.0) > kTraceTol ||
        std::abs(rho_.trace().imag()) > kTraceTol) {
      throw std::invalid_argument("DensityMatrix: trace != 1");
    }
    if (min_eigenvalue(rho_) < kMinEigenvalueTol) {
      throw std::invalid_argument("DensityMatrix: not positive semidefinite");
    }
  }

  const Mat& matrix() const { return rho_; }
  Eigen::Index dim() const { return rho_.rows(); }
  int qubits() const { return qubit_count(rho_.rows()); }

 private:
  Mat rho_;
};

/// Pure projector |bits><bits|.
inline DensityMatrix basis_state(const BasisLabel& bits) {
  const Eigen::Index dim = Eigen::Index{1} << bits.qubits();
  Mat rho = Mat::Zero(dim, dim);
  rho(bits.index(), bits.index()) = 1.0;
  return DensityMatrix(std::move(rho));
}

/// |W> = (|011> + |101> + |110>)/sqrt(3).
inline Eigen::VectorXcd w_vector() {
  Eigen::VectorXcd w = Eigen::VectorXcd::Zero(8);
  const double amp = 1.0 / std::sqrt(3.0);
  w(3) = amp;
  w(5) = amp;
  w(6) = amp;
  return w;
}

inline DensityMatrix w_state(int n = 3) {
  if (n != 3) {
    throw std::invalid_argument("w_state: only defined for n = 3");
  }
  const Eigen::VectorXcd w = w_vector();
  return DensityMatrix(w * w.adjoint());
}

}  // namespace qops
}  // namespace tqdyn
