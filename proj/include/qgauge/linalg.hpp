// Copyright 2026 The qgauge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Dense complex linear algebra for small quantum states (d up to ~64).

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace qgauge {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;
using Dims = std::vector<int>;

/// Input-validation tolerances. Defaults are the documented contract values.
struct Tolerances {
  double hermitian = 1e-10;  // relative to 1 + max|M_ij|
  double trace = 1e-9;
  double psd = 1e-9;
  double norm = 1e-12;
};

inline int product(const Dims& dims) {
  int p = 1;
  for (int d : dims) {
    if (d < 1) throw std::invalid_argument("factor dimensions must be positive");
    p *= d;
  }
  return p;
}

inline double max_abs(const CMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline bool all_finite(const CMatrix& m) {
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    const cplx z = m.data()[i];
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

/// Hermitian matrix, validated on construction and exactly symmetrized.
class Hermitian {
 public:
  Hermitian() = default;

  explicit Hermitian(const CMatrix& m, double tol = Tolerances{}.hermitian) {
    if (m.rows() != m.cols()) throw std::invalid_argument("Hermitian: matrix is not square");
    if (!all_finite(m)) throw std::invalid_argument("Hermitian: non-finite entry");
    const double skew = max_abs(m - m.adjoint());
    if (skew > tol * (1.0 + max_abs(m))) {
      throw std::invalid_argument("Hermitian: matrix deviates from its adjoint by " + std::to_string(skew));
    }
    m_ = 0.5 * (m + m.adjoint());
  }

  static Hermitian identity(int d) { return Hermitian(CMatrix::Identity(d, d)); }

  int dim() const { return static_cast<int>(m_.rows()); }
  const CMatrix& matrix() const { return m_; }
  double trace() const { return m_.trace().real(); }

 private:
  CMatrix m_;
};

/// Real inner product Tr(A B) of Hermitian matrices.
inline double hs_inner(const CMatrix& a, const CMatrix& b) {
  return (a.conjugate().cwiseProduct(b)).sum().real();
}

struct SpectralDecomposition {
  RVector values;   // nonincreasing
  CMatrix vectors;  // orthonormal columns
};

/// Eigendecomposition with eigenvalues sorted nonincreasing.
inline SpectralDecomposition hermitian_eig(const Hermitian& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h.matrix());
  if (solver.info() != Eigen::Success) throw std::runtime_error("hermitian_eig: solver failed");
  const int d = h.dim();
  SpectralDecomposition out{RVector(d), CMatrix(d, d)};
  for (int i = 0; i < d; ++i) {
    out.values(i) = solver.eigenvalues()(d - 1 - i);
    out.vectors.col(i) = solver.eigenvectors().col(d - 1 - i);
  }
  return out;
}

inline SpectralDecomposition hermitian_eig(const CMatrix& m) { return hermitian_eig(Hermitian(m)); }

inline double min_eigenvalue(const CMatrix& m) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(0);
}

inline double max_eigenvalue(const CMatrix& m) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(m.rows() - 1);
}

/// Applies f to the spectrum of a Hermitian matrix.
inline CMatrix spectral_map(const CMatrix& m, const std::function<double(double)>& f) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(0.5 * (m + m.adjoint()));
  RVector fv = solver.eigenvalues().unaryExpr(f);
  return solver.eigenvectors() * fv.asDiagonal() * solver.eigenvectors().adjoint();
}

/// Square root of a PSD matrix; eigenvalues below zero are clipped.
inline CMatrix sqrt_psd(const CMatrix& m) {
  return spectral_map(m, [](double x) { return std::sqrt(std::max(x, 0.0)); });
}

/// Pure state with per-factor dimensions.
class StateVector {
 public:
  StateVector() = default;

  StateVector(Dims dims, CVector amplitudes, double tol = Tolerances{}.norm)
      : dims_(std::move(dims)), amps_(std::move(amplitudes)) {
    if (product(dims_) != amps_.size()) throw std::invalid_argument("StateVector: dims do not match amplitude count");
    if (!all_finite(amps_)) throw std::invalid_argument("StateVector: non-finite amplitude");
    if (std::abs(amps_.norm() - 1.0) > tol) {
      throw std::invalid_argument("StateVector: amplitudes are not normalized (norm " + std::to_string(amps_.norm()) + ")");
    }
  }

  /// Normalizes the given vector; throws on the zero vector.
  static StateVector normalized(Dims dims, const CVector& v) {
    const double n = v.norm();
    if (!(n > 0.0)) throw std::invalid_argument("StateVector: zero vector");
    return StateVector(std::move(dims), v / n);
  }

  const Dims& dims() const { return dims_; }
  int dim() const { return static_cast<int>(amps_.size()); }
  const CVector& amplitudes() const { return amps_; }
  CMatrix projector() const { return amps_ * amps_.adjoint(); }

 private:
  Dims dims_;
  CVector amps_;
};

/// Unit-trace positive semidefinite matrix with per-factor dimensions.
class DensityMatrix {
 public:
  DensityMatrix() = default;

  DensityMatrix(Dims dims, const CMatrix& m, const Tolerances& tol = {}) : dims_(std::move(dims)), op_(m, tol.hermitian) {
    if (product(dims_) != op_.dim()) throw std::invalid_argument("DensityMatrix: dims do not match matrix size");
    if (std::abs(op_.trace() - 1.0) > tol.trace) {
      throw std::invalid_argument("DensityMatrix: trace is " + std::to_string(op_.trace()));
    }
    const double lmin = min_eigenvalue(op_.matrix());
    if (lmin < -tol.psd) throw std::invalid_argument("DensityMatrix: negative eigenvalue " + std::to_string(lmin));
  }

  explicit DensityMatrix(const StateVector& psi) : dims_(psi.dims()), op_(psi.projector()) {}

  static DensityMatrix maximally_mixed(Dims dims) {
    const int d = product(dims);
    return DensityMatrix(std::move(dims), CMatrix::Identity(d, d) / static_cast<double>(d));
  }

  const Dims& dims() const { return dims_; }
  int dim() const { return op_.dim(); }
  const CMatrix& matrix() const { return op_.matrix(); }
  const Hermitian& op() const { return op_; }
  double purity() const { return hs_inner(op_.matrix(), op_.matrix()); }

 private:
  Dims dims_;
  Hermitian op_;
};

/// Convex mixture (1-a) rho0 + a rho1.
inline DensityMatrix mix(const DensityMatrix& rho0, const DensityMatrix& rho1, double a) {
  if (rho0.dims() != rho1.dims()) throw std::invalid_argument("mix: dimension mismatch");
  return DensityMatrix(rho0.dims(), (1.0 - a) * rho0.matrix() + a * rho1.matrix());
}

/// Returns the dominant eigenvector when rho is pure within tol.
inline std::optional<StateVector> as_pure(const DensityMatrix& rho, double tol = 1e-9) {
  if (rho.purity() < 1.0 - tol) return std::nullopt;
  auto eig = hermitian_eig(rho.op());
  return StateVector::normalized(rho.dims(), eig.vectors.col(0));
}

inline double trace_norm(const Hermitian& m) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(m.matrix(), Eigen::EigenvaluesOnly);
  return solver.eigenvalues().cwiseAbs().sum();
}

inline double trace_norm(const CMatrix& m) { return trace_norm(Hermitian(m)); }

namespace detail {

// Mixed-radix index decomposition, most significant factor first.
inline std::vector<int> digits(int index, const Dims& dims) {
  std::vector<int> out(dims.size());
  for (int k = static_cast<int>(dims.size()) - 1; k >= 0; --k) {
    out[k] = index % dims[k];
    index /= dims[k];
  }
  return out;
}

inline int compose(const std::vector<int>& digits, const Dims& dims) {
  int index = 0;
  for (std::size_t k = 0; k < dims.size(); ++k) index = index * dims[k] + digits[k];
  return index;
}

}  // namespace detail

/// Transpose on factor `subsystem` of a multipartite operator.
inline Hermitian partial_transpose(const CMatrix& m, const Dims& dims, int subsystem) {
  if (subsystem < 0 || subsystem >= static_cast<int>(dims.size())) {
    throw std::invalid_argument("partial_transpose: invalid subsystem index");
  }
  const int d = product(dims);
  if (m.rows() != d || m.cols() != d) throw std::invalid_argument("partial_transpose: dims do not match matrix");
  CMatrix out(d, d);
  for (int r = 0; r < d; ++r) {
    auto rd = detail::digits(r, dims);
    for (int c = 0; c < d; ++c) {
      auto cd = detail::digits(c, dims);
      std::swap(rd[subsystem], cd[subsystem]);
      out(detail::compose(rd, dims), detail::compose(cd, dims)) = m(r, c);
      std::swap(rd[subsystem], cd[subsystem]);
    }
  }
  return Hermitian(out);
}

inline Hermitian partial_transpose(const DensityMatrix& rho, int subsystem) {
  return partial_transpose(rho.matrix(), rho.dims(), subsystem);
}

/// Reduced operator on the factors listed in `keep` (kept in ascending order).
inline CMatrix partial_trace(const CMatrix& m, const Dims& dims, std::vector<int> keep) {
  if (keep.empty()) throw std::invalid_argument("partial_trace: keep set is empty");
  std::sort(keep.begin(), keep.end());
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
  const int n = static_cast<int>(dims.size());
  for (int k : keep) {
    if (k < 0 || k >= n) throw std::invalid_argument("partial_trace: invalid factor index");
  }
  std::vector<int> traced;
  for (int k = 0; k < n; ++k) {
    if (!std::binary_search(keep.begin(), keep.end(), k)) traced.push_back(k);
  }
  Dims kd, td;
  for (int k : keep) kd.push_back(dims[k]);
  for (int k : traced) td.push_back(dims[k]);
  const int dk = product(kd);
  const int dt = td.empty() ? 1 : product(td);
  CMatrix out = CMatrix::Zero(dk, dk);
  std::vector<int> full(n);
  auto full_index = [&](const std::vector<int>& kdig, const std::vector<int>& tdig) {
    for (std::size_t i = 0; i < keep.size(); ++i) full[keep[i]] = kdig[i];
    for (std::size_t i = 0; i < traced.size(); ++i) full[traced[i]] = tdig[i];
    return detail::compose(full, dims);
  };
  for (int a = 0; a < dk; ++a) {
    const auto ad = detail::digits(a, kd);
    for (int b = 0; b < dk; ++b) {
      const auto bd = detail::digits(b, kd);
      cplx acc = 0.0;
      for (int t = 0; t < dt; ++t) {
        const auto tdig = td.empty() ? std::vector<int>{} : detail::digits(t, td);
        acc += m(full_index(ad, tdig), full_index(bd, tdig));
      }
      out(a, b) = acc;
    }
  }
  return out;
}

inline DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep) {
  Dims kd;
  std::vector<int> sorted = keep;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  CMatrix reduced = partial_trace(rho.matrix(), rho.dims(), sorted);
  for (int k : sorted) kd.push_back(rho.dims()[k]);
  return DensityMatrix(kd, reduced);
}

struct SchmidtData {
  RVector coefficients;  // nonincreasing, length min(dA, dB)
  CMatrix left;          // dA x m, orthonormal columns
  CMatrix right;         // dB x m, orthonormal columns

  CVector reconstruct() const {
    const int da = static_cast<int>(left.rows()), db = static_cast<int>(right.rows());
    CVector out = CVector::Zero(da * db);
    for (int i = 0; i < coefficients.size(); ++i) {
      for (int a = 0; a < da; ++a) {
        for (int b = 0; b < db; ++b) out(a * db + b) += coefficients(i) * left(a, i) * right(b, i);
      }
    }
    return out;
  }
};

/// Schmidt decomposition of a bipartite state via the SVD of its coefficient matrix.
/// Amplitude index convention: a * dB + b.
inline SchmidtData schmidt_decompose(const CVector& psi, int da, int db) {
  if (da < 1 || db < 1 || psi.size() != static_cast<Eigen::Index>(da) * db) {
    throw std::invalid_argument("schmidt_decompose: dimension mismatch");
  }
  CMatrix m(da, db);
  for (int a = 0; a < da; ++a) {
    for (int b = 0; b < db; ++b) m(a, b) = psi(a * db + b);
  }
  // SVD keeps small coefficients accurate; m m^H would square them away.
  Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const int r = std::min(da, db);
  SchmidtData out{svd.singularValues().head(r), svd.matrixU().leftCols(r), svd.matrixV().leftCols(r).conjugate()};
  return out;
}

inline SchmidtData schmidt_decompose(const StateVector& psi, int da, int db) {
  if (product(psi.dims()) != da * db) throw std::invalid_argument("schmidt_decompose: dimension mismatch");
  return schmidt_decompose(psi.amplitudes(), da, db);
}

/// ||sqrt(rho) sqrt(sigma)||_1. The squared fidelity convention is the square of this.
inline double root_fidelity(const CMatrix& rho, const CMatrix& sigma) {
  if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols()) {
    throw std::invalid_argument("root_fidelity: dimension mismatch");
  }
  const CMatrix sr = sqrt_psd(rho);
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(CMatrix(sr * sigma * sr), Eigen::EigenvaluesOnly);
  double acc = 0.0;
  for (int i = 0; i < solver.eigenvalues().size(); ++i) acc += std::sqrt(std::max(solver.eigenvalues()(i), 0.0));
  return std::min(acc, 1.0 + 1e-12);
}

inline double root_fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim()) throw std::invalid_argument("root_fidelity: dimension mismatch");
  return root_fidelity(rho.matrix(), sigma.matrix());
}

/// Kronecker product of two complex matrices.
inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  }
  return out;
}

inline CVector kron(const CVector& a, const CVector& b) {
  CVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

// ---------------------------------------------------------------------------
// Random states

/// Haar-random pure state: normalized complex Gaussian amplitudes.
inline StateVector sample_pure(const Dims& dims, std::uint64_t seed) {
  const int d = product(dims);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  CVector v(d);
  for (int i = 0; i < d; ++i) {
    const double re = normal(rng);
    const double im = normal(rng);
    v(i) = cplx(re, im);
  }
  return StateVector::normalized(dims, v);
}

/// Reduced state of a Haar-random purification with ancilla dimension `rank`.
inline DensityMatrix sample_mixed(const Dims& dims, int rank, std::uint64_t seed) {
  if (rank < 1) throw std::invalid_argument("sample_mixed: rank must be positive");
  const int d = product(dims);
  if (rank > d) throw std::invalid_argument("sample_mixed: rank exceeds dimension");
  const StateVector purification = sample_pure({d, rank}, seed);
  CMatrix g(d, rank);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < rank; ++j) g(i, j) = purification.amplitudes()(i * rank + j);
  }
  return DensityMatrix(dims, g * g.adjoint());
}

/// Random Hermitian matrix with Gaussian entries (GUE-like), for tests and benchmarks.
inline Hermitian sample_hermitian(int d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  CMatrix g(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = cplx(re, im);
    }
  }
  return Hermitian(0.5 * (g + g.adjoint()));
}

}  // namespace qgauge
