#pragma once

#include <Eigen/Dense>
#include <complex>
#include <span>
#include <vector>

namespace qnet {

using Cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

/// Exact mixed state of num_qubits qubits as a dense 2^n x 2^n matrix.
///
/// Qubit indexing is little-endian: qubit 0 is the least significant bit of
/// the computational basis index. States may be unnormalized; trace() is then
/// the probability of the post-selected branch that produced them.
class DensityMatrix {
 public:
  DensityMatrix() = default;
  DensityMatrix(int num_qubits, Mat entries);

  static DensityMatrix pure(int num_qubits, const Vec& amplitudes);
  /// |00...0><00...0|
  static DensityMatrix computational_zero(int num_qubits);
  static DensityMatrix maximally_mixed(int num_qubits);

  int num_qubits() const { return num_qubits_; }
  Eigen::Index dim() const { return m_.rows(); }
  const Mat& mat() const { return m_; }
  Mat& mat() { return m_; }

  /// Trace; equals the branch probability for post-selected states.
  double norm() const { return m_.trace().real(); }

  DensityMatrix normalized() const;

  /// Tensor product; `other` occupies the higher qubit indices.
  DensityMatrix tensor(const DensityMatrix& other) const;

  /// Throws std::runtime_error if Hermiticity (1e-12), trace bounds or
  /// positivity (min eigenvalue >= -1e-10) are violated.
  void check_valid(double herm_tol = 1e-12, double psd_tol = 1e-10) const;

 private:
  int num_qubits_ = 0;
  Mat m_;
};

/// Reduced state on the kept qubits (indices re-packed in ascending order of
/// the original labels). Trace preserved.
DensityMatrix partial_trace(const DensityMatrix& state, std::span<const int> keep);

/// Overlap <psi| rho |psi> for a pure state vector.
double overlap(const DensityMatrix& state, const Vec& psi);

}  // namespace qnet
