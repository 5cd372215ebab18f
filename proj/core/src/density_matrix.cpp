#include "qnetsim/density_matrix.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <stdexcept>

namespace qnet {

DensityMatrix::DensityMatrix(int num_qubits, Mat entries)
    : num_qubits_(num_qubits), m_(std::move(entries)) {
  const Eigen::Index d = Eigen::Index(1) << num_qubits;
  if (m_.rows() != d || m_.cols() != d) {
    throw std::invalid_argument("DensityMatrix: matrix dimension does not match qubit count");
  }
}

DensityMatrix DensityMatrix::pure(int num_qubits, const Vec& amplitudes) {
  const Eigen::Index d = Eigen::Index(1) << num_qubits;
  if (amplitudes.size() != d) {
    throw std::invalid_argument("DensityMatrix::pure: bad amplitude vector size");
  }
  return DensityMatrix(num_qubits, amplitudes * amplitudes.adjoint());
}

DensityMatrix DensityMatrix::computational_zero(int num_qubits) {
  const Eigen::Index d = Eigen::Index(1) << num_qubits;
  Vec psi = Vec::Zero(d);
  psi(0) = 1.0;
  return pure(num_qubits, psi);
}

DensityMatrix DensityMatrix::maximally_mixed(int num_qubits) {
  const Eigen::Index d = Eigen::Index(1) << num_qubits;
  return DensityMatrix(num_qubits, Mat::Identity(d, d) / double(d));
}

DensityMatrix DensityMatrix::normalized() const {
  const double t = norm();
  if (t <= 0.0) {
    throw std::runtime_error("DensityMatrix::normalized: zero-trace branch");
  }
  return DensityMatrix(num_qubits_, m_ / t);
}

DensityMatrix DensityMatrix::tensor(const DensityMatrix& other) const {
  const Eigen::Index da = dim(), db = other.dim();
  Mat out(da * db, da * db);
  // other occupies the high bits of the joint index
  for (Eigen::Index bi = 0; bi < db; ++bi) {
    for (Eigen::Index bj = 0; bj < db; ++bj) {
      out.block(bi * da, bj * da, da, da) = other.m_(bi, bj) * m_;
    }
  }
  return DensityMatrix(num_qubits_ + other.num_qubits_, std::move(out));
}

void DensityMatrix::check_valid(double herm_tol, double psd_tol) const {
  const double herm = (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
  if (herm > herm_tol) {
    throw std::runtime_error("DensityMatrix: not Hermitian, deviation " + std::to_string(herm));
  }
  const double t = norm();
  if (t < -herm_tol || t > 1.0 + 1e-9) {
    throw std::runtime_error("DensityMatrix: trace out of [0,1]: " + std::to_string(t));
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(m_, Eigen::EigenvaluesOnly);
  const double min_eig = es.eigenvalues().minCoeff();
  if (min_eig < -psd_tol) {
    throw std::runtime_error("DensityMatrix: negative eigenvalue " + std::to_string(min_eig));
  }
}

DensityMatrix partial_trace(const DensityMatrix& state, std::span<const int> keep) {
  const int n = state.num_qubits();
  if (keep.empty()) {
    throw std::invalid_argument("partial_trace: empty keep set");
  }
  std::vector<int> kept(keep.begin(), keep.end());
  std::sort(kept.begin(), kept.end());
  for (int q : kept) {
    if (q < 0 || q >= n) throw std::invalid_argument("partial_trace: qubit out of range");
  }
  const int nk = static_cast<int>(kept.size());
  std::vector<int> traced;
  for (int q = 0; q < n; ++q) {
    if (!std::binary_search(kept.begin(), kept.end(), q)) traced.push_back(q);
  }
  const Eigen::Index dk = Eigen::Index(1) << nk;
  const Eigen::Index dt = Eigen::Index(1) << traced.size();

  auto expand = [](const std::vector<int>& qubits, Eigen::Index packed) {
    Eigen::Index full = 0;
    for (std::size_t j = 0; j < qubits.size(); ++j) {
      if ((packed >> j) & 1) full |= Eigen::Index(1) << qubits[j];
    }
    return full;
  };

  Mat out = Mat::Zero(dk, dk);
  const Mat& m = state.mat();
  for (Eigen::Index i = 0; i < dk; ++i) {
    const Eigen::Index fi = expand(kept, i);
    for (Eigen::Index j = 0; j < dk; ++j) {
      const Eigen::Index fj = expand(kept, j);
      Cplx acc = 0.0;
      for (Eigen::Index t = 0; t < dt; ++t) {
        const Eigen::Index ft = expand(traced, t);
        acc += m(fi | ft, fj | ft);
      }
      out(i, j) = acc;
    }
  }
  return DensityMatrix(nk, std::move(out));
}

double overlap(const DensityMatrix& state, const Vec& psi) {
  return (psi.adjoint() * state.mat() * psi)(0, 0).real();
}

}  // namespace qnet
