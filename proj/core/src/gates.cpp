#include "qnetsim/gates.hpp"

#include <stdexcept>
#include <unordered_set>

namespace qnet {

namespace {
const Cplx kI(0.0, 1.0);
}

Mat gate_identity2() { return Mat::Identity(2, 2); }

Mat gate_h() {
  Mat m(2, 2);
  m << 1, 1, 1, -1;
  return m / std::sqrt(2.0);
}

Mat gate_s() {
  Mat m = Mat::Zero(2, 2);
  m(0, 0) = 1.0;
  m(1, 1) = kI;
  return m;
}

Mat gate_s_dagger() { return gate_s().adjoint(); }

Mat gate_x() {
  Mat m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

Mat gate_y() {
  Mat m(2, 2);
  m << 0, -kI, kI, 0;
  return m;
}

Mat gate_z() {
  Mat m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

Mat gate_cnot() {
  // index = control + 2*target
  Mat m = Mat::Zero(4, 4);
  m(0, 0) = 1;  // c=0,t=0
  m(2, 2) = 1;  // c=0,t=1
  m(3, 1) = 1;  // c=1,t=0 -> c=1,t=1
  m(1, 3) = 1;  // c=1,t=1 -> c=1,t=0
  return m;
}

Mat gate_cphase() {
  Mat m = Mat::Identity(4, 4);
  m(3, 3) = -1;
  return m;
}

Mat GateOp::matrix() const {
  switch (kind) {
    case GateKind::H: return gate_h();
    case GateKind::S: return gate_s();
    case GateKind::SDagger: return gate_s_dagger();
    case GateKind::X: return gate_x();
    case GateKind::Y: return gate_y();
    case GateKind::Z: return gate_z();
    case GateKind::CNOT: return gate_cnot();
    case GateKind::CPHASE: return gate_cphase();
    case GateKind::Custom: return custom;
  }
  throw std::logic_error("GateOp::matrix: bad kind");
}

void GateOp::validate(int num_qubits) const {
  const Mat u = matrix();
  if (u.rows() != u.cols() || u.rows() != (Eigen::Index(1) << targets.size())) {
    throw std::invalid_argument("GateOp: matrix size does not match target count");
  }
  const double defect = (u.adjoint() * u - Mat::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
  if (defect > 1e-12) {
    throw std::invalid_argument("GateOp: matrix is not unitary");
  }
  std::unordered_set<int> seen;
  for (int t : targets) {
    if (t < 0 || t >= num_qubits) throw std::invalid_argument("GateOp: target out of range");
    if (!seen.insert(t).second) throw std::invalid_argument("GateOp: duplicate target");
  }
}

namespace {

// Left-multiplies rho by the k-qubit operator u on the given targets.
void left_mul(Mat& rho, const Mat& u, std::span<const int> targets) {
  const Eigen::Index d = rho.rows();
  const int k = static_cast<int>(targets.size());
  const Eigen::Index kd = Eigen::Index(1) << k;

  Eigen::Index tmask = 0;
  for (int t : targets) tmask |= Eigen::Index(1) << t;

  std::vector<Eigen::Index> offsets(kd);
  for (Eigen::Index s = 0; s < kd; ++s) {
    Eigen::Index off = 0;
    for (int j = 0; j < k; ++j) {
      if ((s >> j) & 1) off |= Eigen::Index(1) << targets[j];
    }
    offsets[s] = off;
  }

  std::vector<Cplx> x(kd), y(kd);
  for (Eigen::Index col = 0; col < d; ++col) {
    // iterate over base indices with target bits cleared
    for (Eigen::Index base = 0; base < d; ++base) {
      if (base & tmask) continue;
      for (Eigen::Index s = 0; s < kd; ++s) x[s] = rho(base | offsets[s], col);
      for (Eigen::Index r = 0; r < kd; ++r) {
        Cplx acc = 0.0;
        for (Eigen::Index s = 0; s < kd; ++s) acc += u(r, s) * x[s];
        y[r] = acc;
      }
      for (Eigen::Index r = 0; r < kd; ++r) rho(base | offsets[r], col) = y[r];
    }
  }
}

}  // namespace

void apply_operator(DensityMatrix& state, const Mat& k, std::span<const int> targets) {
  for (int t : targets) {
    if (t < 0 || t >= state.num_qubits()) {
      throw std::invalid_argument("apply_operator: target out of range");
    }
  }
  if (k.rows() != (Eigen::Index(1) << targets.size())) {
    throw std::invalid_argument("apply_operator: matrix size does not match targets");
  }
  Mat& rho = state.mat();
  // K rho K^dag = (K (K rho)^dag)^dag
  left_mul(rho, k, targets);
  rho.adjointInPlace();
  left_mul(rho, k, targets);
  rho.adjointInPlace();
}

void apply_unitary(DensityMatrix& state, const Mat& u, std::span<const int> targets) {
  apply_operator(state, u, targets);
}

void apply_gate(DensityMatrix& state, const GateOp& gate) {
  gate.validate(state.num_qubits());
  apply_unitary(state, gate.matrix(), gate.targets);
}

void apply_diagonal_unitary(DensityMatrix& state, const Vec& diag,
                            std::span<const int> targets) {
  const Eigen::Index d = state.dim();
  const int k = static_cast<int>(targets.size());
  if (diag.size() != (Eigen::Index(1) << k)) {
    throw std::invalid_argument("apply_diagonal_unitary: bad diagonal size");
  }
  std::vector<Cplx> full(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    Eigen::Index s = 0;
    for (int j = 0; j < k; ++j) {
      if ((i >> targets[j]) & 1) s |= Eigen::Index(1) << j;
    }
    full[i] = diag(s);
  }
  Mat& m = state.mat();
  for (Eigen::Index j = 0; j < d; ++j) {
    const Cplx cj = std::conj(full[j]);
    for (Eigen::Index i = 0; i < d; ++i) {
      m(i, j) *= full[i] * cj;
    }
  }
}

}  // namespace qnet
