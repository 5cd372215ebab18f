#include "qnetsim/channels.hpp"

#include <stdexcept>

#include "qnetsim/gates.hpp"
#include "qnetsim/pauli.hpp"

namespace qnet {

void apply_single_qubit_noise(DensityMatrix& state, int qubit, double p1) {
  if (p1 < 0.0 || p1 > 1.0) throw std::invalid_argument("apply_single_qubit_noise: p1 out of [0,1]");
  if (qubit < 0 || qubit >= state.num_qubits()) {
    throw std::invalid_argument("apply_single_qubit_noise: qubit out of range");
  }
  if (p1 == 0.0) return;
  const int targets[1] = {qubit};
  Mat acc = (1.0 - p1) * state.mat();
  for (PauliLetter l : {PauliLetter::X, PauliLetter::Y, PauliLetter::Z}) {
    DensityMatrix term = state;
    apply_pauli_conj(term, PauliString({l}), targets);
    acc += (p1 / 3.0) * term.mat();
  }
  state.mat().swap(acc);
}

void apply_two_qubit_noise(DensityMatrix& state, int qubit_a, int qubit_b, double p2) {
  if (p2 < 0.0 || p2 > 1.0) throw std::invalid_argument("apply_two_qubit_noise: p2 out of [0,1]");
  if (qubit_a == qubit_b) throw std::invalid_argument("apply_two_qubit_noise: qubits must differ");
  if (qubit_a < 0 || qubit_a >= state.num_qubits() || qubit_b < 0 || qubit_b >= state.num_qubits()) {
    throw std::invalid_argument("apply_two_qubit_noise: qubit out of range");
  }
  if (p2 == 0.0) return;
  const int targets[2] = {qubit_a, qubit_b};
  Mat acc = (1.0 - p2) * state.mat();
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      if (a == 0 && b == 0) continue;
      DensityMatrix term = state;
      apply_pauli_conj(term,
                       PauliString({static_cast<PauliLetter>(a), static_cast<PauliLetter>(b)}),
                       targets);
      acc += (p2 / 15.0) * term.mat();
    }
  }
  state.mat().swap(acc);
}

namespace {

// Rotation mapping the measurement basis onto the computational one.
Mat basis_change(Basis basis) {
  switch (basis) {
    case Basis::Z: return gate_identity2();
    case Basis::X: return gate_h();
    case Basis::Y: return gate_h() * gate_s_dagger();
  }
  throw std::logic_error("basis_change: bad basis");
}

// Unnormalized projection branch onto |outcome> of the qubit, qubit removed.
DensityMatrix project_out(const DensityMatrix& state, int qubit, int outcome) {
  const int n = state.num_qubits();
  const Eigen::Index d = state.dim();
  const Eigen::Index dr = d >> 1;
  const Eigen::Index bit = Eigen::Index(1) << qubit;
  const Eigen::Index low_mask = bit - 1;

  Mat out(dr, dr);
  const Mat& m = state.mat();
  for (Eigen::Index i = 0; i < dr; ++i) {
    const Eigen::Index fi = ((i & ~low_mask) << 1) | (i & low_mask) | (outcome ? bit : 0);
    for (Eigen::Index j = 0; j < dr; ++j) {
      const Eigen::Index fj = ((j & ~low_mask) << 1) | (j & low_mask) | (outcome ? bit : 0);
      out(i, j) = m(fi, fj);
    }
  }
  return DensityMatrix(n - 1, std::move(out));
}

}  // namespace

DensityMatrix measurement_branch(const DensityMatrix& state, int qubit, Basis basis,
                                 int reported, double pm) {
  if (pm < 0.0 || pm > 0.5) throw std::invalid_argument("measurement_branch: pm out of [0,0.5]");
  if (qubit < 0 || qubit >= state.num_qubits()) {
    throw std::invalid_argument("measurement_branch: qubit out of range");
  }
  DensityMatrix rotated = state;
  if (basis != Basis::Z) {
    const int targets[1] = {qubit};
    apply_unitary(rotated, basis_change(basis), targets);
  }
  DensityMatrix intended = project_out(rotated, qubit, reported);
  if (pm == 0.0) return intended;
  DensityMatrix lied = project_out(rotated, qubit, 1 - reported);
  intended.mat() = (1.0 - pm) * intended.mat() + pm * lied.mat();
  return intended;
}

std::pair<int, DensityMatrix> measure_qubit(const DensityMatrix& state, int qubit,
                                            Basis basis, double pm, Rng& rng) {
  DensityMatrix b0 = measurement_branch(state, qubit, basis, 0, pm);
  const double total = state.norm();
  const double p0 = b0.norm() / total;
  if (rng.uniform() < p0) {
    return {0, b0.normalized()};
  }
  DensityMatrix b1 = measurement_branch(state, qubit, basis, 1, pm);
  if (b1.norm() <= 0.0) {
    throw std::runtime_error("measure_qubit: selected branch has nonpositive probability");
  }
  return {1, b1.normalized()};
}

}  // namespace qnet
