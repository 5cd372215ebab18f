#include "qnetsim/bell.hpp"

#include <cmath>
#include <stdexcept>

namespace qnet {

Vec bell_vector(BellState which) {
  const double s = 1.0 / std::sqrt(2.0);
  Vec v = Vec::Zero(4);
  // basis index = a + 2b with qubit 0 at site A, qubit 1 at site B
  switch (which) {
    case BellState::PhiPlus:  v(0) = s; v(3) = s; break;
    case BellState::PhiMinus: v(0) = s; v(3) = -s; break;
    case BellState::PsiPlus:  v(1) = s; v(2) = s; break;
    case BellState::PsiMinus: v(1) = s; v(2) = -s; break;
  }
  return v;
}

DensityMatrix make_bell(BellState which) {
  return DensityMatrix::pure(2, bell_vector(which));
}

DensityMatrix werner(double epsilon) {
  if (epsilon < 0.0 || epsilon >= 0.5) {
    throw std::invalid_argument("werner: epsilon out of [0, 0.5)");
  }
  Mat m = (1.0 - epsilon) * make_bell(BellState::PhiPlus).mat();
  for (BellState b : {BellState::PhiMinus, BellState::PsiPlus, BellState::PsiMinus}) {
    m += (epsilon / 3.0) * make_bell(b).mat();
  }
  return DensityMatrix(2, std::move(m));
}

double bell_fidelity(const DensityMatrix& state, BellState target) {
  if (state.num_qubits() != 2) throw std::invalid_argument("bell_fidelity: need a two-qubit state");
  if (std::abs(state.norm() - 1.0) > 1e-9) {
    throw std::invalid_argument("bell_fidelity: state must be normalized");
  }
  return overlap(state, bell_vector(target));
}

double bell_fidelity_sqrt(const DensityMatrix& state, BellState target) {
  return std::sqrt(std::max(0.0, bell_fidelity(state, target)));
}

std::array<double, 4> bell_diagonal(const DensityMatrix& state) {
  if (state.num_qubits() != 2) throw std::invalid_argument("bell_diagonal: need a two-qubit state");
  std::array<double, 4> d{};
  for (int i = 0; i < 4; ++i) {
    d[i] = overlap(state, bell_vector(static_cast<BellState>(i)));
  }
  return d;
}

double off_bell_diagonal_norm(const DensityMatrix& state) {
  Mat basis(4, 4);
  for (int i = 0; i < 4; ++i) basis.col(i) = bell_vector(static_cast<BellState>(i));
  const Mat in_bell = basis.adjoint() * state.mat() * basis;
  double max_off = 0.0;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      if (i != j) max_off = std::max(max_off, std::abs(in_bell(i, j)));
    }
  }
  return max_off;
}

}  // namespace qnet
