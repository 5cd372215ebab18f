#include "qnetsim/superoperator.hpp"

#include <Eigen/Eigenvalues>
#include <stdexcept>

#include "qnetsim/bell.hpp"
#include "qnetsim/gates.hpp"

namespace qnet {

Superoperator::Superoperator(int num_qubits, DensityMatrix choi)
    : num_qubits_(num_qubits), choi_(std::move(choi)) {
  if (choi_.num_qubits() != 2 * num_qubits) {
    throw std::invalid_argument("Superoperator: Choi state must live on 2n qubits");
  }
}

Superoperator Superoperator::extract(
    int num_qubits, const std::function<DensityMatrix(const DensityMatrix&)>& circuit) {
  const Eigen::Index d = Eigen::Index(1) << num_qubits;
  // Maximally entangled state between data qubits 0..n-1 and refs n..2n-1.
  Vec omega = Vec::Zero(d * d);
  for (Eigen::Index i = 0; i < d; ++i) omega(i + d * i) = 1.0 / std::sqrt(double(d));
  DensityMatrix input = DensityMatrix::pure(2 * num_qubits, omega);
  DensityMatrix out = circuit(input);
  if (out.num_qubits() != 2 * num_qubits) {
    throw std::invalid_argument("Superoperator::extract: circuit changed the register size");
  }
  return Superoperator(num_qubits, std::move(out));
}

std::vector<Superoperator::KrausTerm> Superoperator::kraus(double cutoff) const {
  if (!kraus_cache_.empty()) return kraus_cache_;
  const Eigen::Index d = Eigen::Index(1) << num_qubits_;
  Eigen::SelfAdjointEigenSolver<Mat> es(choi_.mat());
  std::vector<KrausTerm> terms;
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
    const double lambda = es.eigenvalues()(k);
    if (lambda < cutoff) continue;
    const Vec& v = es.eigenvectors().col(k);
    Mat op(d, d);
    for (Eigen::Index in = 0; in < d; ++in) {
      for (Eigen::Index out = 0; out < d; ++out) {
        op(out, in) = v(out + d * in);
      }
    }
    // Normalize so that weight = probability on a maximally mixed input and
    // sum_i weight_i K_i^dag K_i = I for trace preserving maps.
    const double hs = op.squaredNorm();
    op *= std::sqrt(double(d) / hs);
    terms.push_back({std::move(op), lambda * hs});
  }
  kraus_cache_ = std::move(terms);
  return kraus_cache_;
}

DensityMatrix Superoperator::apply(const DensityMatrix& input) const {
  if (input.num_qubits() != num_qubits_) {
    throw std::invalid_argument("Superoperator::apply: qubit count mismatch");
  }
  const Eigen::Index d = input.dim();
  Mat acc = Mat::Zero(d, d);
  for (const auto& [op, w] : kraus()) {
    acc += w * (op * input.mat() * op.adjoint());
  }
  return DensityMatrix(num_qubits_, std::move(acc));
}

void Superoperator::apply_to(DensityMatrix& state, std::span<const int> targets) const {
  if (static_cast<int>(targets.size()) != num_qubits_) {
    throw std::invalid_argument("Superoperator::apply_to: target count mismatch");
  }
  const Eigen::Index d = state.dim();
  Mat acc = Mat::Zero(d, d);
  for (const auto& [op, w] : kraus()) {
    DensityMatrix term = state;
    apply_operator(term, op, targets);
    acc += w * term.mat();
  }
  state.mat().swap(acc);
}

double Superoperator::trace_preservation_defect() const {
  // Tracing the Choi state over the output half must leave tr * I / 2^n.
  std::vector<int> refs;
  for (int q = num_qubits_; q < 2 * num_qubits_; ++q) refs.push_back(q);
  DensityMatrix reduced = partial_trace(choi_, refs);
  const Eigen::Index d = reduced.dim();
  const Mat expected = (choi_.norm() / double(d)) * Mat::Identity(d, d);
  return (reduced.mat() - expected).cwiseAbs().maxCoeff();
}

}  // namespace qnet
