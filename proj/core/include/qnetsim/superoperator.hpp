#pragma once

#include <functional>
#include <vector>

#include "qnetsim/density_matrix.hpp"

namespace qnet {

/// Completely positive map on n qubits in the Choi (process state)
/// representation.
///
/// The Choi state lives on 2n qubits: qubits 0..n-1 are the map output,
/// qubits n..2n-1 the reference copy of the input. For trace-preserving maps
/// the Choi trace is 1; for post-selected branches it is the branch
/// probability.
class Superoperator {
 public:
  Superoperator(int num_qubits, DensityMatrix choi);

  /// Runs `circuit` on the data half (qubits 0..n-1) of n maximally
  /// entangled pairs. The circuit may grow and shrink the register with
  /// ancillas, but must return a 2n-qubit state with the reference qubits
  /// untouched in place n..2n-1.
  static Superoperator extract(
      int num_qubits,
      const std::function<DensityMatrix(const DensityMatrix&)>& circuit);

  int num_qubits() const { return num_qubits_; }
  const DensityMatrix& choi() const { return choi_; }
  double trace() const { return choi_.norm(); }

  /// Kraus terms (K_i, weight p_i) with sum_i p_i K_i rho K_i^dagger the
  /// channel action; each K_i has unit Hilbert-Schmidt normalization scaled
  /// so that trace-preserving channels satisfy sum p_i K_i^dagger K_i = I.
  struct KrausTerm {
    Mat op;
    double weight;
  };
  std::vector<KrausTerm> kraus(double cutoff = 1e-14) const;

  /// Channel action via the Kraus decomposition.
  DensityMatrix apply(const DensityMatrix& input) const;

  /// Applies the channel to the given qubits of a larger register, in place.
  void apply_to(DensityMatrix& state, std::span<const int> targets) const;

  /// Partial trace over the output must equal trace * I / 2^n; returns the
  /// largest deviation (trace-preservation check).
  double trace_preservation_defect() const;

 private:
  int num_qubits_;
  DensityMatrix choi_;
  mutable std::vector<KrausTerm> kraus_cache_;
};

}  // namespace qnet
