#pragma once

#include <span>

#include "qnetsim/density_matrix.hpp"

namespace qnet {

// Fixed single- and two-qubit gate matrices.
Mat gate_identity2();
Mat gate_h();
Mat gate_s();
Mat gate_s_dagger();
Mat gate_x();
Mat gate_y();
Mat gate_z();
/// CNOT with qubit order {control, target} in the little-endian convention
/// used by apply_unitary targets.
Mat gate_cnot();
Mat gate_cphase();

enum class GateKind { H, S, SDagger, X, Y, Z, CNOT, CPHASE, Custom };

/// A gate application: kind + target qubits (+ explicit matrix for Custom).
struct GateOp {
  GateKind kind = GateKind::Custom;
  std::vector<int> targets;
  Mat custom;  // used only when kind == Custom

  Mat matrix() const;
  /// Throws std::invalid_argument on non-unitary matrices or bad targets.
  void validate(int num_qubits) const;
};

/// In-place rho -> U rho U^dagger. `u` is 2^k x 2^k acting on targets[0..k-1];
/// bit j of u's index corresponds to targets[j].
void apply_unitary(DensityMatrix& state, const Mat& u, std::span<const int> targets);

/// In-place rho -> K rho K^dagger for an arbitrary (not necessarily unitary)
/// operator K on the target qubits.
void apply_operator(DensityMatrix& state, const Mat& k, std::span<const int> targets);

void apply_gate(DensityMatrix& state, const GateOp& gate);

/// Fast path for diagonal unitaries (e.g. cPhase): O(dim^2).
void apply_diagonal_unitary(DensityMatrix& state, const Vec& diag,
                            std::span<const int> targets);

}  // namespace qnet
