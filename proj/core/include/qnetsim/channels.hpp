#pragma once

#include <utility>

#include "qnetsim/density_matrix.hpp"
#include "qnetsim/rng.hpp"

namespace qnet {

enum class Basis { Z, X, Y };

/// Single-qubit depolarizing channel:
/// (1-p1) rho + (p1/3) (X rho X + Y rho Y + Z rho Z).
void apply_single_qubit_noise(DensityMatrix& state, int qubit, double p1);

/// Two-qubit depolarizing channel over the 15 non-identity Pauli pairs:
/// (1-p2) rho + (p2/15) sum_{AB != II} (A@B) rho (A@B).
void apply_two_qubit_noise(DensityMatrix& state, int qubit_a, int qubit_b, double p2);

/// Unnormalized state after the measurement reports `reported`, with the
/// measured qubit traced out. The physical projection matches the report
/// with probability (1-pm) and is the opposite one with probability pm.
/// The trace of the result is the probability of that report.
DensityMatrix measurement_branch(const DensityMatrix& state, int qubit, Basis basis,
                                 int reported, double pm);

/// Samples a measurement; returns (reported outcome, renormalized post state
/// with the qubit removed). pm must be in [0, 0.5].
std::pair<int, DensityMatrix> measure_qubit(const DensityMatrix& state, int qubit,
                                            Basis basis, double pm, Rng& rng);

}  // namespace qnet
