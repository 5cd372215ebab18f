#pragma once

#include <array>
#include <iosfwd>
#include <vector>

#include "qnetsim/channels.hpp"
#include "qnetsim/pauli.hpp"
#include "qnetsim/purify.hpp"
#include "qnetsim/superoperator.hpp"

namespace qnet {

/// Per-stabilizer-measurement error model: a distribution over
/// (4-qubit Pauli error, lie flag). A lie means the recorded parity is
/// wrong; the Pauli acts on the data qubits after the parity projection.
/// Paulis are stored as class representatives modulo the measured parity
/// operator (ZZZZ or XXXX), which acts trivially after projection.
struct ParityTableEntry {
  PauliString pauli;
  bool lie;
  double probability;
};

struct ParityErrorTable {
  Basis parity_basis = Basis::Z;
  std::vector<ParityTableEntry> entries;

  /// Probabilities sum to 1 within 1e-9; identity/no-lie entry is largest.
  void validate() const;
  double probability_of(const PauliString& pauli, bool lie) const;
  /// 1 - p(identity, no lie).
  double total_error_mass() const;
  /// Total probability of entries with a non-identity Pauli.
  double data_error_mass() const;
  double lie_mass() const;

  /// Stable text format: sorted entries, probabilities to 12 significant
  /// digits; identical inputs serialize to identical bytes.
  void serialize(std::ostream& os) const;
  static ParityErrorTable parse(std::istream& is);
};

enum class StabMethod { Ancilla, Ghz };

/// The purified envoy pair consumed by one remote gate, together with the
/// channel-permutation applied before consumption.
struct RemoteGateResource {
  DensityMatrix pair_state;
  std::array<int, 3> steering{0, 1, 2};
};

/// Teleported cPhase between `app_a` and `app_b` consuming the pair
/// (envoy_a, envoy_b): local cPhase each side with two-qubit noise, X-basis
/// measurement at A and Y-basis at B with lie rate pm, then the
/// outcome-parity-dependent S / S-dagger correction on both application
/// qubits with single-qubit noise. Averages over the four outcome branches
/// and traces out the envoys. envoy_a and envoy_b must be the two highest
/// qubit indices.
DensityMatrix remote_cphase(const DensityMatrix& joint, int app_a, int app_b,
                            int envoy_a, int envoy_b, const NoiseModel& noise);

/// Two-qubit channel implemented by consuming one resource pair; qubit 0 of
/// the channel sits with resource qubit 0 and qubit 1 with resource qubit 1.
/// With as_cnot the target side is conjugated by noisy Hadamards, giving a
/// remote CNOT (control = channel qubit 0).
Superoperator remote_gate_channel(const RemoteGateResource& resource,
                                  const NoiseModel& noise, bool as_cnot);

/// Four-node GHZ state (|0000>+|1111>)/sqrt(2) built by fusing three
/// purified pairs with noisy local CNOTs and measurements.
DensityMatrix ghz_resource(int level, const NoiseModel& noise);

/// Decomposes a conditional parity measurement process into the
/// (Pauli, lie) table. The two inputs are the unnormalized Choi states of
/// the branches reporting even and odd parity (data qubits 0..3, reference
/// qubits 4..7); their traces must sum to 1. Throws if the weight outside
/// the {Pauli x parity projector} span exceeds 1e-6.
ParityErrorTable decompose_parity_superop(const DensityMatrix& choi_report_even,
                                          const DensityMatrix& choi_report_odd,
                                          Basis parity_basis);

/// Builds the stabilizer-measurement error table for the given method,
/// purification level and parity basis. The ancilla method steers the envoy
/// pair so that the dominant resource error becomes a pure lie.
ParityErrorTable build_parity_table(StabMethod method, int level, const NoiseModel& noise,
                                    Basis parity_basis);

}  // namespace qnet
