#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qnetsim/density_matrix.hpp"

namespace qnet {

enum class PauliLetter : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

/// Tensor product of single-qubit Paulis, one letter per qubit.
class PauliString {
 public:
  PauliString() = default;
  explicit PauliString(std::vector<PauliLetter> letters);
  /// Parse from e.g. "IXYZ" (letter i applies to qubit i).
  static PauliString parse(const std::string& text);
  static PauliString identity(int num_qubits);

  int num_qubits() const { return static_cast<int>(letters_.size()); }
  PauliLetter letter(int qubit) const { return letters_[qubit]; }
  const std::vector<PauliLetter>& letters() const { return letters_; }

  bool is_identity() const;
  int weight() const;  // number of non-identity letters
  std::string str() const;

  /// Product with another string, ignoring the overall phase.
  PauliString times_up_to_phase(const PauliString& other) const;

  /// Dense matrix representation (2^n x 2^n).
  Mat matrix() const;

  bool operator==(const PauliString& other) const = default;

 private:
  std::vector<PauliLetter> letters_;
};

/// In-place P rho P^dagger restricted to the listed qubits; `p` has one
/// letter per entry of `targets`. O(dim^2), no temporaries.
void apply_pauli_conj(DensityMatrix& state, const PauliString& p,
                      std::span<const int> targets);

}  // namespace qnet
