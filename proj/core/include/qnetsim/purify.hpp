#pragma once

#include <array>
#include <span>
#include <vector>

#include "qnetsim/bell.hpp"
#include "qnetsim/density_matrix.hpp"
#include "qnetsim/rng.hpp"

namespace qnet {

/// Leading-order shorthand for a Bell-diagonal state:
/// r1 = weight of Phi-, r2 = Psi+, r3 = Psi-; Phi+ carries 1 - r1 - r2 - r3.
struct BellDiagonalTuple {
  double r1 = 0.0;
  double r2 = 0.0;
  double r3 = 0.0;

  double error_sum() const { return r1 + r2 + r3; }
  void validate() const;
};

BellDiagonalTuple tuple_from_state(const DensityMatrix& state);

/// Error rates parameterizing every channel in the protocol simulations.
struct NoiseModel {
  double epsilon = 0.0;  // raw-link infidelity
  double p1 = 0.0;       // single-qubit gate error
  double p2 = 0.0;       // two-qubit gate error
  double pm = 0.0;       // measurement error

  /// The rates used for all headline numbers:
  /// p1 = 1e-6, p2 = 1e-3, pm = 5e-4.
  static NoiseModel paper(double epsilon = 0.1);
  static NoiseModel noiseless(double epsilon = 0.0);
  void validate() const;
};

/// One purification iteration at leading order:
/// (r1+s1, r2 s2 + r3 s3, r2 s3 + r3 s2).
BellDiagonalTuple tuple_map_f(const BellDiagonalTuple& a, const BellDiagonalTuple& b);

/// Local two-sided rotations fixing Phi+. G1 = H (x) H swaps r1 and r2;
/// G2 = S^dag (x) S swaps r2 and r3. Together they act as the full symmetric
/// group on the three error channels.
enum class Rotation { G1, G2 };

/// Applies a rotation word to the tuple. The word is in operator order: the
/// rightmost rotation acts first.
BellDiagonalTuple rotate_tuple(const BellDiagonalTuple& t, std::span<const Rotation> word);

/// Physically applies a rotation word to a pair (qubit 0 at site A, qubit 1
/// at site B), each single-qubit gate followed by depolarizing noise p1.
void apply_rotation_word(DensityMatrix& pair, std::span<const Rotation> word,
                         const NoiseModel& noise);

struct PurifyBranch {
  DensityMatrix out;  // renormalized surviving pair
  double p_even;      // probability of the accepted (even parity) branch
};

/// The 2-to-1 purification step: bilateral CNOTs (kept pair controls, each
/// followed by two-qubit noise), Z measurements of the sacrificed pair with
/// lie rate pm, post-selected on even parity.
PurifyBranch purify_branch(const DensityMatrix& keep, const DensityMatrix& sacrifice,
                           const NoiseModel& noise);

struct PurifyOnceResult {
  bool success;
  DensityMatrix out;
  double p_even;
};

/// Same as purify_branch but samples the post-selection.
PurifyOnceResult purify_once_exact(const DensityMatrix& pair_a, const DensityMatrix& pair_b,
                                   const NoiseModel& noise, Rng& rng);

struct LevelResult {
  DensityMatrix state;             // purified pair (success branches composed)
  double infidelity;               // 1 - <Phi+|rho|Phi+>
  std::array<double, 3> odd_probs; // odd-parity probabilities p_A, p_B, p_C
                                   // (entries beyond the level are 0)
};

/// Deterministic success-branch composition of the Level 1/2/3 protocols on
/// werner(noise.epsilon) raw pairs.
LevelResult run_level(int level, const NoiseModel& noise);

/// Same protocol applied to an arbitrary two-qubit input state in place of
/// the raw Werner pairs (used for re-purification of fused pairs).
LevelResult run_level_on(int level, const DensityMatrix& input, const NoiseModel& noise);

struct MarkovStats {
  double mean_raw_pairs;
  double mean_time_t0;   // all local operations instantaneous, so equal to
                         // the raw-pair count in units of T0
  double stderr_raw_pairs;
  std::vector<std::pair<long, long>> histogram;  // (raw pairs, count)
};

/// Monte Carlo of the protocol restart chain: a failed purification discards
/// both of its inputs and rebuilds them from their own sub-protocols.
MarkovStats markov_cost(int level, const NoiseModel& noise, long trials, Rng& rng);

/// Same chain with one RNG substream per trial, sharded over `workers`
/// threads. Identical (seed, trials) give identical statistics for any
/// worker count.
MarkovStats markov_cost_parallel(int level, const NoiseModel& noise, long trials,
                                 std::uint64_t seed, int workers);

/// Closed-form absorbing-chain expectation of the raw-pair cost.
double expected_raw_pairs(int level, const NoiseModel& noise);
double expected_raw_pairs(int level, const std::array<double, 3>& odd_probs);

}  // namespace qnet
