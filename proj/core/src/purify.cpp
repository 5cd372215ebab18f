#include "qnetsim/purify.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <thread>

#include "qnetsim/channels.hpp"
#include "qnetsim/gates.hpp"

namespace qnet {

void BellDiagonalTuple::validate() const {
  if (r1 < 0.0 || r2 < 0.0 || r3 < 0.0 || error_sum() > 1.0 + 1e-12) {
    throw std::invalid_argument("BellDiagonalTuple: weights out of range");
  }
}

BellDiagonalTuple tuple_from_state(const DensityMatrix& state) {
  const auto d = bell_diagonal(state);
  return {d[1], d[2], d[3]};
}

NoiseModel NoiseModel::paper(double epsilon) { return {epsilon, 1e-6, 1e-3, 5e-4}; }

NoiseModel NoiseModel::noiseless(double epsilon) { return {epsilon, 0.0, 0.0, 0.0}; }

void NoiseModel::validate() const {
  if (epsilon < 0.0 || epsilon >= 0.5) throw std::invalid_argument("NoiseModel: epsilon out of [0,0.5)");
  if (p1 < 0.0 || p1 > 1.0 || p2 < 0.0 || p2 > 1.0 || pm < 0.0 || pm > 1.0) {
    throw std::invalid_argument("NoiseModel: rates out of [0,1]");
  }
}

BellDiagonalTuple tuple_map_f(const BellDiagonalTuple& a, const BellDiagonalTuple& b) {
  return {a.r1 + b.r1, a.r2 * b.r2 + a.r3 * b.r3, a.r2 * b.r3 + a.r3 * b.r2};
}

BellDiagonalTuple rotate_tuple(const BellDiagonalTuple& t, std::span<const Rotation> word) {
  BellDiagonalTuple out = t;
  // rightmost rotation acts first
  for (auto it = word.rbegin(); it != word.rend(); ++it) {
    if (*it == Rotation::G1) {
      std::swap(out.r1, out.r2);
    } else {
      std::swap(out.r2, out.r3);
    }
  }
  return out;
}

void apply_rotation_word(DensityMatrix& pair, std::span<const Rotation> word,
                         const NoiseModel& noise) {
  if (pair.num_qubits() != 2) throw std::invalid_argument("apply_rotation_word: need a pair");
  const int site_a[1] = {0}, site_b[1] = {1};
  for (auto it = word.rbegin(); it != word.rend(); ++it) {
    if (*it == Rotation::G1) {
      apply_unitary(pair, gate_h(), site_a);
      apply_single_qubit_noise(pair, 0, noise.p1);
      apply_unitary(pair, gate_h(), site_b);
      apply_single_qubit_noise(pair, 1, noise.p1);
    } else {
      apply_unitary(pair, gate_s_dagger(), site_a);
      apply_single_qubit_noise(pair, 0, noise.p1);
      apply_unitary(pair, gate_s(), site_b);
      apply_single_qubit_noise(pair, 1, noise.p1);
    }
  }
}

PurifyBranch purify_branch(const DensityMatrix& keep, const DensityMatrix& sacrifice,
                           const NoiseModel& noise) {
  if (keep.num_qubits() != 2 || sacrifice.num_qubits() != 2) {
    throw std::invalid_argument("purify_branch: inputs must be two-qubit pairs");
  }
  // qubits: 0,1 = kept pair (A,B); 2,3 = sacrificed pair (A,B)
  DensityMatrix joint = keep.tensor(sacrifice);
  const int cnot_a[2] = {0, 2}, cnot_b[2] = {1, 3};
  apply_unitary(joint, gate_cnot(), cnot_a);
  apply_two_qubit_noise(joint, 0, 2, noise.p2);
  apply_unitary(joint, gate_cnot(), cnot_b);
  apply_two_qubit_noise(joint, 1, 3, noise.p2);

  Mat acc;
  double p_even = 0.0;
  for (int outcome : {0, 1}) {
    DensityMatrix b = measurement_branch(joint, 3, Basis::Z, outcome, noise.pm);
    b = measurement_branch(b, 2, Basis::Z, outcome, noise.pm);
    p_even += b.norm();
    if (acc.size() == 0) {
      acc = b.mat();
    } else {
      acc += b.mat();
    }
  }
  DensityMatrix out(2, acc / p_even);
  return {std::move(out), p_even};
}

PurifyOnceResult purify_once_exact(const DensityMatrix& pair_a, const DensityMatrix& pair_b,
                                   const NoiseModel& noise, Rng& rng) {
  PurifyBranch b = purify_branch(pair_a, pair_b, noise);
  const bool success = rng.uniform() < b.p_even;
  return {success, std::move(b.out), b.p_even};
}

namespace {

LevelResult run_levels_impl(int level, const DensityMatrix& raw, const NoiseModel& noise) {
  if (level < 1 || level > 3) throw std::invalid_argument("run_level: level must be 1, 2 or 3");
  noise.validate();
  LevelResult res{raw, 0.0, {0.0, 0.0, 0.0}};

  PurifyBranch l1 = purify_branch(raw, raw, noise);
  res.odd_probs[0] = 1.0 - l1.p_even;
  res.state = l1.out;

  if (level >= 2) {
    DensityMatrix rotated = l1.out;
    const Rotation g1[] = {Rotation::G1};
    apply_rotation_word(rotated, g1, noise);
    PurifyBranch l2 = purify_branch(rotated, rotated, noise);
    res.odd_probs[1] = 1.0 - l2.p_even;
    res.state = l2.out;

    if (level == 3) {
      DensityMatrix upper = l2.out;
      const Rotation g1g2[] = {Rotation::G1, Rotation::G2};
      apply_rotation_word(upper, g1g2, noise);
      DensityMatrix lower = l1.out;
      apply_rotation_word(lower, g1, noise);
      PurifyBranch l3 = purify_branch(upper, lower, noise);
      res.odd_probs[2] = 1.0 - l3.p_even;
      res.state = l3.out;
    }
  }
  res.infidelity = 1.0 - bell_fidelity(res.state, BellState::PhiPlus);
  return res;
}

}  // namespace

LevelResult run_level(int level, const NoiseModel& noise) {
  return run_levels_impl(level, werner(noise.epsilon), noise);
}

LevelResult run_level_on(int level, const DensityMatrix& input, const NoiseModel& noise) {
  return run_levels_impl(level, input, noise);
}

namespace {

// A failed purification discards both inputs and rebuilds them from their
// own sub-protocols; sibling states not involved in the failure are kept.
long sample_raw_pairs(int level, const std::array<double, 3>& odd, Rng& rng) {
  long raw = 0;
  auto build_l1 = [&] {
    do {
      raw += 2;
    } while (rng.uniform() < odd[0]);
  };
  auto build_l2 = [&] {
    do {
      build_l1();
      build_l1();
    } while (rng.uniform() < odd[1]);
  };
  auto build_l3 = [&] {
    do {
      build_l2();
      build_l1();
    } while (rng.uniform() < odd[2]);
  };
  if (level == 1) build_l1();
  else if (level == 2) build_l2();
  else build_l3();
  return raw;
}

MarkovStats finalize_stats(const std::map<long, long>& hist, long trials) {
  double sum = 0.0, sum_sq = 0.0;
  for (const auto& [raw, count] : hist) {
    sum += double(raw) * double(count);
    sum_sq += double(raw) * double(raw) * double(count);
  }
  const double mean = sum / double(trials);
  const double var = std::max(0.0, sum_sq / double(trials) - mean * mean);
  MarkovStats stats;
  stats.mean_raw_pairs = mean;
  stats.mean_time_t0 = mean;
  stats.stderr_raw_pairs = std::sqrt(var / double(trials));
  stats.histogram.assign(hist.begin(), hist.end());
  return stats;
}

}  // namespace

MarkovStats markov_cost(int level, const NoiseModel& noise, long trials, Rng& rng) {
  if (trials < 1) throw std::invalid_argument("markov_cost: trials must be >= 1");
  const auto odd = run_level(level, noise).odd_probs;
  std::map<long, long> hist;
  for (long t = 0; t < trials; ++t) {
    hist[sample_raw_pairs(level, odd, rng)] += 1;
  }
  return finalize_stats(hist, trials);
}

MarkovStats markov_cost_parallel(int level, const NoiseModel& noise, long trials,
                                 std::uint64_t seed, int workers) {
  if (trials < 1) throw std::invalid_argument("markov_cost: trials must be >= 1");
  if (workers < 1) throw std::invalid_argument("markov_cost: workers must be >= 1");
  const auto odd = run_level(level, noise).odd_probs;
  workers = int(std::min<long>(workers, trials));
  std::vector<std::map<long, long>> shards(workers);
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (long t = w; t < trials; t += workers) {
        Rng rng = Rng::substream(seed, std::uint64_t(t));
        shards[w][sample_raw_pairs(level, odd, rng)] += 1;
      }
    });
  }
  for (auto& th : pool) th.join();
  std::map<long, long> hist;
  for (const auto& shard : shards) {
    for (const auto& [raw, count] : shard) hist[raw] += count;
  }
  return finalize_stats(hist, trials);
}

double expected_raw_pairs(int level, const std::array<double, 3>& odd_probs) {
  const double e1 = 2.0 / (1.0 - odd_probs[0]);
  if (level == 1) return e1;
  const double e2 = 2.0 * e1 / (1.0 - odd_probs[1]);
  if (level == 2) return e2;
  return (e2 + e1) / (1.0 - odd_probs[2]);
}

double expected_raw_pairs(int level, const NoiseModel& noise) {
  return expected_raw_pairs(level, run_level(level, noise).odd_probs);
}

}  // namespace qnet
