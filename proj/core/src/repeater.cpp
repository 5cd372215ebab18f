#include "qnetsim/repeater.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "qnetsim/channels.hpp"
#include "qnetsim/gates.hpp"
#include "qnetsim/pauli.hpp"

namespace qnet {

DensityMatrix fuse(const DensityMatrix& pair_ab, const DensityMatrix& pair_bc,
                   const NoiseModel& noise) {
  if (pair_ab.num_qubits() != 2 || pair_bc.num_qubits() != 2) {
    throw std::invalid_argument("fuse: inputs must be two-qubit pairs");
  }
  // qubits: 0 = A, 1 = B (from A-B pair), 2 = B (from B-C pair), 3 = C
  DensityMatrix joint = pair_ab.tensor(pair_bc);
  const int cnot_t[2] = {1, 2};
  apply_unitary(joint, gate_cnot(), cnot_t);
  apply_two_qubit_noise(joint, 1, 2, noise.p2);
  const int h_t[1] = {1};
  apply_unitary(joint, gate_h(), h_t);
  apply_single_qubit_noise(joint, 1, noise.p1);

  Mat acc;
  for (int m1 : {0, 1}) {
    for (int m2 : {0, 1}) {
      // Corrections are classical frame updates keyed to the actual
      // projection; the measured qubits are discarded, so reporting errors
      // cannot touch the surviving pair.
      DensityMatrix b = measurement_branch(joint, 2, Basis::Z, m2, 0.0);
      b = measurement_branch(b, 1, Basis::Z, m1, 0.0);
      // frame correction Z^m1 X^m2 on C (qubit 1 after the trace-outs)
      const int c_t[1] = {1};
      if (m2) apply_pauli_conj(b, PauliString({PauliLetter::X}), c_t);
      if (m1) apply_pauli_conj(b, PauliString({PauliLetter::Z}), c_t);
      if (acc.size() == 0) acc = b.mat();
      else acc += b.mat();
    }
  }
  return DensityMatrix(2, std::move(acc));
}

DensityMatrix fuse_chain(std::span<const DensityMatrix> pairs, const NoiseModel& noise) {
  if (pairs.empty()) throw std::invalid_argument("fuse_chain: no pairs");
  DensityMatrix acc = pairs[0];
  for (std::size_t i = 1; i < pairs.size(); ++i) {
    acc = fuse(acc, pairs[i], noise);
  }
  return acc;
}

namespace {

// Word (operator order) realizing new[k] = old[perm[k]] on the error channels.
std::vector<Rotation> word_for_permutation(const std::array<int, 3>& perm) {
  const std::vector<std::vector<Rotation>> words = {
      {},
      {Rotation::G1},
      {Rotation::G2},
      {Rotation::G1, Rotation::G2},
      {Rotation::G2, Rotation::G1},
      {Rotation::G1, Rotation::G2, Rotation::G1},
  };
  const BellDiagonalTuple labels{1.0 / 8, 2.0 / 8, 3.0 / 8};
  for (const auto& w : words) {
    const BellDiagonalTuple r = rotate_tuple(labels, w);
    const std::array<double, 3> got{r.r1, r.r2, r.r3};
    const std::array<double, 3> want{(perm[0] + 1) / 8.0, (perm[1] + 1) / 8.0,
                                     (perm[2] + 1) / 8.0};
    if (got == want) return w;
  }
  throw std::invalid_argument("steer_errors: target order is not a permutation of {0,1,2}");
}

std::array<double, 3> channels_sorted(const DensityMatrix& state) {
  const auto t = tuple_from_state(state);
  std::array<double, 3> c{t.r1, t.r2, t.r3};
  std::sort(c.begin(), c.end(), std::greater<>());
  return c;
}

}  // namespace

DensityMatrix steer_errors(const DensityMatrix& pair, const std::array<int, 3>& target_perm) {
  if (off_bell_diagonal_norm(pair) > 1e-8) {
    throw std::invalid_argument("steer_errors: input is not Bell-diagonal");
  }
  DensityMatrix out = pair;
  apply_rotation_word(out, word_for_permutation(target_perm), NoiseModel{});
  return out;
}

SteeredPurify steer_and_purify(const DensityMatrix& pair, int level, const NoiseModel& noise) {
  if (level < 1 || level > 3) throw std::invalid_argument("steer_and_purify: level must be 1..3");
  noise.validate();
  const std::array<std::array<int, 3>, 6> perms = {{{0, 1, 2},
                                                    {0, 2, 1},
                                                    {1, 0, 2},
                                                    {1, 2, 0},
                                                    {2, 0, 1},
                                                    {2, 1, 0}}};
  long combos = 1;
  for (int r = 0; r < level; ++r) combos *= 6;
  SteeredPurify best;
  bool first = true;
  for (long word = 0; word < combos; ++word) {
    DensityMatrix state = pair;
    DensityMatrix steered_first;
    std::array<double, 3> odd{0.0, 0.0, 0.0};
    long digits = word;
    std::array<int, 3> first_perm{0, 1, 2};
    for (int r = 0; r < level; ++r) {
      const auto& p = perms[digits % 6];
      digits /= 6;
      state = steer_errors(state, p);
      if (r == 0) {
        steered_first = state;
        first_perm = p;
      }
      PurifyBranch b = purify_branch(state, state, noise);
      odd[r] = 1.0 - b.p_even;
      state = std::move(b.out);
    }
    const double infid = 1.0 - bell_fidelity(state, BellState::PhiPlus);
    if (first || infid < best.purified.infidelity) {
      best = {std::move(steered_first), {std::move(state), infid, odd}, first_perm};
      first = false;
    }
  }
  return best;
}

std::vector<ChainStageReport> pipeline(const PipelineConfig& config, const NoiseModel& noise) {
  if (config.initial_level < 1 || config.initial_level > 3 || config.repurify_level < 1 ||
      config.repurify_level > 3 || config.chain_m < 1 || config.chain_p < 1) {
    throw std::invalid_argument("pipeline: invalid configuration");
  }
  NoiseModel local = noise;
  if (!config.include_pm) local.pm = 0.0;
  local.validate();
  NoiseModel pur = local;
  pur.p2 = std::min(1.0, local.p2 * config.purify_p2_scale);

  std::vector<ChainStageReport> reports;
  LevelResult initial = run_level(config.initial_level, pur);
  reports.push_back({"i", 1.0 - initial.infidelity, channels_sorted(initial.state),
                     expected_raw_pairs(config.initial_level, initial.odd_probs)});
  if (config.chain_m <= 1) return reports;

  std::vector<DensityMatrix> chain(config.chain_m, initial.state);
  DensityMatrix fused = fuse_chain(chain, local);
  reports.push_back({"ii", bell_fidelity(fused, BellState::PhiPlus), channels_sorted(fused), {}});

  SteeredPurify st3 = steer_and_purify(fused, config.repurify_level, pur);
  reports.push_back({"iii", 1.0 - st3.purified.infidelity, channels_sorted(st3.purified.state),
                     expected_raw_pairs(config.repurify_level, st3.purified.odd_probs)});

  std::vector<DensityMatrix> chain_p(config.chain_p, st3.purified.state);
  DensityMatrix fused_p = fuse_chain(chain_p, local);
  reports.push_back({"iv", bell_fidelity(fused_p, BellState::PhiPlus), channels_sorted(fused_p), {}});

  SteeredPurify st5 = steer_and_purify(fused_p, config.repurify_level, pur);
  reports.push_back({"v", 1.0 - st5.purified.infidelity, channels_sorted(st5.purified.state),
                     expected_raw_pairs(config.repurify_level, st5.purified.odd_probs)});
  return reports;
}

double pipeline_total_cost(const std::vector<ChainStageReport>& stages) {
  double total = 1.0;
  for (const auto& s : stages) {
    if (s.cost_factor) total *= *s.cost_factor;
  }
  return total;
}

void LinkBudget::validate() const {
  if (spacing_km <= 0.0 || loss_db_per_km <= 0.0 || attempt_rate_hz <= 0.0 ||
      light_speed_mps <= 0.0) {
    throw std::invalid_argument("LinkBudget: all parameters must be positive");
  }
}

RateBudget rate_budget(const LinkBudget& link) {
  link.validate();
  // Photons only travel to the measuring station mid-distance; detecting two
  // photons makes the loss penalty quadratic, i.e. the full per-km rate.
  const double factor = link.two_photon ? 1.0 : 0.5;
  RateBudget b;
  b.loss_db = factor * link.loss_db_per_km * link.spacing_km;
  b.success_scaling = std::pow(10.0, -b.loss_db / 10.0);
  b.max_cycle_rate_hz = link.light_speed_mps / (link.spacing_km * 1000.0);
  b.advised_spacing_km = 10.0 * std::log10(2.0) / (factor * link.loss_db_per_km);
  return b;
}

double memory_budget_min_rate_hz(double t2_seconds, double purification_cost_pairs,
                                 double fidelity_floor, DephasingModel model,
                                 double window_s) {
  if (t2_seconds <= 0.0 || purification_cost_pairs <= 0.0) {
    throw std::invalid_argument("memory_budget: inputs must be positive");
  }
  if (fidelity_floor >= 1.0) {
    throw std::invalid_argument("memory_budget: fidelity floor must be < 1");
  }
  double window;
  switch (model) {
    case DephasingModel::FixedWindow:
      if (window_s <= 0.0) throw std::invalid_argument("memory_budget: window must be positive");
      window = window_s;
      break;
    case DephasingModel::Exponential: {
      // fidelity(t) = (1 + exp(-t/T2)) / 2
      const double arg = 2.0 * fidelity_floor - 1.0;
      if (arg <= 0.0) return 0.0;
      window = -t2_seconds * std::log(arg);
      break;
    }
    case DephasingModel::Gaussian: {
      const double arg = 2.0 * fidelity_floor - 1.0;
      if (arg <= 0.0) return 0.0;
      window = t2_seconds * std::sqrt(-std::log(arg));
      break;
    }
    default:
      throw std::logic_error("memory_budget: bad model");
  }
  if (!std::isfinite(window)) return 0.0;
  return purification_cost_pairs / window;
}

}  // namespace qnet
