#include "doctest.h"

#include <array>
#include <cmath>
#include <random>
#include <vector>

#include "qnetsim/repeater.hpp"

using namespace qnet;

namespace {

DensityMatrix bell_mixture(const std::array<double, 4>& w) {
  Mat m = w[0] * make_bell(BellState::PhiPlus).mat() + w[1] * make_bell(BellState::PhiMinus).mat() +
          w[2] * make_bell(BellState::PsiPlus).mat() + w[3] * make_bell(BellState::PsiMinus).mat();
  return DensityMatrix(2, std::move(m));
}

std::array<double, 4> random_weights(std::mt19937_64& eng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::array<double, 4> w{0.6 + u(eng), 0.2 * u(eng), 0.2 * u(eng), 0.2 * u(eng)};
  const double s = w[0] + w[1] + w[2] + w[3];
  for (double& x : w) x /= s;
  return w;
}

// Bell labels form the Pauli frame group (I, Z, X, Y); swapping convolves
// the label distributions under the Klein four-group product.
std::array<double, 4> label_convolution(const std::array<double, 4>& a,
                                        const std::array<double, 4>& b) {
  static const int prod[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
  std::array<double, 4> out{0, 0, 0, 0};
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) out[prod[i][j]] += a[i] * b[j];
  }
  return out;
}

}  // namespace

TEST_CASE("fuse basics") {
  const DensityMatrix phi = make_bell(BellState::PhiPlus);
  const DensityMatrix swapped = fuse(phi, phi, NoiseModel{});
  CHECK(bell_fidelity(swapped, BellState::PhiPlus) == doctest::Approx(1.0).epsilon(1e-12));

  const DensityMatrix w = werner(0.15);
  const DensityMatrix through = fuse(w, phi, NoiseModel{});
  CHECK((through.mat() - w.mat()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("fuse follows the label algebra") {
  std::mt19937_64 eng(101);
  for (int rep = 0; rep < 8; ++rep) {
    const auto wa = random_weights(eng);
    const auto wb = random_weights(eng);
    const DensityMatrix fused = fuse(bell_mixture(wa), bell_mixture(wb), NoiseModel{});
    CHECK(off_bell_diagonal_norm(fused) < 1e-10);
    const auto expected = label_convolution(wa, wb);
    const auto got = bell_diagonal(fused);
    for (int k = 0; k < 4; ++k) {
      CHECK(std::abs(got[k] - expected[k]) < 1e-12);
    }
  }
}

TEST_CASE("fuse is associative without noise") {
  std::mt19937_64 eng(55);
  const DensityMatrix a = bell_mixture(random_weights(eng));
  const DensityMatrix b = bell_mixture(random_weights(eng));
  const DensityMatrix c = bell_mixture(random_weights(eng));
  const DensityMatrix left = fuse(fuse(a, b, NoiseModel{}), c, NoiseModel{});
  const DensityMatrix right = fuse(a, fuse(b, c, NoiseModel{}), NoiseModel{});
  CHECK((left.mat() - right.mat()).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("fuse chain") {
  const DensityMatrix phi = make_bell(BellState::PhiPlus);
  std::vector<DensityMatrix> perfect(2, phi);
  CHECK(bell_fidelity(fuse_chain(perfect, NoiseModel{}), BellState::PhiPlus) ==
        doctest::Approx(1.0).epsilon(1e-12));

  for (int m : {4, 8, 12}) {
    const double e = 0.1 / m;
    std::vector<DensityMatrix> pairs(m, werner(e));
    const double infid = 1.0 - bell_fidelity(fuse_chain(pairs, NoiseModel{}), BellState::PhiPlus);
    CHECK(std::abs(infid - m * e) < 0.15 * m * e);
  }
  const std::vector<DensityMatrix> none;
  CHECK_THROWS_AS(fuse_chain(none, NoiseModel{}), std::invalid_argument);
}

TEST_CASE("error steering") {
  const DensityMatrix pair = bell_mixture({0.9, 0.01, 0.03, 0.06});
  // target_perm[k] = j moves current channel j into slot k
  const auto desc = tuple_from_state(steer_errors(pair, {2, 1, 0}));
  CHECK(desc.r1 == doctest::Approx(0.06).epsilon(1e-12));
  CHECK(desc.r2 == doctest::Approx(0.03).epsilon(1e-12));
  CHECK(desc.r3 == doctest::Approx(0.01).epsilon(1e-12));

  const auto same = tuple_from_state(steer_errors(pair, {0, 1, 2}));
  CHECK(same.r1 == doctest::Approx(0.01).epsilon(1e-12));

  // steering is a local unitary: total error mass is untouched
  for (const auto& perm : std::vector<std::array<int, 3>>{
           {0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}) {
    CHECK(std::abs(tuple_from_state(steer_errors(pair, perm)).error_sum() - 0.1) < 1e-10);
  }

  CHECK_THROWS_AS(steer_errors(make_bell(BellState::PhiPlus), {0, 0, 1}), std::invalid_argument);
}

TEST_CASE("pipeline noiseless") {
  PipelineConfig cfg;
  cfg.chain_m = 4;
  cfg.chain_p = 4;
  const auto stages = pipeline(cfg, NoiseModel::noiseless(0.0));
  REQUIRE(stages.size() == 5);
  for (const auto& s : stages) {
    CHECK(s.fidelity == doctest::Approx(1.0).epsilon(1e-9));
  }
  CHECK(pipeline_total_cost(stages) == doctest::Approx(6.0 * 4.0 * 4.0).epsilon(1e-9));
}

TEST_CASE("pipeline stage reports are consistent") {
  NoiseModel noise{0.1, 0.0, 1e-3, 5e-4};
  const auto stages = pipeline(PipelineConfig{}, noise);
  REQUIRE(stages.size() == 5);
  for (const auto& s : stages) {
    double sum = s.fidelity;
    for (double c : s.channels) sum += c;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(s.channels[0] >= s.channels[1]);
    CHECK(s.channels[1] >= s.channels[2]);
  }
  // re-purification recovers the stage-(i) fidelity
  CHECK(stages[2].fidelity > stages[0].fidelity - 1e-3);
  CHECK(stages[4].fidelity > stages[0].fidelity - 1e-3);

  PipelineConfig single;
  single.chain_m = 1;
  CHECK(pipeline(single, noise).size() == 1);
}

TEST_CASE("rate budget") {
  LinkBudget link;
  const RateBudget b = rate_budget(link);
  CHECK(b.max_cycle_rate_hz == doctest::Approx(18000.0).epsilon(0.10));
  CHECK(b.loss_db == doctest::Approx(2.89).epsilon(0.004));
  CHECK(b.success_scaling == doctest::Approx(0.5).epsilon(0.03));
  CHECK(b.max_cycle_rate_hz * link.spacing_km * 1000.0 ==
        doctest::Approx(link.light_speed_mps).epsilon(1e-12));
  CHECK(b.advised_spacing_km == doctest::Approx(17.7).epsilon(0.01));

  LinkBudget tiny = link;
  tiny.spacing_km = 1e-9;
  CHECK(rate_budget(tiny).success_scaling == doctest::Approx(1.0).epsilon(1e-9));

  LinkBudget bad = link;
  bad.spacing_km = -1.0;
  CHECK_THROWS_AS(rate_budget(bad), std::invalid_argument);
}

TEST_CASE("memory budget") {
  // exponential model: window = -T2 ln(2 floor - 1)
  const double rate = memory_budget_min_rate_hz(50.0, 8.0, 0.99);
  CHECK(rate == doctest::Approx(8.0 / (-50.0 * std::log(0.98))).epsilon(1e-12));
  CHECK(-50.0 * std::log(0.98) == doctest::Approx(1.01).epsilon(0.01));

  // fixed window reproducing the 0.725 s / > 11 Hz figure
  const double fixed = memory_budget_min_rate_hz(50.0, 8.0, 0.99, DephasingModel::FixedWindow, 0.725);
  CHECK(fixed == doctest::Approx(8.0 / 0.725).epsilon(1e-12));
  CHECK(fixed > 11.0);

  CHECK(memory_budget_min_rate_hz(1e12, 8.0, 0.99) < 1e-9);
  CHECK_THROWS_AS(memory_budget_min_rate_hz(50.0, 8.0, 1.0), std::invalid_argument);
}
