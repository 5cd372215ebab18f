#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "qnetsim/purify.hpp"

using namespace qnet;

TEST_CASE("werner states") {
  CHECK((werner(0.0).mat() - make_bell(BellState::PhiPlus).mat()).cwiseAbs().maxCoeff() < 1e-14);
  const auto t = tuple_from_state(werner(0.1));
  CHECK(t.r1 == doctest::Approx(1.0 / 30).epsilon(1e-12));
  CHECK(t.r2 == doctest::Approx(1.0 / 30).epsilon(1e-12));
  CHECK(t.r3 == doctest::Approx(1.0 / 30).epsilon(1e-12));
  CHECK(bell_fidelity(werner(0.1), BellState::PhiPlus) == doctest::Approx(0.9).epsilon(1e-12));
  const auto diag = bell_diagonal(werner(0.3));
  CHECK(diag[0] == doctest::Approx(0.7));
  CHECK(diag[1] == doctest::Approx(0.1));
  CHECK_THROWS_AS(werner(0.5), std::invalid_argument);
}

TEST_CASE("tuple map") {
  const BellDiagonalTuple raw{0.1 / 3, 0.1 / 3, 0.1 / 3};
  const auto l1 = tuple_map_f(raw, raw);
  CHECK(l1.r1 == doctest::Approx(2.0 * 0.1 / 3).epsilon(1e-12));
  CHECK(l1.r2 == doctest::Approx(2.0 * 0.01 / 9).epsilon(1e-12));
  CHECK(l1.r3 == doctest::Approx(2.0 * 0.01 / 9).epsilon(1e-12));

  const auto zero = tuple_map_f({0, 0, 0}, {0, 0, 0});
  CHECK(zero.error_sum() == 0.0);

  const double e = 0.1;
  const BellDiagonalTuple l2_in{2 * e * e / 9, 2 * e / 3, 2 * e * e / 9};
  const auto l2 = tuple_map_f(l2_in, l2_in);
  CHECK(l2.r1 == doctest::Approx(4 * e * e / 9).epsilon(1e-12));
  CHECK(l2.r2 == doctest::Approx(4 * e * e / 9 + 4 * std::pow(e, 4) / 81).epsilon(1e-12));
  CHECK(l2.r3 == doctest::Approx(8 * std::pow(e, 3) / 27).epsilon(1e-12));
}

TEST_CASE("tuple rotations") {
  const BellDiagonalTuple t{0.1, 0.2, 0.3};
  const Rotation g1[] = {Rotation::G1};
  const auto r = rotate_tuple(t, g1);
  CHECK(r.r1 == 0.2);
  CHECK(r.r2 == 0.1);
  CHECK(r.r3 == 0.3);
  CHECK(rotate_tuple(t, {}).r1 == 0.1);

  // g1 g2 moves the Level-2 output's small channel to the front
  const double e = 0.1;
  const BellDiagonalTuple l2{4 * e * e / 9, 4 * e * e / 9, 8 * e * e * e / 27};
  const Rotation g1g2[] = {Rotation::G1, Rotation::G2};
  const auto moved = rotate_tuple(l2, g1g2);
  CHECK(moved.r1 == doctest::Approx(8 * e * e * e / 27));
  CHECK(moved.r2 == doctest::Approx(4 * e * e / 9));
  CHECK(moved.r3 == doctest::Approx(4 * e * e / 9));
}

TEST_CASE("rotations generate all six channel permutations") {
  const BellDiagonalTuple labels{0.1, 0.2, 0.3};
  const std::vector<std::vector<Rotation>> words = {
      {},
      {Rotation::G1},
      {Rotation::G2},
      {Rotation::G1, Rotation::G2},
      {Rotation::G2, Rotation::G1},
      {Rotation::G1, Rotation::G2, Rotation::G1},
  };
  std::vector<std::array<double, 3>> seen;
  for (const auto& w : words) {
    const auto r = rotate_tuple(labels, w);
    seen.push_back({r.r1, r.r2, r.r3});
  }
  std::sort(seen.begin(), seen.end());
  CHECK(std::unique(seen.begin(), seen.end()) == seen.end());
  CHECK(seen.size() == 6);

  // the physical rotations realize the same permutations on Bell mixtures
  for (const auto& w : words) {
    Mat m = 0.4 * make_bell(BellState::PhiPlus).mat() + 0.1 * make_bell(BellState::PhiMinus).mat() +
            0.2 * make_bell(BellState::PsiPlus).mat() + 0.3 * make_bell(BellState::PsiMinus).mat();
    DensityMatrix pair(2, std::move(m));
    const auto expected = rotate_tuple({0.1, 0.2, 0.3}, w);
    apply_rotation_word(pair, w, NoiseModel{});
    const auto got = tuple_from_state(pair);
    CHECK(got.r1 == doctest::Approx(expected.r1).epsilon(1e-12));
    CHECK(got.r2 == doctest::Approx(expected.r2).epsilon(1e-12));
    CHECK(got.r3 == doctest::Approx(expected.r3).epsilon(1e-12));
  }
}

TEST_CASE("single purification step") {
  const DensityMatrix phi = make_bell(BellState::PhiPlus);
  PurifyBranch perfect = purify_branch(phi, phi, NoiseModel{});
  CHECK(perfect.p_even == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(bell_fidelity(perfect.out, BellState::PhiPlus) == doctest::Approx(1.0).epsilon(1e-12));

  const DensityMatrix w = werner(0.1);
  PurifyBranch b = purify_branch(w, w, NoiseModel{0.1, 0, 0, 0});
  // p_even = (f + r1)^2 + (r2 + r3)^2
  const double p_even = std::pow(0.9 + 1.0 / 30, 2) + std::pow(2.0 / 30, 2);
  CHECK(b.p_even == doctest::Approx(p_even).epsilon(1e-12));
  const double infid = 1.0 - bell_fidelity(b.out, BellState::PhiPlus);
  CHECK(infid == doctest::Approx((2.0 / 3.0) * 0.1).epsilon(0.15));

  PurifyBranch noisy = purify_branch(w, w, NoiseModel{0.1, 0, 1e-3, 5e-4});
  CHECK(bell_fidelity(noisy.out, BellState::PhiPlus) <
        bell_fidelity(b.out, BellState::PhiPlus));

  Rng rng(1);
  PurifyOnceResult once = purify_once_exact(w, w, NoiseModel{0.1, 0, 0, 0}, rng);
  CHECK(once.p_even == doctest::Approx(b.p_even));
}

TEST_CASE("levels match tuple algebra at leading order") {
  const double e = 0.01;
  const NoiseModel noise = NoiseModel::noiseless(e);

  // tolerance 5 eps^{k+1} with k the order of the level's leading term
  const auto check_level = [&](int level, std::array<double, 3> formula, int k) {
    const auto t = tuple_from_state(run_level(level, noise).state);
    const double tol = 5.0 * std::pow(e, k + 1);
    CHECK(std::abs(t.r1 - formula[0]) < tol);
    CHECK(std::abs(t.r2 - formula[1]) < tol);
    CHECK(std::abs(t.r3 - formula[2]) < tol);
  };
  check_level(1, {2 * e / 3, 2 * e * e / 9, 2 * e * e / 9}, 1);
  check_level(2, {4 * e * e / 9, 4 * e * e / 9, 8 * e * e * e / 27}, 2);
  check_level(3, {2 * e * e / 9, 8 * e * e * e / 27, 8 * e * e * e / 27}, 2);
}

TEST_CASE("level monotonicity and structure") {
  for (double e : {0.05, 0.1, 0.2, 0.29}) {
    const NoiseModel noise = NoiseModel::noiseless(e);
    const double i1 = run_level(1, noise).infidelity;
    const double i2 = run_level(2, noise).infidelity;
    const double i3 = run_level(3, noise).infidelity;
    CHECK(i3 < i2);
    CHECK(i2 < i1);
    CHECK(i1 < e);
  }

  // Bell-diagonal in, Bell-diagonal out
  const auto res = run_level(3, NoiseModel::paper(0.1));
  CHECK(off_bell_diagonal_norm(res.state) < 1e-10);

  // odd-parity probabilities vanish with the noise
  const auto clean = run_level(3, NoiseModel::noiseless(1e-4));
  for (double p : clean.odd_probs) CHECK(p < 1e-3);
  CHECK(run_level(1, NoiseModel::noiseless(0.0)).infidelity < 1e-14);
}

TEST_CASE("level 3 headline infidelity") {
  const auto res = run_level(3, NoiseModel::paper(0.1));
  CHECK(res.infidelity == doctest::Approx(0.006).epsilon(0.25));
}

TEST_CASE("markov cost") {
  Rng rng(9);
  const MarkovStats trivial = markov_cost(1, NoiseModel::noiseless(0.0), 100, rng);
  CHECK(trivial.mean_raw_pairs == doctest::Approx(2.0));
  CHECK(trivial.histogram.size() == 1);

  const NoiseModel n1 = NoiseModel::noiseless(0.1);
  const MarkovStats l1 = markov_cost(1, n1, 200000, rng);
  CHECK(expected_raw_pairs(1, n1) == doctest::Approx(2.284).epsilon(0.01));
  CHECK(std::abs(l1.mean_raw_pairs - expected_raw_pairs(1, n1)) <
        3.0 * l1.stderr_raw_pairs);

  const NoiseModel paper = NoiseModel::paper(0.1);
  const MarkovStats l3 = markov_cost(3, paper, 100000, rng);
  CHECK(l3.mean_raw_pairs == doctest::Approx(8.34).epsilon(0.04));
  CHECK(std::abs(l3.mean_raw_pairs - expected_raw_pairs(3, paper)) <
        3.0 * l3.stderr_raw_pairs);
}

TEST_CASE("markov cost is worker-count independent") {
  const NoiseModel noise = NoiseModel::paper(0.1);
  const MarkovStats one = markov_cost_parallel(3, noise, 20000, 77, 1);
  const MarkovStats three = markov_cost_parallel(3, noise, 20000, 77, 3);
  CHECK(one.mean_raw_pairs == three.mean_raw_pairs);
  CHECK(one.histogram == three.histogram);
}
