#include "qnetsim/toric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <thread>

#include "qnetsim/matching.hpp"

namespace qnet {

ToricLattice::ToricLattice(int l) : l_(l) {
  if (l < 2) throw std::invalid_argument("ToricLattice: need l >= 2");
}

std::array<int, 4> ToricLattice::star(int r, int c) const {
  return {h_edge(r, c), h_edge(r, c - 1), v_edge(r, c), v_edge(r - 1, c)};
}

std::array<int, 4> ToricLattice::plaquette(int r, int c) const {
  return {h_edge(r, c), h_edge(r + 1, c), v_edge(r, c), v_edge(r, c + 1)};
}

namespace {

std::uint8_t parity_over(const BitVec& error, const std::array<int, 4>& edges) {
  std::uint8_t p = 0;
  for (int e : edges) p ^= error[e];
  return p;
}

}  // namespace

BitVec star_syndrome(const ToricLattice& lat, const BitVec& x_error) {
  BitVec s(lat.num_checks());
  for (int r = 0; r < lat.l(); ++r) {
    for (int c = 0; c < lat.l(); ++c) {
      s[r * lat.l() + c] = parity_over(x_error, lat.star(r, c));
    }
  }
  return s;
}

BitVec plaquette_syndrome(const ToricLattice& lat, const BitVec& z_error) {
  BitVec s(lat.num_checks());
  for (int r = 0; r < lat.l(); ++r) {
    for (int c = 0; c < lat.l(); ++c) {
      s[r * lat.l() + c] = parity_over(z_error, lat.plaquette(r, c));
    }
  }
  return s;
}

bool logical_fault_from_x(const ToricLattice& lat, const BitVec& x_error) {
  // X chains are vertex-to-vertex; a residual cycle is a fault when it winds
  // the torus, i.e. crosses a column of horizontal edges or a row of vertical
  // edges an odd number of times. Both cuts are invariant under adding
  // plaquette boundaries.
  std::uint8_t col_cut = 0, row_cut = 0;
  for (int r = 0; r < lat.l(); ++r) col_cut ^= x_error[lat.h_edge(r, 0)];
  for (int c = 0; c < lat.l(); ++c) row_cut ^= x_error[lat.v_edge(0, c)];
  return col_cut || row_cut;
}

bool logical_fault_from_z(const ToricLattice& lat, const BitVec& z_error) {
  // Z chains are face-to-face; the cuts dual to the above, invariant under
  // adding star edge sets.
  std::uint8_t row_cut = 0, col_cut = 0;
  for (int c = 0; c < lat.l(); ++c) row_cut ^= z_error[lat.h_edge(0, c)];
  for (int r = 0; r < lat.l(); ++r) col_cut ^= z_error[lat.v_edge(r, 0)];
  return row_cut || col_cut;
}

std::vector<std::pair<int, int>> match_defects(const ToricLattice& lat,
                                               const std::vector<Defect>& defects) {
  const int n = static_cast<int>(defects.size());
  if (n % 2 != 0) throw std::invalid_argument("match_defects: odd defect count");
  if (n == 0) return {};
  auto periodic = [&](int a, int b) {
    const int d = std::abs(a - b) % lat.l();
    return std::min(d, lat.l() - d);
  };
  std::vector<std::vector<long long>> dist(n, std::vector<long long>(n, 0));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      dist[i][j] = periodic(defects[i].r, defects[j].r) + periodic(defects[i].c, defects[j].c) +
                   std::abs(defects[i].t - defects[j].t);
    }
  }
  const std::vector<int> mate = min_weight_perfect_matching(dist);
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < n; ++i) {
    if (mate[i] > i) pairs.emplace_back(i, mate[i]);
  }
  return pairs;
}

void apply_correction_path(const ToricLattice& lat, CheckType type, const Defect& a,
                           const Defect& b, BitVec& error) {
  const int l = lat.l();
  int r = lat.wrap(a.r), c = lat.wrap(a.c);
  const int tr = lat.wrap(b.r), tc = lat.wrap(b.c);
  const int down = lat.wrap(tr - r);
  const int row_steps = std::min(down, l - down);
  const int row_dir = (down <= l - down) ? 1 : -1;
  for (int i = 0; i < row_steps; ++i) {
    const int next = lat.wrap(r + row_dir);
    const int edge = (type == CheckType::Star) ? lat.v_edge(std::min(r, r + row_dir), c)
                                               : lat.h_edge(std::max(r, r + row_dir), c);
    error[edge] ^= 1;
    r = next;
  }
  const int right = lat.wrap(tc - c);
  const int col_steps = std::min(right, l - right);
  const int col_dir = (right <= l - right) ? 1 : -1;
  for (int i = 0; i < col_steps; ++i) {
    const int next = lat.wrap(c + col_dir);
    const int edge = (type == CheckType::Star) ? lat.h_edge(r, std::min(c, c + col_dir))
                                               : lat.v_edge(r, std::max(c, c + col_dir));
    error[edge] ^= 1;
    c = next;
  }
}

namespace {

// Error table flattened for fast sampling.
struct CompiledTable {
  std::vector<double> cum;
  std::vector<std::uint8_t> xmask, zmask, lie;
  double total = 0.0;

  explicit CompiledTable(const ParityErrorTable& table) {
    table.validate();
    for (const auto& e : table.entries) {
      std::uint8_t x = 0, z = 0;
      for (int q = 0; q < 4; ++q) {
        const PauliLetter p = e.pauli.letter(q);
        if (p == PauliLetter::X || p == PauliLetter::Y) x |= std::uint8_t(1u << q);
        if (p == PauliLetter::Z || p == PauliLetter::Y) z |= std::uint8_t(1u << q);
      }
      total += e.probability;
      cum.push_back(total);
      xmask.push_back(x);
      zmask.push_back(z);
      lie.push_back(e.lie ? 1 : 0);
    }
  }

  std::size_t sample(Rng& rng) const {
    const double u = rng.uniform() * total;
    return std::upper_bound(cum.begin(), cum.end(), u) - cum.begin();
  }
};

void apply_masks(const CompiledTable& t, std::size_t k, const std::array<int, 4>& edges,
                 BitVec& xerr, BitVec& zerr) {
  for (int q = 0; q < 4; ++q) {
    if (t.xmask[k] & (1u << q)) xerr[edges[q]] ^= 1;
    if (t.zmask[k] & (1u << q)) zerr[edges[q]] ^= 1;
  }
}

}  // namespace

TrialOutcome logical_error_trial(const ToricLattice& lat, const ParityErrorTable& star_table,
                                 const ParityErrorTable& plaquette_table, int rounds, Rng& rng) {
  if (star_table.parity_basis != Basis::Z || plaquette_table.parity_basis != Basis::X) {
    throw std::invalid_argument("logical_error_trial: table bases must be Z (star), X (plaquette)");
  }
  if (rounds < 1) throw std::invalid_argument("logical_error_trial: need >= 1 round");
  const CompiledTable star_noise(star_table);
  const CompiledTable plaq_noise(plaquette_table);
  const int l = lat.l();
  BitVec xerr(lat.num_edges(), 0), zerr(lat.num_edges(), 0);
  BitVec prev_star(lat.num_checks(), 0), prev_plaq(lat.num_checks(), 0);
  std::vector<Defect> star_defects, plaq_defects;

  for (int t = 0; t < rounds; ++t) {
    for (int r = 0; r < l; ++r) {
      for (int c = 0; c < l; ++c) {
        const auto edges = lat.star(r, c);
        const std::size_t k = star_noise.sample(rng);
        const std::uint8_t reported = parity_over(xerr, edges) ^ star_noise.lie[k];
        if (reported != prev_star[r * l + c]) star_defects.push_back({r, c, t});
        prev_star[r * l + c] = reported;
        apply_masks(star_noise, k, edges, xerr, zerr);
      }
    }
    for (int r = 0; r < l; ++r) {
      for (int c = 0; c < l; ++c) {
        const auto edges = lat.plaquette(r, c);
        const std::size_t k = plaq_noise.sample(rng);
        const std::uint8_t reported = parity_over(zerr, edges) ^ plaq_noise.lie[k];
        if (reported != prev_plaq[r * l + c]) plaq_defects.push_back({r, c, t});
        prev_plaq[r * l + c] = reported;
        apply_masks(plaq_noise, k, edges, xerr, zerr);
      }
    }
  }
  // final ideal readout round
  for (int r = 0; r < l; ++r) {
    for (int c = 0; c < l; ++c) {
      if (parity_over(xerr, lat.star(r, c)) != prev_star[r * l + c]) {
        star_defects.push_back({r, c, rounds});
      }
      if (parity_over(zerr, lat.plaquette(r, c)) != prev_plaq[r * l + c]) {
        plaq_defects.push_back({r, c, rounds});
      }
    }
  }

  for (const auto& [i, j] : match_defects(lat, star_defects)) {
    apply_correction_path(lat, CheckType::Star, star_defects[i], star_defects[j], xerr);
  }
  for (const auto& [i, j] : match_defects(lat, plaq_defects)) {
    apply_correction_path(lat, CheckType::Plaquette, plaq_defects[i], plaq_defects[j], zerr);
  }
  return {logical_fault_from_x(lat, xerr), logical_fault_from_z(lat, zerr)};
}

double ThresholdPoint::failure_stderr() const {
  if (trials <= 0) return 0.0;
  const double p = failure_rate();
  return std::sqrt(p * (1.0 - p) / double(trials));
}

namespace {

double log_rate(long failures, long trials) {
  return std::log(std::max(double(failures), 0.5) / double(trials));
}

// Crossing of log failure-rate curves of one size pair on a shared grid.
std::optional<double> crossing_for_pair(const std::vector<double>& eps,
                                        const std::vector<double>& delta) {
  for (std::size_t i = 0; i + 1 < eps.size(); ++i) {
    if (delta[i] == 0.0) return eps[i];
    if (delta[i] * delta[i + 1] < 0.0) {
      const double f = -delta[i] / (delta[i + 1] - delta[i]);
      return eps[i] + f * (eps[i + 1] - eps[i]);
    }
  }
  if (!delta.empty() && delta.back() == 0.0) return eps.back();
  return std::nullopt;
}

std::optional<double> crossing_once(const std::vector<ThresholdPoint>& points,
                                    const std::vector<long>& failures) {
  std::vector<int> sizes;
  std::vector<double> grid;
  for (const auto& p : points) {
    if (std::find(sizes.begin(), sizes.end(), p.lattice) == sizes.end()) sizes.push_back(p.lattice);
    if (std::find(grid.begin(), grid.end(), p.epsilon) == grid.end()) grid.push_back(p.epsilon);
  }
  std::sort(sizes.begin(), sizes.end());
  std::sort(grid.begin(), grid.end());
  auto lookup = [&](int lattice, double eps) -> std::optional<double> {
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (points[i].lattice == lattice && points[i].epsilon == eps) {
        return log_rate(failures[i], points[i].trials);
      }
    }
    return std::nullopt;
  };
  double sum = 0.0;
  int found = 0;
  for (std::size_t s = 0; s + 1 < sizes.size(); ++s) {
    std::vector<double> eps, delta;
    for (double e : grid) {
      const auto lo = lookup(sizes[s], e);
      const auto hi = lookup(sizes[s + 1], e);
      if (!lo || !hi) continue;
      eps.push_back(e);
      delta.push_back(*hi - *lo);
    }
    if (const auto x = crossing_for_pair(eps, delta)) {
      sum += *x;
      ++found;
    }
  }
  if (found == 0) return std::nullopt;
  return sum / found;
}

}  // namespace

CrossingEstimate estimate_crossing(const std::vector<ThresholdPoint>& points, int bootstrap,
                                   std::uint64_t seed) {
  std::vector<long> observed;
  for (const auto& p : points) observed.push_back(p.failures);
  const auto center = crossing_once(points, observed);
  if (!center) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    return {nan, nan, nan};
  }
  std::vector<double> replicates;
  for (int b = 0; b < bootstrap; ++b) {
    Rng rng = Rng::substream(seed, 0xb0075742ull + std::uint64_t(b));
    std::vector<long> resampled(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
      std::binomial_distribution<long> draw(points[i].trials, points[i].failure_rate());
      resampled[i] = draw(rng.engine());
    }
    if (const auto x = crossing_once(points, resampled)) replicates.push_back(*x);
  }
  CrossingEstimate est{*center, *center, *center};
  if (replicates.size() >= 20) {
    std::sort(replicates.begin(), replicates.end());
    const auto pick = [&](double q) {
      const std::size_t i = std::min(replicates.size() - 1,
                                     std::size_t(q * double(replicates.size() - 1) + 0.5));
      return replicates[i];
    };
    est.ci_low = pick(0.025);
    est.ci_high = pick(0.975);
  }
  return est;
}

ThresholdResult threshold_scan(const ThresholdConfig& config) {
  if (config.lattice_sizes.empty() || config.epsilons.empty() || config.trials < 1) {
    throw std::invalid_argument("threshold_scan: empty scan");
  }
  if (config.workers < 1) throw std::invalid_argument("threshold_scan: workers must be >= 1");
  ThresholdResult result;
  for (std::size_t ie = 0; ie < config.epsilons.size(); ++ie) {
    const NoiseModel noise{config.epsilons[ie], config.p1, config.p2, config.pm};
    const ParityErrorTable star_table =
        build_parity_table(config.method, config.level, noise, Basis::Z);
    const ParityErrorTable plaq_table =
        build_parity_table(config.method, config.level, noise, Basis::X);
    for (std::size_t il = 0; il < config.lattice_sizes.size(); ++il) {
      const ToricLattice lat(config.lattice_sizes[il]);
      const int rounds = config.rounds_per_l * lat.l();
      const int workers = int(std::min<long>(config.workers, config.trials));
      std::vector<long> shard_failures(workers, 0);
      std::vector<std::thread> pool;
      for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
          for (long trial = w; trial < config.trials; trial += workers) {
            const std::uint64_t stream =
                (std::uint64_t(ie) << 48) ^ (std::uint64_t(il) << 40) ^ std::uint64_t(trial);
            Rng rng = Rng::substream(config.seed, stream);
            if (logical_error_trial(lat, star_table, plaq_table, rounds, rng).any()) {
              ++shard_failures[w];
            }
          }
        });
      }
      for (auto& th : pool) th.join();
      long failures = 0;
      for (long f : shard_failures) failures += f;
      result.points.push_back(
          {lat.l(), config.epsilons[ie], config.trials, failures});
    }
  }
  result.crossing = estimate_crossing(result.points, 200, config.seed ^ 0x5eedc0deull);
  return result;
}

}  // namespace qnet
