#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "qnetsim/rng.hpp"
#include "qnetsim/stabtool.hpp"

namespace qnet {

/// L x L toric code on a periodic square lattice. Edge qubits:
/// h(r,c) joins vertices (r,c)-(r,c+1), v(r,c) joins (r,c)-(r+1,c).
/// Stars (vertex ZZZZ checks) catch X errors, plaquettes (face XXXX
/// checks) catch Z errors.
class ToricLattice {
 public:
  explicit ToricLattice(int l);

  int l() const { return l_; }
  int num_edges() const { return 2 * l_ * l_; }
  int num_checks() const { return l_ * l_; }  // per type

  int h_edge(int r, int c) const { return wrap(r) * l_ + wrap(c); }
  int v_edge(int r, int c) const { return l_ * l_ + wrap(r) * l_ + wrap(c); }

  std::array<int, 4> star(int r, int c) const;
  std::array<int, 4> plaquette(int r, int c) const;

  int wrap(int x) const { return ((x % l_) + l_) % l_; }

 private:
  int l_;
};

using BitVec = std::vector<std::uint8_t>;

/// Parity of the X-error pattern at every vertex check, indexed r * L + c.
BitVec star_syndrome(const ToricLattice& lat, const BitVec& x_error);
/// Parity of the Z-error pattern at every face check.
BitVec plaquette_syndrome(const ToricLattice& lat, const BitVec& z_error);

/// Homology class of a residual error with empty syndrome; true means a
/// logical fault (odd crossing of either non-contractible cut).
bool logical_fault_from_x(const ToricLattice& lat, const BitVec& x_error);
bool logical_fault_from_z(const ToricLattice& lat, const BitVec& z_error);

/// Detection event in the space-time syndrome history.
struct Defect {
  int r = 0, c = 0, t = 0;
};

/// Minimum-weight pairing of the defects under the metric
/// (periodic Manhattan distance in space) + |dt|.
std::vector<std::pair<int, int>> match_defects(const ToricLattice& lat,
                                               const std::vector<Defect>& defects);

enum class CheckType { Star, Plaquette };

/// Flips the shortest correction chain joining two check sites into `error`
/// (rows first, then columns; time components are ignored).
void apply_correction_path(const ToricLattice& lat, CheckType type, const Defect& a,
                           const Defect& b, BitVec& error);

struct TrialOutcome {
  bool x_fail = false;
  bool z_fail = false;
  bool any() const { return x_fail || z_fail; }
};

/// One decoding trial: `rounds` noisy measurement rounds of every check
/// drawn from the error tables, one final ideal round, minimum-weight
/// matching of the detection events, then the homology check on the
/// residual.
TrialOutcome logical_error_trial(const ToricLattice& lat, const ParityErrorTable& star_table,
                                 const ParityErrorTable& plaquette_table, int rounds, Rng& rng);

struct ThresholdPoint {
  int lattice = 0;
  double epsilon = 0.0;
  long trials = 0;
  long failures = 0;
  double failure_rate() const { return trials > 0 ? double(failures) / double(trials) : 0.0; }
  double failure_stderr() const;
};

struct CrossingEstimate {
  double epsilon = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
};

struct ThresholdConfig {
  StabMethod method = StabMethod::Ancilla;
  int level = 3;
  std::vector<int> lattice_sizes = {4, 6, 8};
  std::vector<double> epsilons;
  long trials = 4000;
  std::uint64_t seed = 1;
  double p1 = 1e-6;
  double p2 = 1e-3;
  double pm = 5e-4;
  int rounds_per_l = 4;
  int workers = 1;  // trial threads; results identical for any count
};

struct ThresholdResult {
  std::vector<ThresholdPoint> points;
  CrossingEstimate crossing;
};

/// Crossing of the failure-rate curves of consecutive lattice sizes,
/// linearly interpolated in (epsilon, log failure rate); the confidence
/// interval is a 95% binomial bootstrap.
CrossingEstimate estimate_crossing(const std::vector<ThresholdPoint>& points, int bootstrap,
                                   std::uint64_t seed);

/// Full scan: one pair of error tables per epsilon, `trials` decoding trials
/// per (lattice, epsilon) point with per-trial substreams, then the crossing
/// estimate.
ThresholdResult threshold_scan(const ThresholdConfig& config);

}  // namespace qnet
