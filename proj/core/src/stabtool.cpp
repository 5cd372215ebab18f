#include "qnetsim/stabtool.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "qnetsim/bell.hpp"
#include "qnetsim/gates.hpp"
#include "qnetsim/repeater.hpp"

namespace qnet {

namespace {

constexpr double kResidualTol = 1e-6;

PauliLetter basis_letter(Basis basis) {
  switch (basis) {
    case Basis::Z: return PauliLetter::Z;
    case Basis::X: return PauliLetter::X;
    case Basis::Y: return PauliLetter::Y;
  }
  throw std::logic_error("basis_letter: bad basis");
}

std::string basis_name(Basis basis) {
  switch (basis) {
    case Basis::Z: return "Z";
    case Basis::X: return "X";
    case Basis::Y: return "Y";
  }
  throw std::logic_error("basis_name: bad basis");
}

DensityMatrix omega_state(int n) {
  const Eigen::Index d = Eigen::Index(1) << n;
  Vec v = Vec::Zero(d * d);
  const double amp = 1.0 / std::sqrt(double(d));
  for (Eigen::Index i = 0; i < d; ++i) v[i + (i << n)] = amp;
  return DensityMatrix::pure(2 * n, v);
}

PauliString pauli_from_code(unsigned code, int n) {
  std::vector<PauliLetter> letters(n);
  for (int q = 0; q < n; ++q) {
    letters[q] = static_cast<PauliLetter>((code >> (2 * q)) & 3u);
  }
  return PauliString(std::move(letters));
}

unsigned pauli_code(const PauliString& p) {
  unsigned code = 0;
  for (int q = 0; q < p.num_qubits(); ++q) {
    code |= static_cast<unsigned>(p.letter(q)) << (2 * q);
  }
  return code;
}

// (sigma_p (x) I) |Omega_4>, flattened as v[out + 16*in] = sigma_p(out, in)/4.
Vec span_vector(const Mat& sigma_p) {
  Vec v(256);
  for (Eigen::Index in = 0; in < 16; ++in) {
    for (Eigen::Index out = 0; out < 16; ++out) {
      v[out + 16 * in] = sigma_p(out, in) / 4.0;
    }
  }
  return v;
}

double quad_form(const DensityMatrix& choi, const Vec& v) {
  return (v.adjoint() * choi.mat() * v).value().real();
}

struct ConditionalChoi {
  DensityMatrix even;  // branch reporting even parity (unnormalized)
  DensityMatrix odd;
};

void noisy_h(DensityMatrix& state, int qubit, const NoiseModel& noise) {
  const int t[1] = {qubit};
  apply_unitary(state, gate_h(), t);
  apply_single_qubit_noise(state, qubit, noise.p1);
}

ConditionalChoi ancilla_branches(const RemoteGateResource& resource, const NoiseModel& noise,
                                 Basis basis) {
  const Superoperator gate = remote_gate_channel(resource, noise, /*as_cnot=*/true);
  // data 0..3, references 4..7, ancilla 8
  DensityMatrix reg = omega_state(4).tensor(DensityMatrix::computational_zero(1));
  if (basis == Basis::X) {
    for (int d = 0; d < 4; ++d) noisy_h(reg, d, noise);
  }
  for (int d = 0; d < 4; ++d) {
    const int targets[2] = {d, 8};
    gate.apply_to(reg, targets);
  }
  if (basis == Basis::X) {
    for (int d = 0; d < 4; ++d) noisy_h(reg, d, noise);
  }
  ConditionalChoi out;
  out.even = measurement_branch(reg, 8, Basis::Z, 0, noise.pm);
  out.odd = measurement_branch(reg, 8, Basis::Z, 1, noise.pm);
  return out;
}

ConditionalChoi ghz_branches(int level, const NoiseModel& noise, Basis basis) {
  const DensityMatrix ghz = ghz_resource(level, noise);
  // data 0..3, references 4..7, one GHZ qubit per node at 8..11
  DensityMatrix even = omega_state(4).tensor(ghz);
  DensityMatrix odd;
  bool have_odd = false;
  if (basis == Basis::X) {
    for (int d = 0; d < 4; ++d) noisy_h(even, d, noise);
  }
  Vec cphase_diag(4);
  cphase_diag << 1, 1, 1, -1;
  // Consuming the GHZ qubits lowest-first keeps the live one at index 8.
  for (int d = 0; d < 4; ++d) {
    const int targets[2] = {d, 8};
    for (DensityMatrix* s : {&even, have_odd ? &odd : nullptr}) {
      if (!s) continue;
      apply_diagonal_unitary(*s, cphase_diag, targets);
      apply_two_qubit_noise(*s, d, 8, noise.p2);
    }
    DensityMatrix e0 = measurement_branch(even, 8, Basis::X, 0, noise.pm);
    DensityMatrix e1 = measurement_branch(even, 8, Basis::X, 1, noise.pm);
    if (have_odd) {
      e0.mat() += measurement_branch(odd, 8, Basis::X, 1, noise.pm).mat();
      e1.mat() += measurement_branch(odd, 8, Basis::X, 0, noise.pm).mat();
    }
    even = std::move(e0);
    odd = std::move(e1);
    have_odd = true;
  }
  if (basis == Basis::X) {
    for (int d = 0; d < 4; ++d) {
      noisy_h(even, d, noise);
      noisy_h(odd, d, noise);
    }
  }
  return {std::move(even), std::move(odd)};
}

}  // namespace

void ParityErrorTable::validate() const {
  double sum = 0.0;
  double best = -1.0;
  bool best_is_clean = false;
  for (const auto& e : entries) {
    if (e.pauli.num_qubits() != 4) throw std::runtime_error("parity table: need 4-qubit Paulis");
    if (e.probability < 0.0) throw std::runtime_error("parity table: negative probability");
    sum += e.probability;
    if (e.probability > best) {
      best = e.probability;
      best_is_clean = e.pauli.is_identity() && !e.lie;
    }
  }
  if (std::abs(sum - 1.0) > 1e-9) throw std::runtime_error("parity table: probabilities do not sum to 1");
  if (!best_is_clean) throw std::runtime_error("parity table: identity/no-lie entry is not dominant");
}

double ParityErrorTable::probability_of(const PauliString& pauli, bool lie) const {
  for (const auto& e : entries) {
    if (e.lie == lie && e.pauli == pauli) return e.probability;
  }
  return 0.0;
}

double ParityErrorTable::total_error_mass() const {
  return 1.0 - probability_of(PauliString::identity(4), false);
}

double ParityErrorTable::data_error_mass() const {
  double mass = 0.0;
  for (const auto& e : entries) {
    if (!e.pauli.is_identity()) mass += e.probability;
  }
  return mass;
}

double ParityErrorTable::lie_mass() const {
  double mass = 0.0;
  for (const auto& e : entries) {
    if (e.lie) mass += e.probability;
  }
  return mass;
}

void ParityErrorTable::serialize(std::ostream& os) const {
  std::vector<ParityTableEntry> sorted = entries;
  std::sort(sorted.begin(), sorted.end(), [](const ParityTableEntry& a, const ParityTableEntry& b) {
    const std::string sa = a.pauli.str(), sb = b.pauli.str();
    if (sa != sb) return sa < sb;
    return a.lie < b.lie;
  });
  os << "parity-table v1\n";
  os << "basis " << basis_name(parity_basis) << "\n";
  os << "entries " << sorted.size() << "\n";
  std::ostringstream num;
  num << std::scientific << std::setprecision(11);
  for (const auto& e : sorted) {
    num.str("");
    num << e.probability;
    os << e.pauli.str() << " " << (e.lie ? 1 : 0) << " " << num.str() << "\n";
  }
}

ParityErrorTable ParityErrorTable::parse(std::istream& is) {
  std::string magic, version;
  is >> magic >> version;
  if (magic != "parity-table" || version != "v1") {
    throw std::runtime_error("parity table: bad header");
  }
  std::string key, basis;
  is >> key >> basis;
  if (key != "basis") throw std::runtime_error("parity table: missing basis");
  ParityErrorTable table;
  if (basis == "Z") table.parity_basis = Basis::Z;
  else if (basis == "X") table.parity_basis = Basis::X;
  else if (basis == "Y") table.parity_basis = Basis::Y;
  else throw std::runtime_error("parity table: bad basis");
  std::size_t count = 0;
  is >> key >> count;
  if (key != "entries") throw std::runtime_error("parity table: missing entry count");
  for (std::size_t i = 0; i < count; ++i) {
    std::string pauli;
    int lie = 0;
    double prob = 0.0;
    if (!(is >> pauli >> lie >> prob)) throw std::runtime_error("parity table: truncated");
    table.entries.push_back({PauliString::parse(pauli), lie != 0, prob});
  }
  return table;
}

DensityMatrix remote_cphase(const DensityMatrix& joint, int app_a, int app_b,
                            int envoy_a, int envoy_b, const NoiseModel& noise) {
  const int n = joint.num_qubits();
  const int hi = std::max(envoy_a, envoy_b);
  const int lo = std::min(envoy_a, envoy_b);
  if (hi != n - 1 || lo != n - 2 || app_a >= lo || app_b >= lo || app_a == app_b) {
    throw std::invalid_argument("remote_cphase: envoys must be the two highest qubits");
  }
  Vec cphase_diag(4);
  cphase_diag << 1, 1, 1, -1;
  DensityMatrix state = joint;
  const int ta[2] = {app_a, envoy_a};
  apply_diagonal_unitary(state, cphase_diag, ta);
  apply_two_qubit_noise(state, app_a, envoy_a, noise.p2);
  const int tb[2] = {app_b, envoy_b};
  apply_diagonal_unitary(state, cphase_diag, tb);
  apply_two_qubit_noise(state, app_b, envoy_b, noise.p2);

  const Basis hi_basis = (hi == envoy_a) ? Basis::X : Basis::Y;
  const Basis lo_basis = (hi == envoy_a) ? Basis::Y : Basis::X;
  Mat acc;
  for (int m_hi : {0, 1}) {
    DensityMatrix after_hi = measurement_branch(state, hi, hi_basis, m_hi, noise.pm);
    for (int m_lo : {0, 1}) {
      DensityMatrix b = measurement_branch(after_hi, lo, lo_basis, m_lo, noise.pm);
      // equal outcome signs teleport the adjoint of diag(1,-i,-i,1)
      const Mat corr = (m_hi == m_lo) ? gate_s_dagger() : gate_s();
      for (int app : {app_a, app_b}) {
        const int t[1] = {app};
        apply_unitary(b, corr, t);
        apply_single_qubit_noise(b, app, noise.p1);
      }
      if (acc.size() == 0) acc = b.mat();
      else acc += b.mat();
    }
  }
  return DensityMatrix(n - 2, std::move(acc));
}

Superoperator remote_gate_channel(const RemoteGateResource& resource,
                                  const NoiseModel& noise, bool as_cnot) {
  if (resource.pair_state.num_qubits() != 2) {
    throw std::invalid_argument("remote_gate_channel: resource must be a pair");
  }
  return Superoperator::extract(2, [&](const DensityMatrix& input) {
    DensityMatrix state = input.tensor(resource.pair_state);
    if (as_cnot) noisy_h(state, 1, noise);
    state = remote_cphase(state, 0, 1, 4, 5, noise);
    if (as_cnot) noisy_h(state, 1, noise);
    return state;
  });
}

DensityMatrix ghz_resource(int level, const NoiseModel& noise) {
  const DensityMatrix pair = run_level(level, noise).state;
  DensityMatrix state = pair;
  for (int ext = 0; ext < 2; ++ext) {
    const int n = state.num_qubits();
    DensityMatrix joint = state.tensor(pair);
    const int cnot_t[2] = {n - 1, n};
    apply_unitary(joint, gate_cnot(), cnot_t);
    apply_two_qubit_noise(joint, n - 1, n, noise.p2);
    Mat acc;
    for (int m : {0, 1}) {
      DensityMatrix b = measurement_branch(joint, n, Basis::Z, m, noise.pm);
      if (m) {
        const int last[1] = {n};
        apply_pauli_conj(b, PauliString::parse("X"), last);
      }
      if (acc.size() == 0) acc = b.mat();
      else acc += b.mat();
    }
    state = DensityMatrix(n + 1, std::move(acc));
  }
  return state;
}

ParityErrorTable decompose_parity_superop(const DensityMatrix& choi_report_even,
                                          const DensityMatrix& choi_report_odd,
                                          Basis parity_basis) {
  if (choi_report_even.num_qubits() != 8 || choi_report_odd.num_qubits() != 8) {
    throw std::invalid_argument("decompose_parity_superop: need 8-qubit Choi states");
  }
  const PauliString parity_op(std::vector<PauliLetter>(4, basis_letter(parity_basis)));
  const Mat pi = parity_op.matrix();
  const Mat id = Mat::Identity(16, 16);
  const Mat proj_plus = (id + pi) / 2.0;
  const Mat proj_minus = (id - pi) / 2.0;

  ParityErrorTable table;
  table.parity_basis = parity_basis;
  double captured = 0.0;
  for (unsigned code = 0; code < 256; ++code) {
    const PauliString sigma = pauli_from_code(code, 4);
    const PauliString partner = sigma.times_up_to_phase(parity_op);
    const unsigned partner_code = pauli_code(partner);
    // one representative per class modulo the parity operator
    if (std::pair(partner.weight(), partner_code) < std::pair(sigma.weight(), code)) continue;

    const Mat sigma_mat = sigma.matrix();
    const Vec v_plus = span_vector(sigma_mat * proj_plus);
    const Vec v_minus = span_vector(sigma_mat * proj_minus);
    const double w_even_true = 2.0 * quad_form(choi_report_even, v_plus);
    const double w_even_lie = 2.0 * quad_form(choi_report_even, v_minus);
    const double w_odd_true = 2.0 * quad_form(choi_report_odd, v_minus);
    const double w_odd_lie = 2.0 * quad_form(choi_report_odd, v_plus);
    captured += w_even_true + w_even_lie + w_odd_true + w_odd_lie;

    for (const auto& [lie, raw] :
         {std::pair(false, w_even_true + w_odd_true), std::pair(true, w_even_lie + w_odd_lie)}) {
      if (raw < -1e-9) throw std::runtime_error("decompose_parity_superop: negative class weight");
      const double p = std::max(raw, 0.0);
      if (p < 1e-15) continue;
      table.entries.push_back({sigma, lie, p});
    }
  }
  const double total = choi_report_even.norm() + choi_report_odd.norm();
  if (std::abs(total - captured) > kResidualTol) {
    throw std::runtime_error("decompose_parity_superop: residual outside Pauli-projector span");
  }
  std::sort(table.entries.begin(), table.entries.end(),
            [](const ParityTableEntry& a, const ParityTableEntry& b) {
              const std::string sa = a.pauli.str(), sb = b.pauli.str();
              if (sa != sb) return sa < sb;
              return a.lie < b.lie;
            });
  return table;
}

ParityErrorTable build_parity_table(StabMethod method, int level, const NoiseModel& noise,
                                    Basis parity_basis) {
  noise.validate();
  if (parity_basis == Basis::Y) {
    throw std::invalid_argument("build_parity_table: only Z and X parities are measured");
  }
  if (method == StabMethod::Ghz) {
    ConditionalChoi cc = ghz_branches(level, noise, parity_basis);
    ParityErrorTable table = decompose_parity_superop(cc.even, cc.odd, parity_basis);
    table.validate();
    return table;
  }
  const DensityMatrix purified = run_level(level, noise).state;
  const std::array<std::array<int, 3>, 6> perms = {{{0, 1, 2},
                                                    {0, 2, 1},
                                                    {1, 0, 2},
                                                    {1, 2, 0},
                                                    {2, 0, 1},
                                                    {2, 1, 0}}};
  ParityErrorTable best;
  double best_mass = std::numeric_limits<double>::infinity();
  for (const auto& perm : perms) {
    RemoteGateResource resource{steer_errors(purified, perm), perm};
    ConditionalChoi cc = ancilla_branches(resource, noise, parity_basis);
    ParityErrorTable table = decompose_parity_superop(cc.even, cc.odd, parity_basis);
    const double mass = table.data_error_mass();
    if (mass < best_mass) {
      best_mass = mass;
      best = std::move(table);
    }
  }
  best.validate();
  return best;
}

}  // namespace qnet
