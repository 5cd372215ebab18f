#include "qnetsim/pauli.hpp"

#include <stdexcept>

namespace qnet {

namespace {

const char kLetterChars[] = "IXYZ";

// Single-letter product table ignoring phase: result[a][b] = a*b.
constexpr std::uint8_t kProduct[4][4] = {
    {0, 1, 2, 3},
    {1, 0, 3, 2},
    {2, 3, 0, 1},
    {3, 2, 1, 0},
};

}  // namespace

PauliString::PauliString(std::vector<PauliLetter> letters) : letters_(std::move(letters)) {}

PauliString PauliString::parse(const std::string& text) {
  std::vector<PauliLetter> letters;
  letters.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case 'I': letters.push_back(PauliLetter::I); break;
      case 'X': letters.push_back(PauliLetter::X); break;
      case 'Y': letters.push_back(PauliLetter::Y); break;
      case 'Z': letters.push_back(PauliLetter::Z); break;
      default: throw std::invalid_argument("PauliString::parse: bad letter");
    }
  }
  return PauliString(std::move(letters));
}

PauliString PauliString::identity(int num_qubits) {
  return PauliString(std::vector<PauliLetter>(num_qubits, PauliLetter::I));
}

bool PauliString::is_identity() const {
  for (auto l : letters_) {
    if (l != PauliLetter::I) return false;
  }
  return true;
}

int PauliString::weight() const {
  int w = 0;
  for (auto l : letters_) w += (l != PauliLetter::I);
  return w;
}

std::string PauliString::str() const {
  std::string s;
  s.reserve(letters_.size());
  for (auto l : letters_) s.push_back(kLetterChars[static_cast<int>(l)]);
  return s;
}

PauliString PauliString::times_up_to_phase(const PauliString& other) const {
  if (other.num_qubits() != num_qubits()) {
    throw std::invalid_argument("PauliString product: size mismatch");
  }
  std::vector<PauliLetter> out(letters_.size());
  for (std::size_t i = 0; i < letters_.size(); ++i) {
    out[i] = static_cast<PauliLetter>(
        kProduct[static_cast<int>(letters_[i])][static_cast<int>(other.letters_[i])]);
  }
  return PauliString(std::move(out));
}

Mat PauliString::matrix() const {
  const Eigen::Index d = Eigen::Index(1) << num_qubits();
  Mat m = Mat::Zero(d, d);
  // P|i> = phase(i) |i ^ xmask>
  Eigen::Index xmask = 0;
  for (int q = 0; q < num_qubits(); ++q) {
    auto l = letters_[q];
    if (l == PauliLetter::X || l == PauliLetter::Y) xmask |= Eigen::Index(1) << q;
  }
  for (Eigen::Index i = 0; i < d; ++i) {
    Cplx phase = 1.0;
    for (int q = 0; q < num_qubits(); ++q) {
      const bool bit = (i >> q) & 1;
      switch (letters_[q]) {
        case PauliLetter::Y: phase *= bit ? Cplx(0, -1) : Cplx(0, 1); break;
        case PauliLetter::Z: if (bit) phase = -phase; break;
        default: break;
      }
    }
    m(i ^ xmask, i) = phase;
  }
  return m;
}

void apply_pauli_conj(DensityMatrix& state, const PauliString& p,
                      std::span<const int> targets) {
  if (p.num_qubits() != static_cast<int>(targets.size())) {
    throw std::invalid_argument("apply_pauli_conj: letter/target count mismatch");
  }
  const Eigen::Index d = state.dim();
  Eigen::Index xmask = 0;
  std::vector<std::pair<Eigen::Index, PauliLetter>> phased;  // (bitmask, letter)
  for (std::size_t j = 0; j < targets.size(); ++j) {
    const int q = targets[j];
    if (q < 0 || q >= state.num_qubits()) {
      throw std::invalid_argument("apply_pauli_conj: target out of range");
    }
    const auto l = p.letter(static_cast<int>(j));
    if (l == PauliLetter::X || l == PauliLetter::Y) xmask |= Eigen::Index(1) << q;
    if (l == PauliLetter::Y || l == PauliLetter::Z) phased.emplace_back(Eigen::Index(1) << q, l);
  }

  // phase(i) such that P|i> = phase(i) |i ^ xmask>
  auto phase_of = [&](Eigen::Index i) {
    Cplx ph = 1.0;
    for (auto [bit, l] : phased) {
      const bool b = (i & bit) != 0;
      if (l == PauliLetter::Z) {
        if (b) ph = -ph;
      } else {  // Y
        ph *= b ? Cplx(0, -1) : Cplx(0, 1);
      }
    }
    return ph;
  };

  std::vector<Cplx> phases(d);
  for (Eigen::Index i = 0; i < d; ++i) phases[i] = phase_of(i ^ xmask);

  Mat& m = state.mat();
  Mat out(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    const Eigen::Index js = j ^ xmask;
    const Cplx pj = std::conj(phases[j]);
    for (Eigen::Index i = 0; i < d; ++i) {
      out(i, j) = phases[i] * pj * m(i ^ xmask, js);
    }
  }
  m.swap(out);
}

}  // namespace qnet
