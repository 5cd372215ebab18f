#pragma once

#include <array>

#include "qnetsim/density_matrix.hpp"

namespace qnet {

enum class BellState { PhiPlus = 0, PhiMinus = 1, PsiPlus = 2, PsiMinus = 3 };

/// State vector of the requested Bell state (qubit 0 = site A, qubit 1 = site B).
Vec bell_vector(BellState which);

/// Rank-1 projector onto the requested Bell state.
DensityMatrix make_bell(BellState which);

/// Werner state (1-eps) Phi+ + (eps/3)(Phi- + Psi+ + Psi-), eps in [0, 0.5).
DensityMatrix werner(double epsilon);

/// Reported fidelity convention: the overlap <target|rho|target>.
/// werner(eps) against Phi+ gives 1 - eps.
double bell_fidelity(const DensityMatrix& state, BellState target);

/// Uhlmann fidelity for a pure target, sqrt(<target|rho|target>).
double bell_fidelity_sqrt(const DensityMatrix& state, BellState target);

/// Diagonal of a two-qubit state in the Bell basis,
/// ordered (Phi+, Phi-, Psi+, Psi-).
std::array<double, 4> bell_diagonal(const DensityMatrix& state);

/// Largest off-diagonal magnitude in the Bell basis.
double off_bell_diagonal_norm(const DensityMatrix& state);

}  // namespace qnet
