#pragma once

// Perturbed spectral split of L = A + V and the angular operator X whose
// graph {x + Xx} is the perturbed inner spectral subspace. X solves
//   X A0 - A1 X + X B X = B^*
// and everything reported here is checked against that equation and the
// identities satisfied by the eigenpairs of |X|.

#include <optional>
#include <vector>

#include "spl/bounds.hpp"
#include "spl/disposition.hpp"

namespace spl {

struct PerturbedSplit {
  std::vector<double> omega0;  ///< eigenvalues of L in the gap, ascending
  std::vector<double> omega1;  ///< the rest, ascending
  Projector<cplx> EL0;
  Projector<cplx> EL1;
  MatrixC basis0;  ///< orthonormal eigenvectors spanning Ran(EL0)
  MatrixC basis1;  ///< orthonormal eigenvectors spanning Ran(EL1)
  /// Theoretical interval for omega0; present only while v < sqrt(d |gap|).
  std::optional<Enclosure> enclosure;
  /// The inner eigenvalue count differs from n0 (the gap has closed).
  bool gap_closed = false;
};

PerturbedSplit perturbed_split(const PerturbationInstance& inst);

struct RiccatiSolution {
  MatrixC X;  ///< n1 x n0
  PolarParts<cplx> polar;
  double mu = 0.0;
  double riccati_residual = 0.0;
  MatrixC Lambda0;  ///< (I + |X|^2)^{1/2} (A0 + B X) (I + |X|^2)^{-1/2}
  double cond_Y0 = 1.0;
};

/// Condition number above which the perturbed subspace is rejected as a graph.
inline constexpr double kMaxGraphCondition = 1e12;

/// X = Y1 Y0^{-1} from an orthonormal basis Y = [Y0; Y1] of Ran(EL0) written
/// in block coordinates. Uses the eigenvector basis of the split.
RiccatiSolution angular_operator(const PerturbationInstance& inst, const PerturbedSplit& ps);

/// Same, with an explicit orthonormal basis (ambient coordinates) of Ran(EL0).
RiccatiSolution angular_operator(const PerturbationInstance& inst, const MatrixC& subspace_basis);

/// || X A0 - A1 X + X B X - B^* ||
double riccati_residual(const MatrixC& x, const MatrixC& a0, const MatrixC& a1, const MatrixC& b);

/// Residuals of the two identities for one eigenpair (lambda, u) of |X|.
/// Inner products are conjugate-linear in the first slot: <x, y> = x^* y.
struct IdentityReport {
  double lambda = 0.0;
  double res26 = 0.0;  ///< eigenvalue-weighted identity
  double res27 = 0.0;  ///< identity through Lambda0
  /// Imaginary part of <A0 u, B U u> + <B^* u, A1 U u>; zero for exact data.
  double cross_imag = 0.0;
  bool top = false;  ///< lambda = ||X||
};

std::vector<IdentityReport> lemma22_check(const RiccatiSolution& sol, const PerturbationInstance& inst);

struct GraphReport {
  double measured = 0.0;         ///< ||E_A(sigma0) - E_L(omega0)||
  double predicted = 0.0;        ///< sin(arctan mu)
  double angle_residual = 0.0;   ///< |measured - predicted|
  double graph1_residual = 0.0;  ///< ||Z0 + X^* Z1|| for a basis Z of Ran(EL1)
  double spec0_residual = 0.0;   ///< spec(A0 + B X) vs omega0
  double spec1_residual = 0.0;   ///< spec(A1 - B^* X^*) vs omega1
  double lambda0_hermitian_residual = 0.0;
  double lambda0_spec_residual = 0.0;  ///< spec(Lambda0) vs omega0
};

GraphReport verify_graph_props(const RiccatiSolution& sol, const PerturbationInstance& inst,
                               const PerturbedSplit& ps);

}  // namespace spl
