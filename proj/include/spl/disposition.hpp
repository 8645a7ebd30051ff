#pragma once

// Annular spectral disposition: an inner spectral set lying in a finite gap
// of the outer one, block-diagonal unperturbed operators, and off-diagonal
// perturbations with respect to that split.

#include <cstdint>
#include <optional>
#include <vector>

#include "spl/hermitian.hpp"

namespace spl {

struct Gap {
  double left;
  double right;

  double length() const { return right - left; }
  double center() const { return 0.5 * (left + right); }
  OpenInterval interval() const { return {left, right}; }
};

struct SpectralSplit {
  std::vector<double> sigma0;  ///< ascending, inside the gap
  std::vector<double> sigma1;  ///< ascending, outside the gap
  Gap gap;
  double d = 0.0;        ///< dist(sigma0, sigma1)
  double gap_len = 0.0;  ///< |gap|
  Projector<cplx> E0;
  Projector<cplx> E1;
  HermitianOp J;  ///< E0 - E1
  /// Unitary whose first n0 columns span Ran(E0) and the rest Ran(E1).
  /// Block coordinates of every operator on the split are taken in this basis.
  MatrixC basis;

  Index n0() const { return static_cast<Index>(sigma0.size()); }
  Index n1() const { return static_cast<Index>(sigma1.size()); }
  Index dim() const { return n0() + n1(); }
};

/// Checks the disposition of two given spectral lists against the gap and
/// returns the distance d. Throws the specific disposition error.
double check_disposition(const std::vector<double>& sigma0, const std::vector<double>& sigma1,
                         const Gap& gap, double tol_edge);

/// sigma0 = spec(A) in the gap, sigma1 the rest. Eigenvalues within the edge
/// tolerance of an endpoint are identified with that endpoint.
SpectralSplit validate_disposition(const HermitianOp& a, const Gap& gap);

/// All bounded open intervals between consecutive distinct eigenvalues.
std::vector<Gap> finite_gaps(const HermitianOp& h);

/// V = (W - J W J) / 2, the part of W anticommuting with J.
HermitianOp offdiag_project(const HermitianOp& w, const SpectralSplit& split);

struct PerturbationInstance {
  HermitianOp A;
  MatrixC A0;  ///< n0 x n0 block
  MatrixC A1;  ///< n1 x n1 block
  MatrixC B;   ///< n0 x n1 block
  HermitianOp V;
  HermitianOp L;
  double v = 0.0;
  SpectralSplit split;
  bool trivial = false;  ///< B == 0

  Index n0() const { return A0.rows(); }
  Index n1() const { return A1.rows(); }
  Index dim() const { return A.dim(); }
  const MatrixC& basis() const { return split.basis; }
};

/// Instance from Hermitian blocks A0, A1 and coupling B, optionally rotated
/// by a unitary `basis` (A = W diag(A0, A1) W^*). Identity when omitted.
PerturbationInstance make_instance(const MatrixC& a0, const MatrixC& a1, const MatrixC& b,
                                   const Gap& gap, const std::optional<MatrixC>& basis = std::nullopt);

/// Instance with diagonal blocks diag(sigma0), diag(sigma1).
PerturbationInstance assemble_instance(const std::vector<double>& sigma0,
                                       const std::vector<double>& sigma1, const Gap& gap,
                                       const MatrixC& b,
                                       const std::optional<MatrixC>& basis = std::nullopt);

/// Instance from a Hermitian A (split by the gap) and an arbitrary Hermitian W
/// whose off-diagonal part becomes the perturbation.
PerturbationInstance instance_from_operators(const HermitianOp& a, const HermitianOp& w,
                                             const Gap& gap);

/// Same instance with A0, A1 and the gap shifted by -c.
PerturbationInstance shifted(const PerturbationInstance& inst, double c);

enum class PinSide { Left, Right };

struct RandomInstanceParams {
  Index n0 = 1;
  Index n1 = 2;
  Gap gap{-1.0, 1.0};
  double d = 0.5;
  double outer_radius = 1.0;
  double v = 0.0;
  PinSide pin_side = PinSide::Left;
  bool conjugate = false;  ///< hide the block structure behind a random unitary
};

PerturbationInstance random_instance(const RandomInstanceParams& params, std::uint64_t seed);

/// Haar-distributed unitary from the QR of a complex Gaussian matrix.
template <typename Rng>
MatrixC random_unitary(Index n, Rng& rng);

/// Complex matrix with independent standard complex Gaussian entries.
template <typename Rng>
MatrixC complex_gaussian(Index rows, Index cols, Rng& rng);

}  // namespace spl

#include "spl/detail/random_matrix.hpp"
