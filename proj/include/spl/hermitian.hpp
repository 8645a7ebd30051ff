#pragma once

// Dense Hermitian primitives: eigensystems, spectral projectors, operator
// norms, polar decomposition and the operator angle between two subspaces.
//
// Everything here is templated on the scalar type so the same code serves
// real symmetric and complex Hermitian data. The rest of the library works
// with std::complex<double>.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "spl/error.hpp"

namespace spl {

using Index = Eigen::Index;
using cplx = std::complex<double>;

template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using MatrixC = Mat<cplx>;
using VectorC = Vec<cplx>;
using VectorR = Eigen::VectorXd;

/// Relative residual tolerance of the eigensolver contract.
inline constexpr double kTolEig = 1e-10;
/// Relative distance below which an eigenvalue counts as sitting on an interval end.
inline constexpr double kTolEdgeRel = 1e-9;
/// Relative Hermitian-symmetry tolerance (scaled by the largest entry).
inline constexpr double kTolSymmetry = 1e-12;

/// Largest singular value. Zero for empty or zero matrices.
template <typename Derived>
double op_norm(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  if (m.size() == 0) return 0.0;
  if (m.rows() == 1 || m.cols() == 1) return m.norm();
  Eigen::JacobiSVD<Mat<Scalar>> svd(m.eval());
  return svd.singularValues()(0);
}

/// Largest absolute entry; the scale for symmetry checks.
template <typename Derived>
double max_abs_entry(const Eigen::MatrixBase<Derived>& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

template <typename Scalar>
class HermitianOperator {
 public:
  using MatrixType = Mat<Scalar>;

  /// Validates squareness and Hermitian symmetry, then stores the exact
  /// Hermitian part so downstream solvers see a symmetric matrix.
  explicit HermitianOperator(const MatrixType& m) {
    if (m.rows() < 1 || m.rows() != m.cols()) {
      throw Error(ErrorCode::DimensionMismatch,
                  "Hermitian operator must be square with n >= 1, got " +
                      std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
    }
    const double scale = max_abs_entry(m);
    const double asym = max_abs_entry(m - m.adjoint());
    if (!(asym <= kTolSymmetry * scale)) {
      throw Error(ErrorCode::NonHermitianInput,
                  "max |H - H^*| = " + std::to_string(asym) + " exceeds 1e-12 * " +
                      std::to_string(scale));
    }
    matrix_ = (m + m.adjoint()) / Scalar(2);
  }

  static HermitianOperator identity(Index n) { return HermitianOperator(MatrixType::Identity(n, n)); }
  static HermitianOperator zero(Index n) { return HermitianOperator(MatrixType::Zero(n, n)); }

  Index dim() const { return matrix_.rows(); }
  const MatrixType& matrix() const { return matrix_; }
  double norm() const { return op_norm(matrix_); }

  friend HermitianOperator operator+(const HermitianOperator& a, const HermitianOperator& b) {
    if (a.dim() != b.dim()) throw Error(ErrorCode::DimensionMismatch, "operator sum");
    return HermitianOperator(a.matrix_ + b.matrix_);
  }

 private:
  MatrixType matrix_;
};

using HermitianOp = HermitianOperator<cplx>;

/// Eigenvalues ascending; column k of `vectors` pairs with `values[k]`.
template <typename Scalar>
struct EigenSystem {
  VectorR values;
  Mat<Scalar> vectors;

  Index dim() const { return values.size(); }
  /// Spectral radius, the operator norm of the decomposed matrix.
  double norm() const {
    return values.size() == 0 ? 0.0 : std::max(std::abs(values(0)), std::abs(values(values.size() - 1)));
  }
  double edge_tolerance() const { return kTolEdgeRel * norm(); }
};

template <typename Scalar>
EigenSystem<Scalar> eigh(const HermitianOperator<Scalar>& h) {
  Eigen::SelfAdjointEigenSolver<Mat<Scalar>> solver(h.matrix());
  if (solver.info() != Eigen::Success || !solver.eigenvalues().allFinite()) {
    throw Error(ErrorCode::ConvergenceFailure, "self-adjoint eigensolver did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

/// f(H) = Q f(diag) Q^* for a Hermitian argument.
template <typename Scalar, typename Fn>
Mat<Scalar> hermitian_function(const HermitianOperator<Scalar>& h, Fn&& fn) {
  const auto es = eigh(h);
  VectorR mapped = es.values.unaryExpr(std::forward<Fn>(fn));
  return es.vectors * mapped.template cast<Scalar>().asDiagonal() * es.vectors.adjoint();
}

template <typename Scalar>
struct Projector {
  Mat<Scalar> matrix;
  Index rank = 0;

  Index dim() const { return matrix.rows(); }

  /// Orthogonal projector onto the span of orthonormal columns.
  static Projector from_orthonormal(const Mat<Scalar>& basis) {
    return {basis * basis.adjoint(), basis.cols()};
  }
};

struct OpenInterval {
  double lower;
  double upper;

  bool strictly_contains(double x) const { return x > lower && x < upper; }
};

/// How eigenvalues within the edge tolerance of an interval end are treated.
///  - Strict: exact hits are outside; near misses raise AmbiguousEdge.
///  - SnapToEndpoint: near hits are identified with the endpoint (outside).
enum class EdgeRule { Strict, SnapToEndpoint };

struct IntervalSelector {
  OpenInterval interval;
  EdgeRule rule = EdgeRule::Strict;
};

using IndexSelector = std::vector<Index>;
using Selector = std::variant<IntervalSelector, IndexSelector>;

/// Indices of eigenvalues inside the open interval under the edge rule.
template <typename Scalar>
IndexSelector select_in_interval(const EigenSystem<Scalar>& es, const IntervalSelector& sel) {
  const double tol = es.edge_tolerance();
  IndexSelector picked;
  for (Index k = 0; k < es.dim(); ++k) {
    const double lambda = es.values(k);
    const double edge_dist =
        std::min(std::abs(lambda - sel.interval.lower), std::abs(lambda - sel.interval.upper));
    if (edge_dist <= tol) {
      if (sel.rule == EdgeRule::Strict && edge_dist > 0.0) {
        throw Error(ErrorCode::AmbiguousEdge,
                    "eigenvalue " + std::to_string(lambda) + " within " + std::to_string(tol) +
                        " of an interval endpoint",
                    lambda);
      }
      continue;
    }
    if (sel.interval.strictly_contains(lambda)) picked.push_back(k);
  }
  return picked;
}

template <typename Scalar>
Mat<Scalar> select_columns(const Mat<Scalar>& m, const IndexSelector& idx) {
  Mat<Scalar> out(m.rows(), static_cast<Index>(idx.size()));
  for (std::size_t j = 0; j < idx.size(); ++j) out.col(static_cast<Index>(j)) = m.col(idx[j]);
  return out;
}

/// P = sum of v_k v_k^* over the selected eigenpairs.
template <typename Scalar>
Projector<Scalar> spectral_projector(const EigenSystem<Scalar>& es, const Selector& selector) {
  IndexSelector idx;
  if (const auto* iv = std::get_if<IntervalSelector>(&selector)) {
    idx = select_in_interval(es, *iv);
  } else {
    idx = std::get<IndexSelector>(selector);
    for (Index k : idx) {
      if (k < 0 || k >= es.dim()) throw Error(ErrorCode::DimensionMismatch, "eigen index out of range");
    }
  }
  if (idx.empty()) throw Error(ErrorCode::EmptySelection, "selector picks no eigenvalue");
  return Projector<Scalar>::from_orthonormal(select_columns(es.vectors, idx));
}

struct AngleReport {
  double norm_diff = 0.0;
  double max_angle = 0.0;
  /// Singular values of P - Q, descending, clipped to [0, 1].
  VectorR sin_spectrum;
};

template <typename Scalar>
AngleReport subspace_angle(const Projector<Scalar>& p, const Projector<Scalar>& q) {
  if (p.dim() != q.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "projectors of different dimension");
  }
  // P - Q is Hermitian, so its singular values are |eigenvalues|.
  Eigen::SelfAdjointEigenSolver<Mat<Scalar>> solver(p.matrix - q.matrix, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::ConvergenceFailure, "eigensolver failed on P - Q");
  }
  VectorR s = solver.eigenvalues().cwiseAbs().cwiseMin(1.0);
  std::sort(s.data(), s.data() + s.size(), std::greater<>());
  AngleReport report;
  report.norm_diff = s.size() ? s(0) : 0.0;
  report.max_angle = std::asin(report.norm_diff);
  report.sin_spectrum = std::move(s);
  return report;
}

/// X = U |X| with U extended by zero on Ker(X).
template <typename Scalar>
struct PolarParts {
  Mat<Scalar> isometry;
  Mat<Scalar> absval;
};

/// Polar decomposition through the SVD X = W S Z^*: |X| = Z S Z^*, and
/// U = W_r Z_r^* over the numerically nonzero singular triplets.
template <typename Derived>
PolarParts<typename Derived::Scalar> polar_decompose(const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  const Index m = x.rows();
  const Index k = x.cols();
  PolarParts<Scalar> parts{Mat<Scalar>::Zero(m, k), Mat<Scalar>::Zero(k, k)};
  if (x.size() == 0) return parts;

  Eigen::JacobiSVD<Mat<Scalar>> svd(x.eval(), Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (!svd.singularValues().allFinite()) {
    throw Error(ErrorCode::ConvergenceFailure, "SVD produced non-finite singular values");
  }
  const VectorR& s = svd.singularValues();
  const double smax = s.size() ? s(0) : 0.0;
  if (smax == 0.0) return parts;

  const double cutoff =
      static_cast<double>(std::max(m, k)) * std::numeric_limits<double>::epsilon() * smax;
  Index r = 0;
  while (r < s.size() && s(r) > cutoff) ++r;

  const auto w = svd.matrixU().leftCols(r);
  const auto z = svd.matrixV().leftCols(r);
  parts.isometry = w * z.adjoint();
  parts.absval = z * s.head(r).template cast<Scalar>().asDiagonal() * z.adjoint();
  parts.absval = (parts.absval + parts.absval.adjoint().eval()) / Scalar(2);
  return parts;
}

}  // namespace spl
