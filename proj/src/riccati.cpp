#include "spl/riccati.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace spl {

namespace {

IndexSelector complement(const IndexSelector& picked, Index n) {
  IndexSelector rest;
  std::size_t j = 0;
  for (Index k = 0; k < n; ++k) {
    if (j < picked.size() && picked[j] == k) {
      ++j;
    } else {
      rest.push_back(k);
    }
  }
  return rest;
}

/// Largest distance between the real-sorted eigenvalues of a general square
/// matrix and a sorted list of reals.
double spectrum_mismatch(const MatrixC& m, const std::vector<double>& expected) {
  if (m.rows() != static_cast<Index>(expected.size())) return std::numeric_limits<double>::infinity();
  if (m.rows() == 0) return 0.0;
  Eigen::ComplexEigenSolver<MatrixC> solver(m, false);
  if (solver.info() != Eigen::Success) return std::numeric_limits<double>::infinity();
  std::vector<cplx> ev(solver.eigenvalues().data(), solver.eigenvalues().data() + m.rows());
  std::sort(ev.begin(), ev.end(), [](cplx a, cplx b) { return a.real() < b.real(); });
  double worst = 0.0;
  for (std::size_t k = 0; k < ev.size(); ++k) worst = std::max(worst, std::abs(ev[k] - expected[k]));
  return worst;
}

}  // namespace

PerturbedSplit perturbed_split(const PerturbationInstance& inst) {
  const auto es = eigh(inst.L);
  const Gap& gap = inst.split.gap;
  const IndexSelector inner =
      select_in_interval(es, IntervalSelector{gap.interval(), EdgeRule::SnapToEndpoint});
  const IndexSelector outer = complement(inner, es.dim());

  PerturbedSplit ps;
  for (Index k : inner) ps.omega0.push_back(es.values(k));
  for (Index k : outer) ps.omega1.push_back(es.values(k));
  ps.basis0 = select_columns(es.vectors, inner);
  ps.basis1 = select_columns(es.vectors, outer);
  ps.EL0 = Projector<cplx>::from_orthonormal(ps.basis0);
  ps.EL1 = Projector<cplx>::from_orthonormal(ps.basis1);
  if (regimes(inst.split.gap_len, inst.split.d, inst.v).r29) {
    ps.enclosure = enclosure(gap.left, gap.right, inst.split.d, inst.v);
  }
  ps.gap_closed = static_cast<Index>(inner.size()) != inst.n0();
  return ps;
}

double riccati_residual(const MatrixC& x, const MatrixC& a0, const MatrixC& a1, const MatrixC& b) {
  const Index n0 = a0.rows();
  const Index n1 = a1.rows();
  if (a0.cols() != n0 || a1.cols() != n1 || x.rows() != n1 || x.cols() != n0 || b.rows() != n0 ||
      b.cols() != n1) {
    throw Error(ErrorCode::DimensionMismatch, "Riccati blocks have incompatible shapes");
  }
  return op_norm(x * a0 - a1 * x + x * b * x - b.adjoint());
}

RiccatiSolution angular_operator(const PerturbationInstance& inst, const PerturbedSplit& ps) {
  return angular_operator(inst, ps.basis0);
}

RiccatiSolution angular_operator(const PerturbationInstance& inst, const MatrixC& subspace_basis) {
  const Index n0 = inst.n0();
  const Index n1 = inst.n1();
  if (subspace_basis.rows() != inst.dim() || subspace_basis.cols() != n0) {
    throw Error(ErrorCode::RankMismatch, "perturbed inner subspace has dimension " +
                                             std::to_string(subspace_basis.cols()) + ", expected " +
                                             std::to_string(n0));
  }
  const MatrixC y = inst.basis().adjoint() * subspace_basis;
  const MatrixC y0 = y.topRows(n0);
  const MatrixC y1 = y.bottomRows(n1);

  Eigen::JacobiSVD<MatrixC> svd(y0);
  const VectorR& s = svd.singularValues();
  const double smin = s(s.size() - 1);
  const double cond = smin > 0.0 ? s(0) / smin : std::numeric_limits<double>::infinity();
  if (!(cond <= kMaxGraphCondition)) {
    throw Error(ErrorCode::NotAGraph, "cond(Y0) = " + std::to_string(cond));
  }

  RiccatiSolution sol;
  sol.cond_Y0 = cond;
  // X Y0 = Y1  <=>  Y0^T X^T = Y1^T
  sol.X = y0.transpose().partialPivLu().solve(y1.transpose()).transpose();
  sol.polar = polar_decompose(sol.X);
  sol.mu = op_norm(sol.X);
  sol.riccati_residual = riccati_residual(sol.X, inst.A0, inst.A1, inst.B);

  const MatrixC gram = MatrixC::Identity(n0, n0) + sol.X.adjoint() * sol.X;
  const auto es = eigh(HermitianOp((gram + gram.adjoint()) / cplx(2.0)));
  const VectorC root = es.values.cwiseSqrt().cast<cplx>();
  const VectorC inv_root = es.values.cwiseSqrt().cwiseInverse().cast<cplx>();
  const MatrixC s_half = es.vectors * root.asDiagonal() * es.vectors.adjoint();
  const MatrixC s_inv_half = es.vectors * inv_root.asDiagonal() * es.vectors.adjoint();
  sol.Lambda0 = s_half * (inst.A0 + inst.B * sol.X) * s_inv_half;
  return sol;
}

std::vector<IdentityReport> lemma22_check(const RiccatiSolution& sol,
                                          const PerturbationInstance& inst) {
  const auto es = eigh(HermitianOp(sol.polar.absval));
  const MatrixC& u_iso = sol.polar.isometry;
  std::vector<IdentityReport> out;
  out.reserve(static_cast<std::size_t>(es.dim()));
  for (Index k = 0; k < es.dim(); ++k) {
    const double lambda = std::max(0.0, es.values(k));
    const VectorC u = es.vectors.col(k);
    const VectorC uu = u_iso * u;

    const VectorC a1uu = inst.A1 * uu;
    const VectorC buu = inst.B * uu;
    const VectorC a0u = inst.A0 * u;
    const VectorC bsu = inst.B.adjoint() * u;
    const VectorC l0u = sol.Lambda0 * u;

    const double outer = a1uu.squaredNorm() + buu.squaredNorm();
    const cplx cross = a0u.dot(buu) + bsu.dot(a1uu);

    IdentityReport r;
    r.lambda = lambda;
    r.res26 = std::abs(lambda * (outer - a0u.squaredNorm() - bsu.squaredNorm()) +
                       (1.0 - lambda * lambda) * cross);
    r.res27 = std::abs(cross + lambda * (outer - l0u.squaredNorm()));
    r.cross_imag = cross.imag();
    r.top = k == es.dim() - 1;
    out.push_back(r);
  }
  return out;
}

GraphReport verify_graph_props(const RiccatiSolution& sol, const PerturbationInstance& inst,
                               const PerturbedSplit& ps) {
  const Index n0 = inst.n0();
  const Index n1 = inst.n1();
  if (ps.EL0.dim() != inst.dim() || sol.X.rows() != n1 || sol.X.cols() != n0 ||
      ps.basis1.cols() != n1) {
    throw Error(ErrorCode::DimensionMismatch, "solution, split and instance disagree in shape");
  }
  GraphReport g;
  g.measured = subspace_angle(inst.split.E0, ps.EL0).norm_diff;
  g.predicted = sin_arctan(sol.mu);
  g.angle_residual = std::abs(g.measured - g.predicted);

  const MatrixC z = inst.basis().adjoint() * ps.basis1;
  g.graph1_residual = op_norm(z.topRows(n0) + sol.X.adjoint() * z.bottomRows(n1));

  g.spec0_residual = spectrum_mismatch(inst.A0 + inst.B * sol.X, ps.omega0);
  g.spec1_residual = spectrum_mismatch(inst.A1 - inst.B.adjoint() * sol.X.adjoint(), ps.omega1);

  g.lambda0_hermitian_residual = op_norm(sol.Lambda0 - sol.Lambda0.adjoint());
  g.lambda0_spec_residual = spectrum_mismatch(sol.Lambda0, ps.omega0);
  return g;
}

}  // namespace spl
