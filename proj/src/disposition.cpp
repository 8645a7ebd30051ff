#include "spl/disposition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

namespace spl {

namespace {

std::vector<double> to_sorted(const VectorR& v) {
  std::vector<double> out(v.data(), v.data() + v.size());
  std::sort(out.begin(), out.end());
  return out;
}

double spread(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (double x : a) m = std::max(m, std::abs(x));
  for (double x : b) m = std::max(m, std::abs(x));
  return m;
}

MatrixC block_diag(const MatrixC& top, const MatrixC& bottom) {
  const Index n0 = top.rows();
  const Index n1 = bottom.rows();
  MatrixC out = MatrixC::Zero(n0 + n1, n0 + n1);
  out.topLeftCorner(n0, n0) = top;
  out.bottomRightCorner(n1, n1) = bottom;
  return out;
}

MatrixC off_diag(const MatrixC& b) {
  const Index n0 = b.rows();
  const Index n1 = b.cols();
  MatrixC out = MatrixC::Zero(n0 + n1, n0 + n1);
  out.topRightCorner(n0, n1) = b;
  out.bottomLeftCorner(n1, n0) = b.adjoint();
  return out;
}

MatrixC diag_of(const std::vector<double>& values) {
  VectorC d(static_cast<Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) d(static_cast<Index>(i)) = values[i];
  return d.asDiagonal();
}

SpectralSplit make_split(std::vector<double> sigma0, std::vector<double> sigma1, const Gap& gap,
                         double d, const MatrixC& basis) {
  const Index n0 = static_cast<Index>(sigma0.size());
  const Index n = basis.cols();
  auto e0 = Projector<cplx>::from_orthonormal(basis.leftCols(n0));
  auto e1 = Projector<cplx>::from_orthonormal(basis.rightCols(n - n0));
  HermitianOp j(e0.matrix - e1.matrix);
  return SpectralSplit{std::move(sigma0), std::move(sigma1), gap,  d,
                       gap.length(),      std::move(e0),     std::move(e1), std::move(j),
                       basis};
}

}  // namespace

double check_disposition(const std::vector<double>& sigma0, const std::vector<double>& sigma1,
                         const Gap& gap, double tol_edge) {
  if (!(gap.left < gap.right)) {
    throw Error(ErrorCode::NotAGap, "gap must satisfy left < right");
  }
  if (sigma0.empty()) {
    throw Error(ErrorCode::EmptyInnerComponent, "no spectrum inside the gap");
  }
  for (double s : sigma0) {
    if (!(s > gap.left + tol_edge && s < gap.right - tol_edge)) {
      throw Error(ErrorCode::InnerOutsideGap,
                  "inner spectral value " + std::to_string(s) + " is not inside the gap", s);
    }
  }
  bool has_left = false;
  bool has_right = false;
  for (double s : sigma1) {
    if (std::abs(s - gap.left) <= tol_edge) {
      has_left = true;
    } else if (std::abs(s - gap.right) <= tol_edge) {
      has_right = true;
    } else if (gap.interval().strictly_contains(s)) {
      throw Error(ErrorCode::NotAGap,
                  "outer spectral value " + std::to_string(s) + " lies inside the gap", s);
    }
  }
  if (!has_left) {
    throw Error(ErrorCode::GapEndpointMissing,
                "left endpoint " + std::to_string(gap.left) + " is not a spectral point", gap.left);
  }
  if (!has_right) {
    throw Error(ErrorCode::GapEndpointMissing,
                "right endpoint " + std::to_string(gap.right) + " is not a spectral point",
                gap.right);
  }
  double d = std::numeric_limits<double>::infinity();
  for (double s0 : sigma0) {
    for (double s1 : sigma1) d = std::min(d, std::abs(s0 - s1));
  }
  return d;
}

SpectralSplit validate_disposition(const HermitianOp& a, const Gap& gap) {
  if (!(gap.left < gap.right)) {
    throw Error(ErrorCode::NotAGap, "gap must satisfy left < right");
  }
  const auto es = eigh(a);
  const IndexSelector inner =
      select_in_interval(es, IntervalSelector{gap.interval(), EdgeRule::SnapToEndpoint});
  IndexSelector outer;
  for (Index k = 0, j = 0; k < es.dim(); ++k) {
    if (j < static_cast<Index>(inner.size()) && inner[static_cast<std::size_t>(j)] == k) {
      ++j;
    } else {
      outer.push_back(k);
    }
  }

  std::vector<double> sigma0;
  std::vector<double> sigma1;
  for (Index k : inner) sigma0.push_back(es.values(k));
  for (Index k : outer) sigma1.push_back(es.values(k));
  const double d = check_disposition(sigma0, sigma1, gap, es.edge_tolerance());

  IndexSelector order = inner;
  order.insert(order.end(), outer.begin(), outer.end());
  return make_split(std::move(sigma0), std::move(sigma1), gap, d, select_columns(es.vectors, order));
}

std::vector<Gap> finite_gaps(const HermitianOp& h) {
  const auto es = eigh(h);
  const double tol = es.edge_tolerance();
  std::vector<Gap> gaps;
  for (Index k = 1; k < es.dim(); ++k) {
    if (es.values(k) - es.values(k - 1) > tol) gaps.push_back({es.values(k - 1), es.values(k)});
  }
  return gaps;
}

HermitianOp offdiag_project(const HermitianOp& w, const SpectralSplit& split) {
  if (w.dim() != split.J.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "perturbation and split differ in dimension");
  }
  const MatrixC& j = split.J.matrix();
  return HermitianOp((w.matrix() - j * w.matrix() * j) / cplx(2.0));
}

PerturbationInstance make_instance(const MatrixC& a0, const MatrixC& a1, const MatrixC& b,
                                   const Gap& gap, const std::optional<MatrixC>& basis) {
  const Index n0 = a0.rows();
  const Index n1 = a1.rows();
  if (b.rows() != n0 || b.cols() != n1) {
    throw Error(ErrorCode::DimensionMismatch, "coupling block must be n0 x n1");
  }
  const HermitianOp h0(a0);
  const HermitianOp h1(a1);
  const std::vector<double> sigma0 = to_sorted(eigh(h0).values);
  const std::vector<double> sigma1 = to_sorted(eigh(h1).values);
  const double tol_edge = kTolEdgeRel * spread(sigma0, sigma1);
  const double d = check_disposition(sigma0, sigma1, gap, tol_edge);

  const Index n = n0 + n1;
  MatrixC w = basis.value_or(MatrixC::Identity(n, n));
  if (w.rows() != n || w.cols() != n) {
    throw Error(ErrorCode::DimensionMismatch, "basis must be n x n");
  }
  if ((w.adjoint() * w - MatrixC::Identity(n, n)).norm() > 1e-10 * std::sqrt(double(n))) {
    throw Error(ErrorCode::DimensionMismatch, "basis is not unitary");
  }

  HermitianOp a(w * block_diag(h0.matrix(), h1.matrix()) * w.adjoint());
  HermitianOp v(w * off_diag(b) * w.adjoint());
  HermitianOp l = a + v;

  // The eigen-derived split validates the full operator; projectors and block
  // coordinates come from the construction basis so that V anticommutes with J.
  const SpectralSplit checked = validate_disposition(a, gap);
  if (checked.n0() != n0) {
    throw Error(ErrorCode::NotAGap, "eigenvalue count inside the gap differs from n0");
  }
  for (std::size_t i = 0; i < sigma0.size(); ++i) {
    if (std::abs(checked.sigma0[i] - sigma0[i]) > 1e-9 * std::max(1.0, spread(sigma0, sigma1))) {
      throw Error(ErrorCode::InnerOutsideGap, "spectrum of A0 does not match the split",
                  sigma0[i]);
    }
  }
  SpectralSplit split = make_split(sigma0, sigma1, gap, d, w);

  const double vnorm = op_norm(b);
  return PerturbationInstance{std::move(a), h0.matrix(), h1.matrix(), b, std::move(v),
                              std::move(l), vnorm, std::move(split), vnorm == 0.0};
}

PerturbationInstance assemble_instance(const std::vector<double>& sigma0,
                                       const std::vector<double>& sigma1, const Gap& gap,
                                       const MatrixC& b, const std::optional<MatrixC>& basis) {
  if (b.rows() != static_cast<Index>(sigma0.size()) ||
      b.cols() != static_cast<Index>(sigma1.size())) {
    throw Error(ErrorCode::DimensionMismatch, "coupling block must be n0 x n1");
  }
  return make_instance(diag_of(sigma0), diag_of(sigma1), b, gap, basis);
}

PerturbationInstance instance_from_operators(const HermitianOp& a, const HermitianOp& w,
                                             const Gap& gap) {
  const SpectralSplit split = validate_disposition(a, gap);
  const HermitianOp v = offdiag_project(w, split);
  const Index n0 = split.n0();
  const Index n1 = split.n1();
  const MatrixC ab = split.basis.adjoint() * a.matrix() * split.basis;
  const MatrixC vb = split.basis.adjoint() * v.matrix() * split.basis;
  MatrixC a0 = ab.topLeftCorner(n0, n0);
  MatrixC a1 = ab.bottomRightCorner(n1, n1);
  // Rotation residue in the diagonal blocks is at rounding level; clear it.
  a0 = (a0 + a0.adjoint().eval()) / cplx(2.0);
  a1 = (a1 + a1.adjoint().eval()) / cplx(2.0);
  return make_instance(a0, a1, vb.topRightCorner(n0, n1), gap, split.basis);
}

PerturbationInstance shifted(const PerturbationInstance& inst, double c) {
  const MatrixC a0 = inst.A0 - cplx(c) * MatrixC::Identity(inst.n0(), inst.n0());
  const MatrixC a1 = inst.A1 - cplx(c) * MatrixC::Identity(inst.n1(), inst.n1());
  const Gap gap{inst.split.gap.left - c, inst.split.gap.right - c};
  return make_instance(a0, a1, inst.B, gap, inst.basis());
}

PerturbationInstance random_instance(const RandomInstanceParams& p, std::uint64_t seed) {
  const double D = p.gap.length();
  if (p.n0 < 1 || p.n1 < 2) {
    throw Error(ErrorCode::InfeasibleParams, "need n0 >= 1 and n1 >= 2");
  }
  if (!(p.gap.left < p.gap.right) || !(p.d > 0.0) || !(p.d <= 0.5 * D)) {
    throw Error(ErrorCode::InfeasibleParams, "need left < right and 0 < d <= |gap|/2");
  }
  if (!(p.v >= 0.0) || !std::isfinite(p.v)) {
    throw Error(ErrorCode::InfeasibleParams, "perturbation norm must be finite and >= 0");
  }
  if (p.n1 > 2 && !(p.outer_radius > 0.0)) {
    throw Error(ErrorCode::InfeasibleParams, "outer_radius must be positive when n1 > 2");
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<double> sigma1{p.gap.left, p.gap.right};
  for (Index k = 2; k < p.n1; ++k) {
    const bool left = unit(rng) < 0.5;
    const double offset = p.outer_radius * unit(rng);
    sigma1.push_back(left ? p.gap.left - offset : p.gap.right + offset);
  }

  const double lo = p.gap.left + p.d;
  const double hi = p.gap.right - p.d;
  std::vector<double> sigma0{p.pin_side == PinSide::Left ? lo : hi};
  for (Index k = 1; k < p.n0; ++k) sigma0.push_back(lo + (hi - lo) * unit(rng));

  MatrixC b = complex_gaussian(p.n0, p.n1, rng);
  b = p.v == 0.0 ? MatrixC::Zero(p.n0, p.n1) : MatrixC(b * cplx(p.v / op_norm(b)));

  std::optional<MatrixC> basis;
  if (p.conjugate) basis = random_unitary(p.n0 + p.n1, rng);
  return assemble_instance(sigma0, sigma1, p.gap, b, basis);
}

}  // namespace spl
