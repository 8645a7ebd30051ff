#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "spl/riccati.hpp"

using namespace spl;

namespace {

const double kS2 = std::sqrt(2.0);

PerturbationInstance golden() {
  MatrixC b(1, 2);
  b << 0.5, 0.0;
  return assemble_instance({0.0}, {-1.0, 1.0}, {-1.0, 1.0}, b);
}

PerturbationInstance random_r31(std::uint64_t seed, Index n0, Index n1, bool conjugate, double frac = 0.9) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  RandomInstanceParams p;
  p.n0 = n0;
  p.n1 = n1;
  p.gap = {-1.0 - u(rng), 1.0 + u(rng)};
  p.d = (0.1 + 0.9 * u(rng)) * p.gap.length() / 2;
  p.v = frac * u(rng) * std::sqrt(p.d * (p.gap.length() - p.d));
  p.pin_side = u(rng) < 0.5 ? PinSide::Left : PinSide::Right;
  p.conjugate = conjugate;
  return random_instance(p, rng());
}

}  // namespace

TEST_CASE("perturbed split of the golden 3x3 instance") {
  const auto ps = perturbed_split(golden());
  REQUIRE(ps.omega0.size() == 1);
  CHECK(ps.omega0[0] == doctest::Approx((kS2 - 1) / 2).epsilon(1e-14));
  REQUIRE(ps.omega1.size() == 2);
  CHECK(ps.omega1[0] == doctest::Approx(-(1 + kS2) / 2).epsilon(1e-14));
  CHECK(ps.omega1[1] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_FALSE(ps.gap_closed);
  REQUIRE(ps.enclosure.has_value());
  CHECK(ps.enclosure->upper == doctest::Approx(ps.omega0[0]).epsilon(1e-14));
}

TEST_CASE("unperturbed split is the original one") {
  MatrixC b = MatrixC::Zero(1, 2);
  const auto inst = assemble_instance({0.3}, {-1.0, 1.0}, {-1.0, 1.0}, b);
  const auto ps = perturbed_split(inst);
  CHECK(ps.omega0 == inst.split.sigma0);
  CHECK(ps.omega1 == inst.split.sigma1);
  CHECK(op_norm(MatrixC(ps.EL0.matrix - inst.split.E0.matrix)) <= 1e-14);
  const auto sol = angular_operator(inst, ps);
  CHECK(sol.mu == 0.0);
  CHECK(op_norm(MatrixC(sol.Lambda0 - inst.A0)) <= 1e-14);
  const auto g = verify_graph_props(sol, inst, ps);
  CHECK(g.measured == 0.0);
  CHECK(g.angle_residual == 0.0);
}

TEST_CASE("angular operator of the golden 3x3 instance") {
  const auto inst = golden();
  const auto ps = perturbed_split(inst);
  const auto sol = angular_operator(inst, ps);
  REQUIRE(sol.X.rows() == 2);
  REQUIRE(sol.X.cols() == 1);
  CHECK(std::abs(sol.X(0, 0) - cplx(kS2 - 1)) <= 1e-12);
  CHECK(std::abs(sol.X(1, 0)) <= 1e-12);
  CHECK(sol.mu == doctest::Approx(std::tan(M_PI / 8)).epsilon(1e-12));
  CHECK(sol.riccati_residual < 1e-12);
  CHECK(std::abs(sol.Lambda0(0, 0) - cplx((kS2 - 1) / 2)) <= 1e-12);
}

TEST_CASE("riccati residual") {
  const auto inst = golden();
  CHECK(riccati_residual(MatrixC::Zero(2, 1), inst.A0, inst.A1, MatrixC::Zero(1, 2)) == 0.0);
  const auto sol = angular_operator(inst, perturbed_split(inst));
  CHECK(riccati_residual(sol.X, inst.A0, inst.A1, inst.B) < 1e-12);
  MatrixC wrong = sol.X;
  wrong(0, 0) += 0.1;
  CHECK(riccati_residual(wrong, inst.A0, inst.A1, inst.B) > 0.05);
  CHECK_THROWS_AS(riccati_residual(MatrixC::Zero(1, 1), inst.A0, inst.A1, inst.B), Error);
}

TEST_CASE("eigenpair identities on the golden 3x3 instance") {
  const auto inst = golden();
  const auto sol = angular_operator(inst, perturbed_split(inst));
  const auto ids = lemma22_check(sol, inst);
  REQUIRE(ids.size() == 1);
  CHECK(ids[0].top);
  CHECK(ids[0].lambda == doctest::Approx(kS2 - 1).epsilon(1e-12));
  CHECK(ids[0].res26 < 1e-12);
  CHECK(ids[0].res27 < 1e-12);
  CHECK(ids[0].cross_imag < 1e-15);
}

TEST_CASE("kernel eigenpairs degenerate to zero residual") {
  // n0 = 2 with a coupling that touches only the first inner vector
  MatrixC b = MatrixC::Zero(2, 2);
  b(0, 0) = 0.3;
  const auto inst = assemble_instance({0.0, 0.2}, {-1.0, 1.0}, {-1.0, 1.0}, b);
  const auto sol = angular_operator(inst, perturbed_split(inst));
  const auto ids = lemma22_check(sol, inst);
  REQUIRE(ids.size() == 2);
  CHECK(ids[0].lambda == doctest::Approx(0.0));
  CHECK(ids[0].res26 <= 1e-14);
  CHECK(ids[0].res27 <= 1e-14);
  CHECK(ids[1].top);
}

TEST_CASE("graph properties of the golden 3x3 instance") {
  const auto inst = golden();
  const auto ps = perturbed_split(inst);
  const auto sol = angular_operator(inst, ps);
  const auto g = verify_graph_props(sol, inst, ps);
  CHECK(g.measured == doctest::Approx(std::sin(M_PI / 8)).epsilon(1e-12));
  CHECK(g.predicted == doctest::Approx(std::sin(M_PI / 8)).epsilon(1e-12));
  CHECK(g.angle_residual < 1e-12);
  CHECK(g.graph1_residual < 1e-12);
  CHECK(g.spec0_residual < 1e-12);
  CHECK(g.spec1_residual < 1e-12);
  CHECK(g.lambda0_spec_residual < 1e-12);
}

TEST_CASE("random instances under the strongest hypothesis") {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    const auto inst = random_r31(seed, 1 + seed % 4, 2 + seed % 5, seed % 2 == 0);
    const auto ps = perturbed_split(inst);
    REQUIRE_FALSE(ps.gap_closed);
    const auto sol = angular_operator(inst, ps);
    const double scale = std::pow(inst.A.norm() + inst.v, 2);
    CHECK(sol.riccati_residual <= 1e-8 * scale);
    CHECK(sol.mu < 1.0);
    const auto g = verify_graph_props(sol, inst, ps);
    CHECK(g.angle_residual <= 1e-8);
    CHECK(g.graph1_residual <= 1e-8);
    CHECK(g.lambda0_hermitian_residual <= 1e-8 * std::max(1.0, scale));
    for (const auto& id : lemma22_check(sol, inst)) {
      CHECK(id.res26 <= 1e-9 * scale);
      CHECK(id.res27 <= 1e-9 * scale);
      CHECK(id.cross_imag <= 1e-9 * scale);
    }
  }
}

TEST_CASE("shift invariance of the angular operator") {
  for (std::uint64_t seed = 100; seed < 130; ++seed) {
    const auto inst = random_r31(seed, 3, 4, true);
    const double c = inst.split.gap.center();
    const auto sh = shifted(inst, c);
    const auto x = angular_operator(inst, perturbed_split(inst)).X;
    const auto xs = angular_operator(sh, perturbed_split(sh)).X;
    CHECK(op_norm(MatrixC(x - xs)) <= 1e-8);
  }
}

TEST_CASE("basis independence of the angular operator") {
  std::mt19937_64 rng(77);
  for (std::uint64_t seed = 200; seed < 230; ++seed) {
    const auto inst = random_r31(seed, 3, 3, true);
    const auto ps = perturbed_split(inst);
    const MatrixC rot = random_unitary(3, rng);
    const auto a = angular_operator(inst, ps.basis0);
    const auto b = angular_operator(inst, MatrixC(ps.basis0 * rot));
    CHECK(op_norm(MatrixC(a.X - b.X)) <= 1e-9);
  }
}

TEST_CASE("wrong-rank subspace basis is rejected") {
  const auto inst = golden();
  try {
    angular_operator(inst, MatrixC::Identity(3, 2));
    FAIL("expected RankMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::RankMismatch);
  }
}

TEST_CASE("subspace orthogonal to the inner block is not a graph") {
  const auto inst = golden();
  MatrixC y = MatrixC::Zero(3, 1);
  y(2, 0) = 1.0;
  try {
    angular_operator(inst, y);
    FAIL("expected NotAGraph");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotAGraph);
  }
}

TEST_CASE("mu is continuous along B -> tB") {
  const auto base = random_r31(300, 2, 3, false, 0.999);
  double prev = 0.0;
  double max_jump = 0.0;
  std::vector<double> mus;
  for (int k = 0; k <= 10; ++k) {
    const double t = k / 10.0;
    const auto inst = make_instance(base.A0, base.A1, MatrixC(base.B * cplx(t)), base.split.gap);
    const double mu = angular_operator(inst, perturbed_split(inst)).mu;
    mus.push_back(mu);
    if (k == 0) CHECK(mu == 0.0);
    if (k > 0) max_jump = std::max(max_jump, std::abs(mu - prev));
    prev = mu;
  }
  // A discontinuity would show up as one step far larger than the typical one.
  const double mean_step = mus.back() / 10.0;
  CHECK(max_jump <= 10.0 * std::max(mean_step, 1e-12));
  // Fine sampling around the coarse steps agrees with linear interpolation to first order.
  for (int k = 1; k < 10; ++k) {
    const double t = k / 10.0 + 1e-3;
    const auto inst = make_instance(base.A0, base.A1, MatrixC(base.B * cplx(t)), base.split.gap);
    const double mu = angular_operator(inst, perturbed_split(inst)).mu;
    CHECK(std::abs(mu - mus[static_cast<std::size_t>(k)]) <= 10.0 * 1e-3 * std::max(mean_step * 10.0, 1e-12));
  }
}
