#include <doctest.h>

#include <cmath>

#include "test_support.hpp"
#include "ufsym/fisher.hpp"
#include "ufsym/states.hpp"

using namespace ufsym;
using namespace ufsym::testing;

TEST_CASE("density matrix validation") {
  CHECK_NOTHROW(DensityMatrix::maximally_mixed(3));
  ComplexMatrix m = ComplexMatrix::Identity(2, 2);
  CHECK_THROWS_AS(DensityMatrix{m}, InvalidArgument);  // trace 2
  m << 1.5, 0, 0, -0.5;
  CHECK_THROWS_AS(DensityMatrix{m}, InvalidArgument);  // negative eigenvalue
  CHECK(density_from_bloch(BlochVector(0, 0, 1)).is_pure());
  CHECK(!density_from_bloch(BlochVector(0, 0, 0.5)).is_pure());
  CHECK(density_from_bloch(BlochVector(0, 0, 0.5)).is_full_rank());
  CHECK_THROWS_AS(density_from_bloch(BlochVector(0, 0, 1.01)), InvalidArgument);
}

TEST_CASE("Bloch representation") {
  CHECK(max_abs(density_from_bloch(BlochVector::Zero()).mat() - 0.5 * ComplexMatrix::Identity(2, 2)) == 0.0);
  CHECK(max_abs(density_from_bloch(BlochVector(0, 0, 1)).mat() - projector(basis_vector(2, 0))) == 0.0);
  const auto spec = density_from_bloch(BlochVector(0.5, 0, 0)).spectrum();
  CHECK(std::abs(spec(0) - 0.75) < 1e-15);
  CHECK(std::abs(spec(1) - 0.25) < 1e-15);
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const BlochVector s = random_bloch(rng, 1.0);
    CHECK((bloch_from_density(density_from_bloch(s).mat()) - s).norm() < 1e-15);
    const BlochVector n = s.normalized();
    CHECK((bloch_from_density(pure_from_bloch(n).projector()) - n).norm() < 1e-14);
  }
}

TEST_CASE("tangents of every chart match central differences of the chart") {
  Rng rng(12);
  const double h = 1e-6;
  std::vector<Parametrization> charts;
  for (int d = 2; d <= 3; ++d) {
    charts.push_back(Parametrization::pure_canonical(random_pure_state(d, rng)));
    charts.push_back(Parametrization::affine_mixed(random_density(d, rng)));
  }
  charts.push_back(Parametrization::bloch_qubit(random_bloch(rng, 0.9)));
  for (const auto& p : charts) {
    const auto t = p.tangents();
    REQUIRE(t.size() == p.num_params());
    for (int a = 0; a < t.size(); ++a) {
      RealVector up = p.theta(), down = p.theta();
      up(a) += h;
      down(a) -= h;
      const ComplexMatrix fd = (p.state_at(up).mat() - p.state_at(down).mat()) / (2 * h);
      CHECK(max_abs(fd - t.derivatives[a].mat()) < 1e-8);
      CHECK(std::abs(t.derivatives[a].trace()) < 1e-10);
    }
  }
}

TEST_CASE("canonical pure tangents take the standard off-diagonal form") {
  const auto p = Parametrization::pure_canonical(PureState(basis_vector(3, 0)));
  CHECK(p.num_params() == 4);
  const auto t = p.tangents();
  const ComplexVector e0 = basis_vector(3, 0);
  for (int j = 1; j <= 2; ++j) {
    const ComplexVector ej = basis_vector(3, j);
    const ComplexMatrix plus = ej * e0.adjoint() + e0 * ej.adjoint();
    const ComplexMatrix minus = Complex(0, 1) * (ej * e0.adjoint() - e0 * ej.adjoint());
    CHECK(max_abs(t.derivatives[j - 1].mat() - plus) < 1e-15);
    CHECK(max_abs(t.derivatives[1 + j].mat() - minus) < 1e-15);
  }
  const auto q = Parametrization::pure_canonical(PureState(basis_vector(2, 0))).tangents();
  CHECK(max_abs(q.derivatives[0].mat() - pauli(1)) < 1e-15);
  CHECK(max_abs(q.derivatives[1].mat() - pauli(2)) < 1e-15);
}

TEST_CASE("Gell-Mann basis is traceless and orthonormal") {
  for (int d = 2; d <= 5; ++d) {
    const auto e = gell_mann_basis(d);
    REQUIRE(static_cast<int>(e.size()) == d * d - 1);
    for (size_t a = 0; a < e.size(); ++a) {
      CHECK(std::abs(e[a].trace()) < 1e-14);
      for (size_t b = 0; b < e.size(); ++b) CHECK(std::abs(trace_product(e[a].mat(), e[b].mat()) - (a == b)) < 1e-14);
    }
  }
  const auto e2 = gell_mann_basis(2);
  CHECK(max_abs(e2[0].mat() - pauli(1) / std::sqrt(2.0)) < 1e-15);
  CHECK(max_abs(e2[1].mat() - pauli(2) / std::sqrt(2.0)) < 1e-15);
  CHECK(max_abs(e2[2].mat() - pauli(3) / std::sqrt(2.0)) < 1e-15);
}

TEST_CASE("affine chart rejects a non-orthonormal basis and invalid points") {
  auto basis = gell_mann_basis(2);
  basis[0] = basis[0] * 2.0;
  CHECK_THROWS_AS(Parametrization::affine_mixed(DensityMatrix::maximally_mixed(2), basis), InvalidArgument);
  const auto p = Parametrization::affine_mixed(DensityMatrix::maximally_mixed(2));
  RealVector far = RealVector::Constant(3, 5.0);
  CHECK_THROWS_AS(p.state_at(far), InvalidArgument);
}

TEST_CASE("SLD examples and residuals") {
  const auto mixed = DensityMatrix::maximally_mixed(2);
  const HermitianOperator sx2 = HermitianOperator::symmetrized(pauli(1) / 2.0);
  CHECK(max_abs(sld(mixed, sx2).mat() - pauli(1)) < 1e-14);

  const DensityMatrix zero = PureState(basis_vector(2, 0)).density();
  const HermitianOperator t = HermitianOperator::symmetrized(pauli(1));
  CHECK(max_abs(sld(zero, t).mat() - 2.0 * pauli(1)) < 1e-15);
  // A drho that would leave the pure-state manifold.
  CHECK_THROWS_AS(sld(zero, HermitianOperator::symmetrized(pauli(3))), InvalidArgument);

  Rng rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    const int d = uniform_int(rng, 2, 4);
    const DensityMatrix rho = random_density(d, rng);
    ComplexMatrix x = random_hermitian(d, rng).mat();
    x -= x.trace() / double(d) * ComplexMatrix::Identity(d, d);
    const HermitianOperator drho = HermitianOperator::symmetrized(x);
    const ComplexMatrix l = sld(rho, drho).mat();
    CHECK((0.5 * (rho.mat() * l + l * rho.mat()) - drho.mat()).norm() <= 1e-9);
  }
}

TEST_CASE("SLD refuses rank-deficient mixed states") {
  ComplexMatrix m = ComplexMatrix::Zero(3, 3);
  m(0, 0) = m(1, 1) = 0.5;
  const DensityMatrix rho(m);
  CHECK_THROWS_AS(sld(rho, HermitianOperator::zero(3)), InvalidArgument);
  CHECK_NOTHROW(sld(depolarize(rho, 1e-3), HermitianOperator::zero(3)));
}

TEST_CASE("QFI closed forms") {
  Rng rng(14);
  for (int trial = 0; trial < 30; ++trial) {
    const BlochVector s = random_bloch(rng, 0.99);
    const RealMatrix expected = RealMatrix::Identity(3, 3) + s * s.transpose() / (1.0 - s.squaredNorm());
    CHECK(max_abs(qfi_matrix(Parametrization::bloch_qubit(s)) - expected) < 1e-9 * expected.norm());
  }
  for (int d = 2; d <= 4; ++d) {
    const auto pure = Parametrization::pure_canonical(random_pure_state(d, rng));
    CHECK(max_abs(qfi_matrix(pure) - 4.0 * RealMatrix::Identity(2 * d - 2, 2 * d - 2)) < 1e-12);
    const auto mixed = Parametrization::affine_mixed(DensityMatrix::maximally_mixed(d));
    CHECK(max_abs(qfi_matrix(mixed) - d * RealMatrix::Identity(d * d - 1, d * d - 1)) < 1e-12);
  }
}

TEST_CASE("QFI of nearly pure depolarized states converges to the pure-state value") {
  Rng rng(15);
  for (int d = 2; d <= 3; ++d) {
    const auto chart = Parametrization::pure_canonical(random_pure_state(d, rng));
    const auto t = chart.tangents();
    RealMatrix shortcut(t.size(), t.size());
    for (int a = 0; a < t.size(); ++a)
      for (int b = 0; b < t.size(); ++b) shortcut(a, b) = 2.0 * trace_product(t.derivatives[a].mat(), t.derivatives[b].mat());
    const double eps = 1e-6;
    TangentSet scaled;
    for (const auto& x : t.derivatives) scaled.derivatives.push_back(x * (1.0 - eps));
    const RealMatrix j = qfi_matrix(depolarize(chart.state(), eps), scaled);
    CHECK((j - shortcut).norm() <= 1e-3 * shortcut.norm());
  }
}

TEST_CASE("swap-operator identity on random states") {
  Rng rng(16);
  for (int trial = 0; trial < 10; ++trial) {
    for (int d = 2; d <= 3; ++d) {
      const auto mixed = Parametrization::affine_mixed(random_density(d, rng));
      CHECK(max_abs(swap_identity_lhs(mixed) - swap_identity_rhs(mixed.state().mat())) < 1e-8);
      const auto pure = Parametrization::pure_canonical(random_pure_state(d, rng));
      CHECK(max_abs(swap_identity_lhs(pure) - swap_identity_rhs(pure.state().mat())) < 1e-8);
    }
  }
}

TEST_CASE("tr(J^-1 I) is invariant under linear reparametrization") {
  Rng rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = uniform_int(rng, 2, 3);
    const auto chart = Parametrization::affine_mixed(random_density(d, rng));
    const Povm p = random_rank_one_povm(d, rng);
    const double base = gm_value(qfi_matrix(chart), fisher_matrix(chart, p).I);
    // theta' = M theta, so d/dtheta'_a = sum_b (M^{-1})_ba d/dtheta_b.
    const int g = chart.num_params();
    RealMatrix m = RealMatrix::Identity(g, g);
    for (int r = 0; r < g; ++r)
      for (int c = 0; c < g; ++c) m(r, c) += uniform(rng, -0.4, 0.4);
    const RealMatrix minv = m.inverse();
    const auto t = chart.tangents();
    TangentSet moved;
    for (int a = 0; a < g; ++a) {
      ComplexMatrix x = ComplexMatrix::Zero(d, d);
      for (int b = 0; b < g; ++b) x += minv(b, a) * t.derivatives[b].mat();
      moved.derivatives.push_back(HermitianOperator::symmetrized(x));
    }
    const RealVector probs = outcome_probs(chart.state(), p);
    RealMatrix i = RealMatrix::Zero(g, g);
    for (int k = 0; k < p.size(); ++k) {
      RealVector dp(g);
      for (int a = 0; a < g; ++a) dp(a) = trace_product(moved.derivatives[a].mat(), p.elements[k].mat());
      i += dp * dp.transpose() / probs(k);
    }
    const double moved_value = gm_value(qfi_matrix(chart.state(), moved), i);
    CHECK(std::abs(moved_value - base) < 1e-9);
  }
}

TEST_CASE("fidelity and distances") {
  Rng rng(18);
  const DensityMatrix zero = PureState(basis_vector(2, 0)).density(), one = PureState(basis_vector(2, 1)).density();
  CHECK(fidelity(zero, one) < 1e-15);
  CHECK(std::abs(bures_distance(zero, one) - std::sqrt(2.0)) < 1e-12);
  for (int trial = 0; trial < 30; ++trial) {
    const BlochVector r = random_bloch(rng, 1.0), s = random_bloch(rng, 1.0);
    const DensityMatrix a = density_from_bloch(r), b = density_from_bloch(s);
    // Qubit closed form: F = (1 + r.s + sqrt((1 - r^2)(1 - s^2)))/2.
    const double f = 0.5 * (1.0 + r.dot(s) + std::sqrt((1.0 - r.squaredNorm()) * (1.0 - s.squaredNorm())));
    CHECK(std::abs(fidelity(a, b) - f) < 1e-9);
    CHECK(std::abs(fidelity(a, a) - 1.0) < 1e-9);
    CHECK(std::abs(hs_distance(a, b) * hs_distance(a, b) - 0.5 * (r - s).squaredNorm()) < 1e-14);
    CHECK(std::abs(bures_distance(a, b) - std::sqrt(2.0 - 2.0 * std::sqrt(fidelity(a, b)))) < 1e-15);
  }
}

TEST_CASE("random generators") {
  Rng rng(19);
  for (int d = 2; d <= 5; ++d) {
    const ComplexMatrix u = random_unitary(d, rng);
    CHECK(max_abs(u.adjoint() * u - ComplexMatrix::Identity(d, d)) < 1e-12);
    CHECK(std::abs(random_pure_state(d, rng).vec().norm() - 1.0) < 1e-12);
    CHECK(random_density(d, rng).is_full_rank());
  }
  Rng a(7), b(7);
  CHECK(max_abs(random_unitary(3, a) - random_unitary(3, b)) == 0.0);
}
