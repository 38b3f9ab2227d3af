#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "test_support.hpp"
#include "ufsym/matcore.hpp"

using namespace ufsym;
using namespace ufsym::testing;

TEST_CASE("pauli matrices square to the identity and anticommute") {
  const ComplexMatrix id = ComplexMatrix::Identity(2, 2);
  for (int a = 1; a <= 3; ++a) {
    CHECK(max_abs(pauli(a) * pauli(a) - id) == 0.0);
    for (int b = a + 1; b <= 3; ++b) CHECK(max_abs(pauli(a) * pauli(b) + pauli(b) * pauli(a)) == 0.0);
  }
  CHECK(max_abs(pauli(1) * pauli(2) - Complex(0, 1) * pauli(3)) == 0.0);
}

TEST_CASE("HermitianOperator rejects asymmetric input and symmetrizes rounding noise") {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 1) = 1.0;
  CHECK_THROWS_AS(HermitianOperator{m}, InvalidArgument);
  m(1, 0) = 1.0 + 1e-14;
  const HermitianOperator h(m);
  CHECK(h(0, 1) == h(1, 0));
  CHECK_THROWS_AS(HermitianOperator{ComplexMatrix(2, 3)}, InvalidArgument);
}

TEST_CASE("kron places the first factor on the major index") {
  const ComplexVector a = basis_vector(3, 1), b = basis_vector(2, 0);
  const ComplexVector ab = kron(a, b);
  CHECK(ab.size() == 6);
  CHECK(ab(1 * 2 + 0) == Complex(1.0));
  Rng rng(1);
  const ComplexMatrix x = ginibre(2, 2, rng), y = ginibre(3, 3, rng);
  const ComplexMatrix k = kron(x, y);
  CHECK(k(1 * 3 + 2, 0 * 3 + 1) == x(1, 0) * y(2, 1));
}

TEST_CASE("partial traces of a product operator") {
  Rng rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const int da = uniform_int(rng, 1, 4), db = uniform_int(rng, 1, 4);
    const ComplexMatrix a = ginibre(da, da, rng), b = ginibre(db, db, rng);
    const ComplexMatrix ab = kron(a, b);
    CHECK(max_abs(partial_trace(ab, da, db, Subsystem::First) - a.trace() * b) < 1e-12);
    CHECK(max_abs(partial_trace(ab, da, db, Subsystem::Second) - b.trace() * a) < 1e-12);
  }
}

TEST_CASE("partial trace is linear and preserves the total trace") {
  Rng rng(3);
  const ComplexMatrix m = ginibre(6, 6, rng);
  CHECK(std::abs(partial_trace(m, 2, 3, Subsystem::First).trace() - m.trace()) < 1e-12);
  CHECK(std::abs(partial_trace(m, 2, 3, Subsystem::Second).trace() - m.trace()) < 1e-12);
  CHECK_THROWS_AS(partial_trace(m, 2, 2, Subsystem::First), InvalidArgument);
}

TEST_CASE("swap operator and the symmetric and antisymmetric projectors") {
  Rng rng(4);
  for (int d = 2; d <= 4; ++d) {
    const ComplexMatrix v = swap_operator(d).mat();
    const ComplexVector x = gaussian_vector(d, rng), y = gaussian_vector(d, rng);
    CHECK((v * kron(x, y) - kron(y, x)).norm() < 1e-12);
    const ComplexMatrix pp = sym_projector(d).mat(), pm = antisym_projector(d).mat();
    CHECK(max_abs(pp * pp - pp) < 1e-12);
    CHECK(max_abs(pm * pm - pm) < 1e-12);
    CHECK(max_abs(pp * pm) < 1e-12);
    CHECK(std::abs(pp.trace().real() - d * (d + 1) / 2.0) < 1e-12);
    CHECK(std::abs(pm.trace().real() - d * (d - 1) / 2.0) < 1e-12);
    // tr(V (A (x) B)) = tr(AB).
    const ComplexMatrix a = ginibre(d, d, rng), b = ginibre(d, d, rng);
    CHECK(std::abs((v * kron(a, b)).trace() - (a * b).trace()) < 1e-10);
  }
}

TEST_CASE("Jacobi eigensolver agrees with an independent solver") {
  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const int d = uniform_int(rng, 1, 9);
    const HermitianOperator h = random_hermitian(d, rng);
    const auto eig = hermitian_eig(h);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> ref(h.mat());
    RealVector expected = ref.eigenvalues().reverse();
    CHECK((eig.values - expected).norm() < 1e-11 * (1.0 + h.norm()));
    for (Eigen::Index j = 1; j < eig.values.size(); ++j) CHECK(eig.values(j - 1) >= eig.values(j));
    CHECK(max_abs(eig.vectors.adjoint() * eig.vectors - ComplexMatrix::Identity(d, d)) < 1e-12);
    CHECK(max_abs(eig.apply([](double x) { return x; }) - h.mat()) < 1e-11 * (1.0 + h.norm()));
  }
}

TEST_CASE("Jacobi eigensolver handles degenerate spectra") {
  Rng rng(6);
  const ComplexMatrix u = random_unitary(5, rng);
  RealVector lam(5);
  lam << 2.0, 2.0, 2.0, -1.0, -1.0;
  const ComplexMatrix m = u * lam.cast<Complex>().asDiagonal() * u.adjoint();
  const auto eig = hermitian_eig(HermitianOperator::symmetrized(m));
  CHECK((eig.values - lam).norm() < 1e-12);
  CHECK(max_abs(eig.apply([](double x) { return x; }) - m) < 1e-12);
}

TEST_CASE("mat_power: square roots, inverses and pseudo-inverses") {
  Rng rng(7);
  const ComplexMatrix g = ginibre(4, 4, rng);
  const HermitianOperator a = HermitianOperator::symmetrized(g * g.adjoint());
  const ComplexMatrix r = mat_power(a, 0.5).mat();
  CHECK(max_abs(r * r - a.mat()) < 1e-10);
  CHECK(max_abs(mat_power(a, -1.0).mat() * a.mat() - ComplexMatrix::Identity(4, 4)) < 1e-9);

  const HermitianOperator p = HermitianOperator::symmetrized(projector(basis_vector(3, 0)) * 2.0);
  CHECK_THROWS_AS(mat_power(p, -1.0), NumericalError);
  const ComplexMatrix pinv = mat_power(p, -1.0, 1e-10, InversePolicy::PseudoInverse).mat();
  CHECK(std::abs(pinv(0, 0) - Complex(0.5)) < 1e-14);
  CHECK(std::abs(pinv(1, 1)) < 1e-14);

  const HermitianOperator neg = HermitianOperator::symmetrized(-ComplexMatrix::Identity(2, 2));
  CHECK_THROWS_AS(mat_power(neg, 0.5), InvalidArgument);
}

TEST_CASE("trace_product and hs_inner agree with explicit products") {
  Rng rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = uniform_int(rng, 1, 6);
    const HermitianOperator a = random_hermitian(d, rng), b = random_hermitian(d, rng);
    CHECK(std::abs(trace_product(a.mat(), b.mat()) - (a.mat() * b.mat()).trace().real()) < 1e-11);
    CHECK(std::abs(hs_inner(a, b) - (a.mat().adjoint() * b.mat()).trace()) < 1e-11);
  }
}

TEST_CASE("rank, PSD and norm helpers") {
  Rng rng(9);
  const ComplexMatrix g = ginibre(5, 2, rng);
  const HermitianOperator a = HermitianOperator::symmetrized(g * g.adjoint());
  CHECK(numerical_rank(a) == 2);
  CHECK(is_psd(a));
  CHECK(!is_psd(HermitianOperator::symmetrized(-g * g.adjoint())));
  CHECK(std::abs(spectral_norm(a) - hermitian_eig(a).values(0)) < 1e-12);
  CHECK(min_eigenvalue(a) > -1e-12);
  CHECK(checked_sqrt_dim(9, "x") == 3);
  CHECK_THROWS_AS(checked_sqrt_dim(8, "x"), InvalidArgument);
}
