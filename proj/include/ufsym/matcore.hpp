#pragma once

// Dense complex linear algebra for small Hilbert spaces: tensor products,
// partial traces, swap and (anti)symmetric projectors, and a Jacobi
// eigensolver for Hermitian operators.
//
// Two-copy operators use the basis |jk> = |j> (x) |k> with j major, i.e.
// index j*d + k. Everything that serializes operators relies on this order.

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace ufsym {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Shared numerical tolerances. Hermiticity, PSD and idempotence checks are
/// relative to the Frobenius norm of the operator under test.
namespace tol {
inline constexpr double kHermitian = 1e-12;
inline constexpr double kPsd = 1e-10;
inline constexpr double kTrace = 1e-10;
inline constexpr double kRank = 1e-9;
inline constexpr double kPureNorm = 1e-12;
inline constexpr double kFullRank = 1e-10;
}  // namespace tol

/// Precondition violations and malformed inputs.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Numerical breakdown: singular matrices, non-convergence.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A square complex matrix equal to its adjoint.
///
/// Construction symmetrizes the input to (A + A^dagger)/2 after checking that
/// the asymmetry ||A - A^dagger||_F is at most 1e-12 * ||A||_F; anything more
/// asymmetric is rejected with InvalidArgument.
class HermitianOperator {
 public:
  HermitianOperator() = default;
  explicit HermitianOperator(const ComplexMatrix& m);

  /// Symmetrizes without the asymmetry check; for results of exact algebra
  /// (A^dagger A, U A U^dagger) that are Hermitian up to rounding.
  static HermitianOperator symmetrized(const ComplexMatrix& m);
  static HermitianOperator identity(int dim);
  static HermitianOperator zero(int dim);

  int dim() const { return static_cast<int>(m_.rows()); }
  const ComplexMatrix& mat() const { return m_; }
  Complex operator()(int r, int c) const { return m_(r, c); }

  double trace() const { return m_.trace().real(); }
  double norm() const { return m_.norm(); }

  HermitianOperator operator+(const HermitianOperator& o) const;
  HermitianOperator operator-(const HermitianOperator& o) const;
  HermitianOperator operator*(double s) const;

 private:
  ComplexMatrix m_;
};

inline HermitianOperator operator*(double s, const HermitianOperator& a) { return a * s; }

/// Eigenvalues sorted in descending order with matching orthonormal columns.
struct EigenDecomposition {
  RealVector values;
  ComplexMatrix vectors;

  /// Rebuilds sum_j f(lambda_j) v_j v_j^dagger.
  template <class F>
  ComplexMatrix apply(F&& f) const {
    const auto n = values.size();
    ComplexMatrix scaled = vectors;
    for (Eigen::Index j = 0; j < n; ++j) scaled.col(j) *= f(values(j));
    return scaled * vectors.adjoint();
  }
};

// --- constructors for common operators ---------------------------------

ComplexMatrix pauli(int index);  // 0 -> I, 1 -> X, 2 -> Y, 3 -> Z
ComplexMatrix projector(const ComplexVector& v);  // |v><v|
ComplexVector basis_vector(int dim, int index);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexVector kron(const ComplexVector& a, const ComplexVector& b);

/// Which tensor factor of H (x) H is traced out.
enum class Subsystem { First = 1, Second = 2 };

/// Partial trace of an operator on C^{dim_a} (x) C^{dim_b}.
ComplexMatrix partial_trace(const ComplexMatrix& m, int dim_a, int dim_b, Subsystem traced);

/// Partial trace of an operator on H (x) H; the dimension must be a perfect square.
HermitianOperator partial_trace(const HermitianOperator& m, Subsystem traced);

/// V = sum_{jk} |jk><kj| on C^d (x) C^d.
HermitianOperator swap_operator(int d);
/// P+ = (I + V)/2.
HermitianOperator sym_projector(int d);
/// P- = (I - V)/2.
HermitianOperator antisym_projector(int d);

/// Cyclic complex Jacobi eigensolver. Throws NumericalError if the sweep cap
/// is hit before the off-diagonal mass drops below machine precision.
EigenDecomposition hermitian_eig(const HermitianOperator& a);
EigenDecomposition hermitian_eig(const ComplexMatrix& a);

/// Behaviour of mat_power for p < 0 when an eigenvalue is below null_tolerance.
enum class InversePolicy { Strict, PseudoInverse };

/// A^p through the eigendecomposition of a PSD operator. Eigenvalues in
/// [-null_tolerance, 0) are clipped to zero; anything more negative is an
/// error. For p < 0, eigenvalues at or below null_tolerance either throw
/// (Strict) or are dropped from the inverse (PseudoInverse).
HermitianOperator mat_power(const HermitianOperator& a, double p, double null_tolerance = tol::kPsd,
                            InversePolicy policy = InversePolicy::Strict);

/// tr(A^dagger B).
Complex hs_inner(const ComplexMatrix& a, const ComplexMatrix& b);
Complex hs_inner(const HermitianOperator& a, const HermitianOperator& b);

/// tr(A B) for Hermitian A, B without forming the product.
double trace_product(const ComplexMatrix& a, const ComplexMatrix& b);

double min_eigenvalue(const HermitianOperator& a);
/// Number of eigenvalues above rel_tol * ||A||_F.
int numerical_rank(const HermitianOperator& a, double rel_tol = tol::kRank);
bool is_psd(const HermitianOperator& a, double rel_tol = tol::kPsd);
/// Spectral norm of a Hermitian operator.
double spectral_norm(const HermitianOperator& a);

/// Exact integer square root or InvalidArgument.
int checked_sqrt_dim(int n, const std::string& what);

}  // namespace ufsym
