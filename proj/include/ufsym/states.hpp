#pragma once

// Quantum states, local parametrizations theta -> rho(theta) with analytic
// tangent operators, symmetric logarithmic derivatives and the quantum
// Fisher information, plus the usual distance measures.

#include <array>
#include <cstdint>
#include <random>
#include <vector>

#include "ufsym/matcore.hpp"

namespace ufsym {

/// Unit-trace positive semidefinite operator.
class DensityMatrix {
 public:
  /// Validates PSD (min eigenvalue >= -1e-10), unit trace (1e-10) and
  /// eigenvalues <= 1 + 1e-10.
  explicit DensityMatrix(const HermitianOperator& op);
  explicit DensityMatrix(const ComplexMatrix& m) : DensityMatrix(HermitianOperator(m)) {}

  static DensityMatrix maximally_mixed(int dim);

  int dim() const { return op_.dim(); }
  const HermitianOperator& op() const { return op_; }
  const ComplexMatrix& mat() const { return op_.mat(); }

  /// Eigenvalues, descending (cached at construction).
  const RealVector& spectrum() const { return eig_.values; }
  const EigenDecomposition& eig() const { return eig_; }

  bool is_pure(double tolerance = tol::kFullRank) const;
  bool is_full_rank(double tolerance = tol::kFullRank) const;

 private:
  HermitianOperator op_;
  EigenDecomposition eig_;
};

/// Unit vector in C^d.
class PureState {
 public:
  /// Requires ||v|| = 1 to 1e-12.
  explicit PureState(const ComplexVector& v);
  /// Normalizes any nonzero vector.
  static PureState normalized(const ComplexVector& v);

  int dim() const { return static_cast<int>(v_.size()); }
  const ComplexVector& vec() const { return v_; }
  ComplexMatrix projector() const { return ufsym::projector(v_); }
  DensityMatrix density() const;

 private:
  ComplexVector v_;
};

// --- qubit Bloch representation -----------------------------------------

using BlochVector = Eigen::Vector3d;

/// rho = (I + s . sigma)/2; requires |s| <= 1 + 1e-12.
DensityMatrix density_from_bloch(const BlochVector& s);
BlochVector bloch_from_density(const ComplexMatrix& rho);
/// Pure qubit state with unit Bloch vector n.
PureState pure_from_bloch(const BlochVector& n);

// --- parametrizations ---------------------------------------------------

enum class ParamKind { PureCanonical, AffineMixed, BlochQubit };

/// The derivatives rho_{,a} at the current parameter point, all traceless.
struct TangentSet {
  std::vector<HermitianOperator> derivatives;
  int size() const { return static_cast<int>(derivatives.size()); }
};

/// A chart theta -> rho(theta) with analytic tangents.
///
/// PureCanonical: a local chart around a base pure state |psi>. With an
///   orthonormal basis {|j>} whose first vector is |psi>, the chart is
///   |psi(theta)> ~ |0> + sum_j (x_j + i y_j)|j>; theta = (x_1..x_{d-1},
///   y_1..y_{d-1}) and theta = 0 at the base point, where the tangents are
///   |j><0| + |0><j| and i(|j><0| - |0><j|).
/// AffineMixed: rho(theta) = I/d + sum_a theta_a E_a with a traceless,
///   Hilbert-Schmidt orthonormal basis E_a (generalized Gell-Mann by default).
/// BlochQubit: rho(s) = (I + s . sigma)/2.
class Parametrization {
 public:
  static Parametrization pure_canonical(const PureState& base);
  /// Affine chart in the generalized Gell-Mann basis, positioned at rho.
  static Parametrization affine_mixed(const DensityMatrix& rho);
  /// Affine chart in a caller-supplied basis (validated), positioned at rho.
  static Parametrization affine_mixed(const DensityMatrix& rho, std::vector<HermitianOperator> basis);
  static Parametrization bloch_qubit(const BlochVector& s);

  ParamKind kind() const { return kind_; }
  int dim() const { return dim_; }
  int num_params() const { return static_cast<int>(theta_.size()); }
  const RealVector& theta() const { return theta_; }
  bool describes_pure_states() const { return kind_ == ParamKind::PureCanonical; }

  /// rho(theta) at the current point.
  DensityMatrix state() const { return state_at(theta_); }
  /// rho at another parameter value of the same chart; throws InvalidArgument
  /// if that point is not a valid state.
  DensityMatrix state_at(const RealVector& theta) const;
  /// Same chart, moved to a new parameter value.
  Parametrization with_theta(const RealVector& theta) const;

  TangentSet tangents() const;

  const ComplexMatrix& frame() const { return frame_; }
  const std::vector<HermitianOperator>& affine_basis() const { return basis_; }

 private:
  Parametrization() = default;
  ComplexMatrix pure_matrix_at(const RealVector& theta) const;

  ParamKind kind_ = ParamKind::BlochQubit;
  int dim_ = 2;
  RealVector theta_;
  ComplexMatrix frame_;                   // PureCanonical: unitary, column 0 = base state
  std::vector<HermitianOperator> basis_;  // AffineMixed
};

TangentSet tangent_ops(const Parametrization& param);

/// Generalized Gell-Mann basis with tr(E_a E_b) = delta_ab: symmetric
/// off-diagonals, antisymmetric off-diagonals, then diagonals.
std::vector<HermitianOperator> gell_mann_basis(int d);

/// Unitary whose first column is v; remaining columns complete an
/// orthonormal basis by Gram-Schmidt on the computational basis.
ComplexMatrix complete_basis(const ComplexVector& v);

// --- SLD and quantum Fisher information --------------------------------

/// Solves (rho L + L rho)/2 = drho. Full-rank rho uses the eigenbasis formula
/// L_jk = 2 drho_jk / (lambda_j + lambda_k); pure rho returns 2 drho, provided
/// drho lies in the tangent space of the pure-state manifold. Other ranks are
/// unsupported (InvalidArgument); see depolarize() for an explicit opt-in.
HermitianOperator sld(const DensityMatrix& rho, const HermitianOperator& drho);

/// J_ab = tr[rho (L_a L_b + L_b L_a)] / 2.
RealMatrix qfi_matrix(const DensityMatrix& rho, const TangentSet& tangents);
RealMatrix qfi_matrix(const Parametrization& param);

/// (1 - eps) rho + eps I/d.
DensityMatrix depolarize(const DensityMatrix& rho, double eps);

// --- distances ------------------------------------------------------------

/// Uhlmann fidelity (tr sqrt(rho^{1/2} sigma rho^{1/2}))^2, clamped to [0, 1].
double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);
/// sqrt(2 - 2 sqrt(F)).
double bures_distance(const DensityMatrix& rho, const DensityMatrix& sigma);
/// ||rho - sigma||_F.
double hs_distance(const DensityMatrix& rho, const DensityMatrix& sigma);

// --- random sampling --------------------------------------------------------

using Rng = std::mt19937_64;

ComplexVector gaussian_vector(int d, Rng& rng);
/// Haar-random pure state.
PureState random_pure_state(int d, Rng& rng);
/// Haar-random unitary (QR of a Ginibre matrix with phase correction).
ComplexMatrix random_unitary(int d, Rng& rng);
/// Full-rank state drawn from the Hilbert-Schmidt measure.
DensityMatrix random_density(int d, Rng& rng);

}  // namespace ufsym
