#pragma once

// Outcome probabilities and classical Fisher information of one- and
// two-copy POVMs, Gill-Massar functionals and bounds, Fisher-symmetry
// verdicts, WMSE bounds, and a finite-difference oracle.

#include <string>
#include <vector>

#include "ufsym/povm.hpp"
#include "ufsym/states.hpp"

namespace ufsym {

/// p_xi = tr(rho^{(x)t} Pi_xi).
RealVector outcome_probs(const DensityMatrix& rho, const Povm& p);

struct DroppedOutcome {
  int index = 0;
  double probability = 0.0;
  double max_abs_derivative = 0.0;
};

struct FisherMatrixResult {
  RealMatrix I;
  RealVector probs;
  std::vector<DroppedOutcome> dropped;
  /// A dropped outcome has |dp| above 1e-6.
  bool regularity_warning = false;
};

inline constexpr double kDropThreshold = 1e-12;
inline constexpr double kRegularityThreshold = 1e-6;

/// I_ab = sum over p_xi > drop_threshold of dp_a dp_b / p, with
/// dp_a = tr[(rho_a (x) rho + rho (x) rho_a) Pi] for two copies.
FisherMatrixResult fisher_matrix(const Parametrization& param, const Povm& p,
                                 double drop_threshold = kDropThreshold);

/// tr(J^{-1} I); throws NumericalError when lambda_min(J) <= 1e-10.
double gm_value(const RealMatrix& J, const RealMatrix& I);

enum class GmMode { SingleCopySeparable, TwoCopyCollective, PureAnyN };

const char* gm_mode_name(GmMode mode);

/// d - 1, 3d - 3, or copies * (d - 1).
double gm_bound(GmMode mode, int d, int copies);

struct GmVerdict {
  double gm = 0.0;
  double bound = 0.0;
  bool within_bound = false;
  bool equality = false;
  /// Structural equality conditions: rank-one elements with positive
  /// probabilities (one copy) or a coherent POVM (two copies).
  bool structure_holds = false;
  /// equality == structure_holds.
  bool consistent = false;
};

GmVerdict gm_check(const Parametrization& param, const Povm& p, GmMode mode, double tol = 1e-6);

enum class SymmetryKind { FisherSymmetric, WeaklyFisherSymmetric, Neither };

const char* symmetry_name(SymmetryKind kind);

struct SymmetryVerdict {
  SymmetryKind kind = SymmetryKind::Neither;
  double fitted_scale = 0.0;   // c minimizing ||I - c J||_F
  double weak_residual = 0.0;  // ||I - c J||_F / ||c J||_F
  double target_scale = 0.0;   // t/2 pure, 1/(d+1) or 3/(d+1) mixed
  double full_residual = 0.0;  // ||I - target J||_F / ||target J||_F
};

/// Target factor for Fisher symmetry: t/2 on pure states; 1/(d+1) (one
/// copy) or 3/(d+1) (two copies) on mixed states.
double symmetry_target(bool pure, int d, int copies);

SymmetryVerdict symmetry_from_matrices(const RealMatrix& J, const RealMatrix& I, double target, double tol = 1e-6);
SymmetryVerdict fisher_symmetry_check(const Parametrization& param, const Povm& p, double tol = 1e-6);

enum class WmseMode { SeparableGM, TwoCopy };

/// (tr sqrt(J^{-1/2} W J^{-1/2}))^2 / (d - 1), or 2/(3(d-1)) times the same
/// for two-copy measurements.
double wmse_bound(const RealMatrix& J, const RealMatrix& W, WmseMode mode, int d);

/// c J^{1/2} (sqrt(R) / tr sqrt(R)) J^{1/2} with R = J^{-1/2} W J^{-1/2} and
/// c = d - 1 or 3(d - 1). Throws InvalidArgument for W = 0.
RealMatrix optimal_fisher(const RealMatrix& J, const RealMatrix& W, WmseMode mode, int d);

/// Central differences of outcome_probs; throws InvalidArgument when a
/// displaced point leaves the state space.
RealMatrix fisher_fd_oracle(const Parametrization& param, const Povm& p, double h);

struct FisherReport {
  RealMatrix I;
  RealMatrix J;
  RealVector probs;
  GmMode mode = GmMode::SingleCopySeparable;
  GmVerdict gm;
  SymmetryVerdict symmetry;
  std::vector<DroppedOutcome> dropped;
  bool regularity_warning = false;
};

FisherReport fisher_report(const Parametrization& param, const Povm& p, GmMode mode, double tol = 1e-6);

/// Mode implied by the POVM and state: pure states use PureAnyN, otherwise
/// one copy is separable and two copies are collective.
GmMode default_gm_mode(const Parametrization& param, const Povm& p);

// --- real symmetric helpers ---------------------------------------------------

/// f(A) for symmetric A via its eigendecomposition; eigenvalues in
/// [-1e-10, 0) are clipped to zero, more negative ones throw InvalidArgument.
RealMatrix symmetric_function(const RealMatrix& a, double (*f)(double));
double min_symmetric_eigenvalue(const RealMatrix& a);

}  // namespace ufsym
