#pragma once

// SICs, mutually unbiased bases, weighted projective 2-designs, generalized
// 2-designs and generalized SICs, plus the construction of generalized
// 2-designs from unitary 2-designs.

#include <iostream>
#include <vector>

#include "ufsym/matcore.hpp"
#include "ufsym/states.hpp"

namespace ufsym {

/// {|psi_xi>, w_xi}; weights nonnegative, at least one positive.
struct WeightedStateSet {
  std::vector<PureState> states;
  std::vector<double> weights;

  int size() const { return static_cast<int>(states.size()); }
  int dim() const;
  double total_weight() const;
  /// Throws InvalidArgument on empty sets, size or dimension mismatch,
  /// negative weights, or all-zero weights.
  void validate() const;
  /// Elements w_xi |psi_xi><psi_xi|.
  std::vector<HermitianOperator> operators() const;
};

/// Nonzero PSD operators {Pi_xi}.
struct OperatorSet {
  std::vector<HermitianOperator> ops;

  int size() const { return static_cast<int>(ops.size()); }
  int dim() const;
  /// Throws InvalidArgument on empty sets, mixed dimensions, non-PSD or zero elements.
  void validate() const;
};

OperatorSet to_operator_set(const WeightedStateSet& set);

struct DesignCertificate {
  bool is_design = false;
  double frame_potential = 0.0;
  double bound = 0.0;
  double slack = 0.0;            // frame_potential - bound
  double purity = 1.0;
  double moment_residual = 0.0;  // direct second-moment check, Frobenius, per unit weight
};

// --- constructions ----------------------------------------------------------

/// Qubit tetrahedron SIC, Bloch vectors (1,1,1)/sqrt3, (1,-1,-1)/sqrt3,
/// (-1,1,-1)/sqrt3, (-1,-1,1)/sqrt3, weights 1/2.
WeightedStateSet sic_qubit();

/// Qutrit SIC: orbit X^j Z^k of (0, 1, -e^{i phi})/sqrt2 under the
/// Weyl-Heisenberg group, weights 1/3. Any real phi gives a SIC; phi outside
/// [0, pi/9] is reported on `warnings` since that range covers every class.
WeightedStateSet sic_d3(double phi = 0.0, std::ostream* warnings = &std::cerr);
bool sic_d3_phase_in_range(double phi);

/// Complete set of d+1 mutually unbiased bases for d in {2, 3}.
std::vector<std::vector<PureState>> mub_bases(int d);
/// The MUB states as a weighted set with weights 1/(d+1).
WeightedStateSet mub(int d);

// --- certification -------------------------------------------------------

/// sum_{xi,eta} w_xi w_eta |<psi_xi|psi_eta>|^4, evaluated in parallel.
double frame_potential(const WeightedStateSet& set);
/// Single-threaded reference for frame_potential.
double frame_potential_serial(const WeightedStateSet& set);

/// Frame potential against 2 (sum w)^2 / (d(d+1)); a design iff
/// slack <= tol * (sum w)^2. Also reports the distance of the second moment
/// from the multiple of P+ with the same trace.
DesignCertificate projective_2design_check(const WeightedStateSet& set, double tol = 1e-8);

/// Generalized 2-design certificate after rescaling to sum tr(Pi) = d:
/// sum [tr(Pi_xi Pi_eta)]^2 / (tr Pi_xi tr Pi_eta) against
/// (d^2 (1 + p^2) - 2 d p)/(d^2 - 1), where p is the set purity. A design iff
/// slack <= tol (absolute, after rescaling). Throws on zero-trace elements.
DesignCertificate generalized_2design_check(const OperatorSet& set, double tol = 1e-8);

struct GeneralizedSicReport {
  bool is_gsic = false;
  double alpha = 0.0;          // fitted, after rescaling to sum tr(Pi) = d
  double beta = 0.0;
  double purity = 0.0;
  double alpha_expected = 0.0;  // (d p - 1)/(d (d^2 - 1))
  double beta_expected = 0.0;   // (d - p)/(d^2 (d^2 - 1))
  double gram_residual = 0.0;   // max |tr(Pi Pi') - alpha delta - beta|
  double trace_residual = 0.0;  // max |tr(Pi) - 1/d|
  double sum_residual = 0.0;    // ||sum Pi - I||_2
};

/// Requires exactly d^2 elements (InvalidArgument otherwise). The set is
/// rescaled so that sum tr(Pi) = d before fitting.
GeneralizedSicReport generalized_sic_check(const OperatorSet& set, double tol = 1e-8);

struct SicReport {
  bool is_sic = false;
  double max_overlap_deviation = 0.0;  // max |(|<psi|psi'>|^2) - 1/(d+1)|
  double completeness_residual = 0.0;  // ||(d / sum w) sum w |psi><psi| - I||_2
};

/// d^2 unit vectors with pairwise |<psi_xi|psi_eta>|^2 = 1/(d+1).
SicReport sic_check(const WeightedStateSet& set, double tol = 1e-10);

// --- unitary designs ---------------------------------------------------

/// {w_xi U_xi Pi U_xi^dagger}. Whether the weighted unitaries form a unitary
/// 2-design is the caller's assertion; unitarity and the seed are validated.
OperatorSet g2design_from_unitary_design(const std::vector<ComplexMatrix>& unitaries,
                                         const std::vector<double>& weights,
                                         const HermitianOperator& seed);

/// Closure of a generating set modulo global phase; throws NumericalError if
/// more than max_size elements appear.
std::vector<ComplexMatrix> unitary_group_closure(const std::vector<ComplexMatrix>& generators,
                                                 int max_size = 10000);

/// The 24 single-qubit Cliffords, one representative per phase class.
std::vector<ComplexMatrix> clifford_group_qubit();

/// (1/n) sum_U (U (x) U) M (U (x) U)^dagger.
ComplexMatrix twirl(const std::vector<ComplexMatrix>& unitaries, const ComplexMatrix& m);

}  // namespace ufsym
