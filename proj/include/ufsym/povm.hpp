#pragma once

// POVM validity, two-copy constructions (2-design powers, collective SIC,
// tight coherent POVMs), coherent-element classification and the marginal
// operators Q = tr_1(Pi) + tr_2(Pi).

#include <optional>
#include <vector>

#include "ufsym/designs.hpp"
#include "ufsym/matcore.hpp"

namespace ufsym {

/// Which identity the elements are meant to resolve.
enum class Subspace { Full, Symmetric };

/// {Pi_xi} on H^{(x) copies}. Built by the constructors below; arbitrary
/// element lists are checked by validate_povm rather than on construction.
struct Povm {
  std::vector<HermitianOperator> elements;
  int copies = 1;
  int base_dim = 2;
  Subspace subspace = Subspace::Full;
  /// Set when the symmetric-power elements come from a 2-design with
  /// sum w = d(d+1)/2; needed by companion_povm.
  std::optional<WeightedStateSet> source_design;

  int size() const { return static_cast<int>(elements.size()); }
  /// base_dim^copies.
  int dim() const;
};

/// Povm from bare elements; copies in {1, 2}, base_dim inferred.
Povm make_povm(std::vector<HermitianOperator> elements, int copies, Subspace subspace = Subspace::Full);

struct PovmReport {
  bool valid = false;
  bool dims_ok = false;
  double max_psd_violation = 0.0;      // max over elements of max(0, -lambda_min)
  double completeness_residual = 0.0;  // ||sum Pi - target||_2, target I or P+
  std::string reason;
};

PovmReport validate_povm(const Povm& p, double tol = 1e-9);

/// Pi_xi = w_xi (|psi_xi><psi_xi|)^{(x)2} with weights rescaled to
/// sum w = d(d+1)/2, so that sum Pi = P+. Throws unless the set passes
/// projective_2design_check(set, tol).
Povm twocopy_design_povm(const WeightedStateSet& design, double tol = 1e-8);

/// Single-copy POVM {2 w_xi/(d+1) |psi_xi><psi_xi|} of a 2-design power POVM.
/// Throws InvalidArgument without source_design.
Povm companion_povm(const Povm& p);

/// 3/4 (|psi><psi|)^{(x)2} over the tetrahedron SIC, plus the singlet.
Povm collective_sic_qubit();

enum class CoherentLabel { SymPower, Slater, Neither };

struct ElementClass {
  CoherentLabel label = CoherentLabel::Neither;
  ComplexVector state;   // SymPower witness |psi>
  ComplexVector slater_a;  // Slater witnesses, orthonormal pair
  ComplexVector slater_b;
  bool zero = false;
};

struct CoherentClassification {
  std::vector<ElementClass> elements;
  bool coherent() const;
  int count(CoherentLabel label) const;
};

/// Per element: SymPower iff P+ Pi P+ = Pi, rank 1 and tr_1(Pi) rank 1;
/// Slater iff P- Pi P- = Pi, rank 1 and tr_1(Pi) has spectrum
/// (tr/2, tr/2, 0, ...). Zero elements are labelled SymPower with zero = true.
CoherentClassification classify_coherent(const Povm& p);

const char* label_name(CoherentLabel label);

/// tr_1(Pi) + tr_2(Pi).
HermitianOperator marginal_Q(const HermitianOperator& element);

/// Sums elements that are positive multiples of one another (relative
/// Frobenius tolerance tol); order follows first occurrence.
Povm merge_proportional_elements(const Povm& p, double tol = 1e-9);

struct TightCoherentOptions {
  bool merge = false;
  double tol = 1e-8;
};

/// Union of Pi+_zeta = A (x) A / tr A and Pi-_eta = P- (B (x) B) P- / tr B.
/// Requires rank-one A forming a 2-design with sum A = (d+1)/2 I, and B
/// proportional to rank-2 projectors forming a generalized 2-design with
/// sum B = 2(d-1) I.
Povm tight_coherent_from_designs(const OperatorSet& a, const OperatorSet& b,
                                 const TightCoherentOptions& options = {});

/// A = (2/3)|psi><psi| from sic1 and B = (2/3)(I - |phi><phi|) from sic2.
Povm minimal_tight_coherent_d3(const WeightedStateSet& sic1, const WeightedStateSet& sic2);

struct TightCoherentReport {
  bool pass = false;
  PovmReport povm;
  bool coherent = false;
  DesignCertificate q_design;
  double target_purity = 0.0;  // (3d + 1)/(4d)
  double purity_error = 0.0;
  std::optional<DesignCertificate> q_plus;   // Q of symmetric elements
  std::optional<DesignCertificate> q_minus;  // Q of antisymmetric elements
  std::optional<GeneralizedSicReport> q_minus_gsic;  // when there are d^2 of them
  std::vector<HermitianOperator> q_minus_ops;
};

TightCoherentReport tight_coherent_check(const Povm& p, double tol = 1e-8);

}  // namespace ufsym
