#include "ufsym/povm.hpp"

#include <algorithm>
#include <cmath>

namespace ufsym {

namespace {

bool supported_in(const ComplexMatrix& proj, const ComplexMatrix& m, double scale) {
  return (proj * m * proj - m).norm() <= tol::kRank * scale;
}

double identity_residual(const ComplexMatrix& sum, double coeff) {
  const auto d = sum.rows();
  return spectral_norm(HermitianOperator::symmetrized(sum - coeff * ComplexMatrix::Identity(d, d)));
}

}  // namespace

int Povm::dim() const { return copies == 2 ? base_dim * base_dim : base_dim; }

Povm make_povm(std::vector<HermitianOperator> elements, int copies, Subspace subspace) {
  if (elements.empty()) throw InvalidArgument("make_povm: no elements");
  if (copies != 1 && copies != 2) throw InvalidArgument("make_povm: copies must be 1 or 2");
  if (subspace == Subspace::Symmetric && copies != 2) {
    throw InvalidArgument("make_povm: the symmetric subspace needs two copies");
  }
  Povm p;
  const int n = elements.front().dim();
  p.base_dim = copies == 2 ? checked_sqrt_dim(n, "make_povm") : n;
  p.copies = copies;
  p.subspace = subspace;
  p.elements = std::move(elements);
  return p;
}

PovmReport validate_povm(const Povm& p, double tol) {
  PovmReport r;
  const int n = p.dim();
  r.dims_ok = !p.elements.empty() && (p.copies == 1 || p.copies == 2) && p.base_dim >= 1 &&
              !(p.subspace == Subspace::Symmetric && p.copies != 2);
  for (const auto& e : p.elements) r.dims_ok = r.dims_ok && e.dim() == n;
  if (!r.dims_ok) {
    r.reason = "element dimensions do not match base_dim^copies";
    return r;
  }
  ComplexMatrix sum = ComplexMatrix::Zero(n, n);
  for (const auto& e : p.elements) {
    r.max_psd_violation = std::max(r.max_psd_violation, -min_eigenvalue(e));
    sum += e.mat();
  }
  const ComplexMatrix target = p.subspace == Subspace::Symmetric ? sym_projector(p.base_dim).mat()
                                                                 : ComplexMatrix::Identity(n, n);
  r.completeness_residual = spectral_norm(HermitianOperator::symmetrized(sum - target));
  if (r.max_psd_violation > tol) {
    r.reason = "element with negative eigenvalue";
  } else if (r.completeness_residual > tol) {
    r.reason = p.subspace == Subspace::Symmetric ? "elements do not sum to P+" : "elements do not sum to the identity";
  } else {
    r.valid = true;
  }
  return r;
}

// --- two-copy design POVMs -------------------------------------------------

Povm twocopy_design_povm(const WeightedStateSet& design, double tol) {
  const DesignCertificate cert = projective_2design_check(design, tol);
  if (!cert.is_design) throw InvalidArgument("twocopy_design_povm: input is not a projective 2-design");
  const int d = design.dim();
  const double factor = d * (d + 1.0) / 2.0 / design.total_weight();
  WeightedStateSet scaled = design;
  for (auto& w : scaled.weights) w *= factor;
  Povm p;
  p.copies = 2;
  p.base_dim = d;
  p.subspace = Subspace::Symmetric;
  for (size_t i = 0; i < scaled.states.size(); ++i) {
    if (scaled.weights[i] == 0.0) continue;
    const ComplexVector v = kron(scaled.states[i].vec(), scaled.states[i].vec());
    p.elements.push_back(HermitianOperator::symmetrized(scaled.weights[i] * projector(v)));
  }
  p.source_design = std::move(scaled);
  return p;
}

Povm companion_povm(const Povm& p) {
  if (!p.source_design) throw InvalidArgument("companion_povm: POVM was not built from a 2-design");
  const auto& set = *p.source_design;
  const int d = set.dim();
  Povm out;
  out.copies = 1;
  out.base_dim = d;
  for (size_t i = 0; i < set.states.size(); ++i) {
    if (set.weights[i] == 0.0) continue;
    out.elements.push_back(HermitianOperator::symmetrized((2.0 * set.weights[i] / (d + 1.0)) * set.states[i].projector()));
  }
  return out;
}

Povm collective_sic_qubit() {
  Povm p = twocopy_design_povm(sic_qubit());
  p.elements.push_back(antisym_projector(2));
  p.subspace = Subspace::Full;
  return p;
}

// --- coherent classification ---------------------------------------------

bool CoherentClassification::coherent() const {
  return std::none_of(elements.begin(), elements.end(),
                      [](const ElementClass& e) { return e.label == CoherentLabel::Neither; });
}

int CoherentClassification::count(CoherentLabel label) const {
  return static_cast<int>(std::count_if(elements.begin(), elements.end(),
                                        [&](const ElementClass& e) { return e.label == label && !e.zero; }));
}

const char* label_name(CoherentLabel label) {
  switch (label) {
    case CoherentLabel::SymPower: return "SymPower";
    case CoherentLabel::Slater: return "Slater";
    case CoherentLabel::Neither: return "Neither";
  }
  return "Neither";
}

CoherentClassification classify_coherent(const Povm& p) {
  if (p.copies != 2) throw InvalidArgument("classify_coherent: needs a two-copy POVM");
  const int d = p.base_dim;
  const ComplexMatrix plus = sym_projector(d).mat();
  const ComplexMatrix minus = antisym_projector(d).mat();
  CoherentClassification out;
  for (const auto& e : p.elements) {
    if (e.dim() != d * d) throw InvalidArgument("classify_coherent: element dimension mismatch");
    ElementClass c;
    const double n = e.norm();
    if (n <= 1e-14) {
      c.label = CoherentLabel::SymPower;
      c.zero = true;
      out.elements.push_back(c);
      continue;
    }
    const bool rank_one = numerical_rank(e) == 1;
    const HermitianOperator marg = partial_trace(e, Subsystem::First);
    const auto meig = hermitian_eig(marg);
    const double tr = e.trace();
    if (rank_one && supported_in(plus, e.mat(), n) && numerical_rank(marg) == 1) {
      c.label = CoherentLabel::SymPower;
      c.state = meig.vectors.col(0);
    } else if (rank_one && d >= 2 && supported_in(minus, e.mat(), n)) {
      bool spectrum_ok = std::abs(meig.values(0) - tr / 2) <= tol::kRank * tr &&
                         std::abs(meig.values(1) - tr / 2) <= tol::kRank * tr;
      for (Eigen::Index j = 2; j < meig.values.size(); ++j) {
        spectrum_ok = spectrum_ok && std::abs(meig.values(j)) <= tol::kRank * tr;
      }
      if (spectrum_ok) {
        c.label = CoherentLabel::Slater;
        c.slater_a = meig.vectors.col(0);
        c.slater_b = meig.vectors.col(1);
      }
    }
    out.elements.push_back(c);
  }
  return out;
}

HermitianOperator marginal_Q(const HermitianOperator& element) {
  return partial_trace(element, Subsystem::First) + partial_trace(element, Subsystem::Second);
}

Povm merge_proportional_elements(const Povm& p, double tol) {
  Povm out = p;
  out.elements.clear();
  std::vector<ComplexMatrix> shapes;
  for (const auto& e : p.elements) {
    const double t = e.trace();
    bool merged = false;
    if (t > 0.0) {
      const ComplexMatrix shape = e.mat() / t;
      for (size_t g = 0; g < shapes.size(); ++g) {
        if (shapes[g].size() && (shapes[g] - shape).norm() <= tol * shapes[g].norm()) {
          out.elements[g] = out.elements[g] + e;
          merged = true;
          break;
        }
      }
      if (!merged) shapes.push_back(shape);
    } else {
      shapes.emplace_back();
    }
    if (!merged) out.elements.push_back(e);
  }
  return out;
}

// --- tight coherent POVMs -----------------------------------------------

Povm tight_coherent_from_designs(const OperatorSet& a, const OperatorSet& b, const TightCoherentOptions& options) {
  a.validate();
  b.validate();
  const int d = a.dim();
  if (b.dim() != d) throw InvalidArgument("tight_coherent_from_designs: A and B differ in dimension");
  const double tol = options.tol;

  ComplexMatrix sum_a = ComplexMatrix::Zero(d, d);
  for (const auto& op : a.ops) {
    if (numerical_rank(op) != 1) throw InvalidArgument("tight_coherent_from_designs: A element is not rank one");
    sum_a += op.mat();
  }
  if (identity_residual(sum_a, (d + 1.0) / 2.0) > tol * d) {
    throw InvalidArgument("tight_coherent_from_designs: sum of A is not (d+1)/2 times the identity");
  }
  if (!generalized_2design_check(a, tol).is_design) {
    throw InvalidArgument("tight_coherent_from_designs: A is not a 2-design");
  }

  ComplexMatrix sum_b = ComplexMatrix::Zero(d, d);
  for (const auto& op : b.ops) {
    const auto eig = hermitian_eig(op);
    if (numerical_rank(op) != 2 || std::abs(eig.values(0) - eig.values(1)) > tol::kRank * eig.values(0)) {
      throw InvalidArgument("tight_coherent_from_designs: B element is not proportional to a rank-2 projector");
    }
    sum_b += op.mat();
  }
  if (identity_residual(sum_b, 2.0 * (d - 1.0)) > tol * d) {
    throw InvalidArgument("tight_coherent_from_designs: sum of B is not 2(d-1) times the identity");
  }
  if (!generalized_2design_check(b, tol).is_design) {
    throw InvalidArgument("tight_coherent_from_designs: B is not a generalized 2-design");
  }

  const ComplexMatrix minus = antisym_projector(d).mat();
  Povm p;
  p.copies = 2;
  p.base_dim = d;
  for (const auto& op : a.ops) {
    p.elements.push_back(HermitianOperator::symmetrized(kron(op.mat(), op.mat()) / op.trace()));
  }
  for (const auto& op : b.ops) {
    p.elements.push_back(HermitianOperator::symmetrized(minus * kron(op.mat(), op.mat()) * minus / op.trace()));
  }
  return options.merge ? merge_proportional_elements(p) : p;
}

Povm minimal_tight_coherent_d3(const WeightedStateSet& sic1, const WeightedStateSet& sic2) {
  for (const auto* s : {&sic1, &sic2}) {
    if (s->dim() != 3) throw InvalidArgument("minimal_tight_coherent_d3: inputs must be qutrit SICs");
    if (!sic_check(*s, 1e-9).is_sic) throw InvalidArgument("minimal_tight_coherent_d3: input is not a SIC");
  }
  OperatorSet a, b;
  const ComplexMatrix id = ComplexMatrix::Identity(3, 3);
  for (const auto& s : sic1.states) a.ops.push_back(HermitianOperator::symmetrized((2.0 / 3.0) * s.projector()));
  for (const auto& s : sic2.states) b.ops.push_back(HermitianOperator::symmetrized((2.0 / 3.0) * (id - s.projector())));
  return tight_coherent_from_designs(a, b);
}

TightCoherentReport tight_coherent_check(const Povm& p, double tol) {
  TightCoherentReport r;
  r.povm = validate_povm(p, std::max(tol, 1e-9));
  if (p.copies != 2 || !r.povm.dims_ok) return r;
  const int d = p.base_dim;
  const auto cls = classify_coherent(p);
  r.coherent = cls.coherent();
  r.target_purity = (3.0 * d + 1.0) / (4.0 * d);

  OperatorSet all, plus, minus;
  for (size_t i = 0; i < p.elements.size(); ++i) {
    const auto& c = cls.elements[i];
    if (c.zero) continue;
    HermitianOperator q = marginal_Q(p.elements[i]);
    if (c.label == CoherentLabel::SymPower) plus.ops.push_back(q);
    if (c.label == CoherentLabel::Slater) minus.ops.push_back(q);
    all.ops.push_back(std::move(q));
  }
  if (all.ops.empty()) return r;
  r.q_design = generalized_2design_check(all, tol);
  r.purity_error = std::abs(r.q_design.purity - r.target_purity);
  if (!plus.ops.empty()) r.q_plus = generalized_2design_check(plus, tol);
  if (!minus.ops.empty()) {
    r.q_minus = generalized_2design_check(minus, tol);
    if (minus.size() == d * d) r.q_minus_gsic = generalized_sic_check(minus, tol);
  }
  r.q_minus_ops = minus.ops;
  r.pass = r.povm.valid && r.coherent && r.q_design.is_design && r.purity_error <= tol;
  return r;
}

}  // namespace ufsym
