#include "ufsym/designs.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numbers>

namespace ufsym {

namespace {

double overlap_sq(const ComplexVector& a, const ComplexVector& b) { return std::norm(a.dot(b)); }

ComplexMatrix phase_normalized(const ComplexMatrix& u) {
  for (Eigen::Index c = 0; c < u.cols(); ++c) {
    for (Eigen::Index r = 0; r < u.rows(); ++r) {
      const Complex x = u(r, c);
      if (std::abs(x) > 1e-6) return u * (std::conj(x) / std::abs(x));
    }
  }
  return u;
}

}  // namespace

// --- WeightedStateSet / OperatorSet ----------------------------------------

int WeightedStateSet::dim() const {
  if (states.empty()) throw InvalidArgument("WeightedStateSet: empty set");
  return states.front().dim();
}

double WeightedStateSet::total_weight() const {
  double s = 0.0;
  for (double w : weights) s += w;
  return s;
}

void WeightedStateSet::validate() const {
  if (states.empty()) throw InvalidArgument("WeightedStateSet: empty set");
  if (states.size() != weights.size()) throw InvalidArgument("WeightedStateSet: states/weights size mismatch");
  const int d = dim();
  bool positive = false;
  for (size_t i = 0; i < states.size(); ++i) {
    if (states[i].dim() != d) throw InvalidArgument("WeightedStateSet: mixed dimensions");
    if (!(weights[i] >= 0.0) || !std::isfinite(weights[i])) throw InvalidArgument("WeightedStateSet: negative weight");
    positive = positive || weights[i] > 0.0;
  }
  if (!positive) throw InvalidArgument("WeightedStateSet: no positive weight");
}

std::vector<HermitianOperator> WeightedStateSet::operators() const {
  std::vector<HermitianOperator> out;
  out.reserve(states.size());
  for (size_t i = 0; i < states.size(); ++i) {
    out.push_back(HermitianOperator::symmetrized(weights[i] * states[i].projector()));
  }
  return out;
}

int OperatorSet::dim() const {
  if (ops.empty()) throw InvalidArgument("OperatorSet: empty set");
  return ops.front().dim();
}

void OperatorSet::validate() const {
  const int d = dim();
  for (const auto& op : ops) {
    if (op.dim() != d) throw InvalidArgument("OperatorSet: mixed dimensions");
    if (op.norm() == 0.0) throw InvalidArgument("OperatorSet: zero element");
    if (!is_psd(op)) throw InvalidArgument("OperatorSet: element is not positive semidefinite");
  }
}

OperatorSet to_operator_set(const WeightedStateSet& set) {
  set.validate();
  OperatorSet out;
  for (size_t i = 0; i < set.states.size(); ++i) {
    if (set.weights[i] > 0.0) out.ops.push_back(HermitianOperator::symmetrized(set.weights[i] * set.states[i].projector()));
  }
  return out;
}

// --- constructions ----------------------------------------------------------

WeightedStateSet sic_qubit() {
  const double r = 1.0 / std::sqrt(3.0);
  const BlochVector dirs[4] = {BlochVector(r, r, r), BlochVector(r, -r, -r), BlochVector(-r, r, -r),
                               BlochVector(-r, -r, r)};
  WeightedStateSet set;
  for (const auto& n : dirs) {
    set.states.push_back(pure_from_bloch(n));
    set.weights.push_back(0.5);
  }
  return set;
}

bool sic_d3_phase_in_range(double phi) { return phi >= 0.0 && phi <= std::numbers::pi / 9.0 + 1e-15; }

WeightedStateSet sic_d3(double phi, std::ostream* warnings) {
  if (warnings && !sic_d3_phase_in_range(phi)) {
    *warnings << "warning: sic_d3 phase " << phi << " lies outside [0, pi/9]; the set is still a SIC\n";
  }
  const Complex omega = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);
  ComplexVector fid(3);
  fid << 0.0, 1.0, -std::polar(1.0, phi);
  fid /= std::sqrt(2.0);
  WeightedStateSet set;
  for (int j = 0; j < 3; ++j) {
    for (int k = 0; k < 3; ++k) {
      ComplexVector v(3);
      // (X^j Z^k fid)_m = omega^{k (m - j)} fid_{m - j}
      for (int m = 0; m < 3; ++m) {
        const int src = ((m - j) % 3 + 3) % 3;
        v(m) = std::pow(omega, k * src) * fid(src);
      }
      set.states.push_back(PureState::normalized(v));
      set.weights.push_back(1.0 / 3.0);
    }
  }
  return set;
}

std::vector<std::vector<PureState>> mub_bases(int d) {
  std::vector<std::vector<PureState>> bases;
  if (d == 2) {
    const double r = 1.0 / std::sqrt(2.0);
    const Complex i(0.0, 1.0);
    auto vec2 = [](Complex a, Complex b) {
      ComplexVector v(2);
      v << a, b;
      return PureState::normalized(v);
    };
    bases.push_back({vec2(1, 0), vec2(0, 1)});
    bases.push_back({vec2(r, r), vec2(r, -r)});
    bases.push_back({vec2(r, i * r), vec2(r, -i * r)});
    return bases;
  }
  if (d == 3) {
    const Complex omega = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);
    std::vector<PureState> comp;
    for (int j = 0; j < 3; ++j) comp.push_back(PureState(basis_vector(3, j)));
    bases.push_back(comp);
    for (int a = 0; a < 3; ++a) {
      std::vector<PureState> basis;
      for (int b = 0; b < 3; ++b) {
        ComplexVector v(3);
        for (int j = 0; j < 3; ++j) v(j) = std::pow(omega, (a * j * j + b * j) % 3);
        basis.push_back(PureState::normalized(v));
      }
      bases.push_back(basis);
    }
    return bases;
  }
  throw InvalidArgument("mub: built-in construction covers d = 2 and d = 3 only");
}

WeightedStateSet mub(int d) {
  WeightedStateSet set;
  for (const auto& basis : mub_bases(d)) {
    for (const auto& s : basis) {
      set.states.push_back(s);
      set.weights.push_back(1.0 / (d + 1));
    }
  }
  return set;
}

// --- certification -------------------------------------------------------

double frame_potential(const WeightedStateSet& set) {
  set.validate();
  const int n = set.size();
  std::vector<double> rows(static_cast<size_t>(n), 0.0);
#pragma omp parallel for schedule(dynamic, 16)
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    const ComplexVector& a = set.states[static_cast<size_t>(i)].vec();
    for (int j = 0; j < n; ++j) {
      const double o = overlap_sq(a, set.states[static_cast<size_t>(j)].vec());
      s += set.weights[static_cast<size_t>(j)] * o * o;
    }
    rows[static_cast<size_t>(i)] = set.weights[static_cast<size_t>(i)] * s;
  }
  double total = 0.0;
  for (double r : rows) total += r;
  return total;
}

double frame_potential_serial(const WeightedStateSet& set) {
  set.validate();
  const int n = set.size();
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    const ComplexVector& a = set.states[static_cast<size_t>(i)].vec();
    for (int j = 0; j < n; ++j) {
      const double o = overlap_sq(a, set.states[static_cast<size_t>(j)].vec());
      s += set.weights[static_cast<size_t>(j)] * o * o;
    }
    total += set.weights[static_cast<size_t>(i)] * s;
  }
  return total;
}

DesignCertificate projective_2design_check(const WeightedStateSet& set, double tol) {
  set.validate();
  const int d = set.dim();
  const double w = set.total_weight();
  DesignCertificate cert;
  cert.frame_potential = frame_potential(set);
  cert.bound = 2.0 * w * w / (d * (d + 1.0));
  cert.slack = cert.frame_potential - cert.bound;
  cert.purity = 1.0;
  cert.is_design = cert.slack <= tol * w * w;

  ComplexMatrix moment = ComplexMatrix::Zero(d * d, d * d);
  for (size_t i = 0; i < set.states.size(); ++i) {
    const ComplexVector v = kron(set.states[i].vec(), set.states[i].vec());
    moment += set.weights[i] * (v * v.adjoint());
  }
  moment -= (2.0 * w / (d * (d + 1.0))) * sym_projector(d).mat();
  cert.moment_residual = moment.norm() / w;
  return cert;
}

DesignCertificate generalized_2design_check(const OperatorSet& set, double tol) {
  set.validate();
  const int d = set.dim();
  if (d < 2) throw InvalidArgument("generalized_2design_check: dimension must be at least 2");
  double total = 0.0;
  for (const auto& op : set.ops) {
    const double t = op.trace();
    if (t <= 0.0) throw InvalidArgument("generalized_2design_check: zero-trace element");
    total += t;
  }
  const double scale = d / total;
  std::vector<ComplexMatrix> ops;
  std::vector<double> traces;
  for (const auto& op : set.ops) {
    ops.push_back(scale * op.mat());
    traces.push_back(scale * op.trace());
  }
  const size_t n = ops.size();

  double purity_num = 0.0;
  for (size_t i = 0; i < n; ++i) purity_num += trace_product(ops[i], ops[i]) / traces[i];
  const double purity = purity_num / d;  // sum_xi w_xi p_xi / sum w, with sum w = d

  double fp = 0.0;
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) {
      const double t = trace_product(ops[i], ops[j]);
      fp += t * t / (traces[i] * traces[j]);
    }
  }
  DesignCertificate cert;
  cert.frame_potential = fp;
  cert.bound = (d * d * (1.0 + purity * purity) - 2.0 * d * purity) / (d * d - 1.0);
  cert.slack = fp - cert.bound;
  cert.purity = purity;
  cert.is_design = cert.slack <= tol;

  ComplexMatrix moment = ComplexMatrix::Zero(d * d, d * d);
  for (size_t i = 0; i < n; ++i) moment += kron(ops[i], ops[i]) / traces[i];
  moment -= ((1.0 + purity) / (d + 1.0)) * sym_projector(d).mat() +
            ((1.0 - purity) / (d - 1.0)) * antisym_projector(d).mat();
  cert.moment_residual = moment.norm() / d;
  return cert;
}

GeneralizedSicReport generalized_sic_check(const OperatorSet& set, double tol) {
  set.validate();
  const int d = set.dim();
  const int n = set.size();
  if (n != d * d) {
    throw InvalidArgument("generalized_sic_check: expected " + std::to_string(d * d) + " elements, got " +
                          std::to_string(n));
  }
  double total = 0.0;
  for (const auto& op : set.ops) total += op.trace();
  const double scale = d / total;
  std::vector<ComplexMatrix> ops;
  for (const auto& op : set.ops) ops.push_back(scale * op.mat());

  RealMatrix gram(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) gram(i, j) = gram(j, i) = trace_product(ops[static_cast<size_t>(i)], ops[static_cast<size_t>(j)]);
  }
  double diag = 0.0, off = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) (i == j ? diag : off) += gram(i, j);
  }
  GeneralizedSicReport r;
  r.beta = off / (static_cast<double>(n) * (n - 1));
  r.alpha = diag / n - r.beta;

  double purity_num = 0.0;
  ComplexMatrix sum = ComplexMatrix::Zero(d, d);
  for (int i = 0; i < n; ++i) {
    const double t = ops[static_cast<size_t>(i)].trace().real();
    purity_num += gram(i, i) / t;
    r.trace_residual = std::max(r.trace_residual, std::abs(t - 1.0 / d));
    sum += ops[static_cast<size_t>(i)];
  }
  r.purity = purity_num / d;
  r.alpha_expected = (d * r.purity - 1.0) / (d * (d * d - 1.0));
  r.beta_expected = (d - r.purity) / (static_cast<double>(d) * d * (d * d - 1.0));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      r.gram_residual = std::max(r.gram_residual, std::abs(gram(i, j) - (i == j ? r.alpha : 0.0) - r.beta));
    }
  }
  r.sum_residual = spectral_norm(HermitianOperator::symmetrized(sum - ComplexMatrix::Identity(d, d)));
  r.is_gsic = r.gram_residual <= tol && r.trace_residual <= tol && r.sum_residual <= tol &&
              std::abs(r.alpha - r.alpha_expected) <= tol && std::abs(r.beta - r.beta_expected) <= tol &&
              r.alpha > tol && r.beta > tol;
  return r;
}

SicReport sic_check(const WeightedStateSet& set, double tol) {
  set.validate();
  const int d = set.dim();
  SicReport r;
  const int n = set.size();
  const double target = 1.0 / (d + 1.0);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double o = overlap_sq(set.states[static_cast<size_t>(i)].vec(), set.states[static_cast<size_t>(j)].vec());
      r.max_overlap_deviation = std::max(r.max_overlap_deviation, std::abs(o - target));
    }
  }
  ComplexMatrix sum = ComplexMatrix::Zero(d, d);
  for (int i = 0; i < n; ++i) sum += set.weights[static_cast<size_t>(i)] * set.states[static_cast<size_t>(i)].projector();
  sum *= d / set.total_weight();
  r.completeness_residual = spectral_norm(HermitianOperator::symmetrized(sum - ComplexMatrix::Identity(d, d)));
  r.is_sic = n == d * d && r.max_overlap_deviation <= tol && r.completeness_residual <= tol;
  return r;
}

// --- unitary designs ---------------------------------------------------

OperatorSet g2design_from_unitary_design(const std::vector<ComplexMatrix>& unitaries,
                                         const std::vector<double>& weights,
                                         const HermitianOperator& seed) {
  if (unitaries.empty() || unitaries.size() != weights.size()) {
    throw InvalidArgument("g2design_from_unitary_design: need matching, nonempty unitaries and weights");
  }
  if (seed.norm() == 0.0 || !is_psd(seed)) {
    throw InvalidArgument("g2design_from_unitary_design: seed must be positive semidefinite and nonzero");
  }
  const int d = seed.dim();
  OperatorSet out;
  for (size_t i = 0; i < unitaries.size(); ++i) {
    const ComplexMatrix& u = unitaries[i];
    if (u.rows() != d || u.cols() != d) throw InvalidArgument("g2design_from_unitary_design: dimension mismatch");
    if ((u.adjoint() * u - ComplexMatrix::Identity(d, d)).norm() > 1e-10) {
      throw InvalidArgument("g2design_from_unitary_design: matrix is not unitary");
    }
    if (weights[i] < 0.0) throw InvalidArgument("g2design_from_unitary_design: negative weight");
    if (weights[i] == 0.0) continue;
    out.ops.push_back(HermitianOperator::symmetrized(weights[i] * u * seed.mat() * u.adjoint()));
  }
  if (out.ops.empty()) throw InvalidArgument("g2design_from_unitary_design: all weights vanish");
  return out;
}

std::vector<ComplexMatrix> unitary_group_closure(const std::vector<ComplexMatrix>& generators, int max_size) {
  if (generators.empty()) throw InvalidArgument("unitary_group_closure: no generators");
  const Eigen::Index d = generators.front().rows();
  std::vector<ComplexMatrix> group{ComplexMatrix::Identity(d, d)};
  auto known = [&](const ComplexMatrix& m) {
    return std::any_of(group.begin(), group.end(), [&](const ComplexMatrix& g) { return (g - m).norm() < 1e-8; });
  };
  for (size_t next = 0; next < group.size(); ++next) {
    for (const auto& g : generators) {
      ComplexMatrix cand = phase_normalized(g * group[next]);
      if (known(cand)) continue;
      group.push_back(std::move(cand));
      if (static_cast<int>(group.size()) > max_size) {
        throw NumericalError("unitary_group_closure: group exceeds " + std::to_string(max_size) + " elements");
      }
    }
  }
  return group;
}

std::vector<ComplexMatrix> clifford_group_qubit() {
  const double r = 1.0 / std::sqrt(2.0);
  ComplexMatrix h(2, 2), s(2, 2);
  h << r, r, r, -r;
  s << 1, 0, 0, Complex(0.0, 1.0);
  return unitary_group_closure({h, s}, 64);
}

ComplexMatrix twirl(const std::vector<ComplexMatrix>& unitaries, const ComplexMatrix& m) {
  if (unitaries.empty()) throw InvalidArgument("twirl: no unitaries");
  ComplexMatrix out = ComplexMatrix::Zero(m.rows(), m.cols());
  for (const auto& u : unitaries) {
    const ComplexMatrix uu = kron(u, u);
    out += uu * m * uu.adjoint();
  }
  return out / static_cast<double>(unitaries.size());
}

}  // namespace ufsym
