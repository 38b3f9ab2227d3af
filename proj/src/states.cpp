#include "ufsym/states.hpp"

#include <algorithm>
#include <cmath>

namespace ufsym {

// --- DensityMatrix / PureState -------------------------------------------

DensityMatrix::DensityMatrix(const HermitianOperator& op) : op_(op), eig_(hermitian_eig(op)) {
  const double tr = op_.trace();
  if (std::abs(tr - 1.0) > tol::kTrace) {
    throw InvalidArgument("DensityMatrix: trace " + std::to_string(tr) + " differs from 1");
  }
  const double lo = eig_.values(eig_.values.size() - 1);
  const double hi = eig_.values(0);
  if (lo < -tol::kPsd || hi > 1.0 + tol::kPsd) {
    throw InvalidArgument("DensityMatrix: eigenvalue outside [0, 1] (min " + std::to_string(lo) + ")");
  }
}

DensityMatrix DensityMatrix::maximally_mixed(int dim) {
  return DensityMatrix(HermitianOperator::identity(dim) * (1.0 / dim));
}

bool DensityMatrix::is_pure(double tolerance) const {
  if (eig_.values(0) < 1.0 - tolerance) return false;
  for (Eigen::Index j = 1; j < eig_.values.size(); ++j) {
    if (eig_.values(j) > tolerance) return false;
  }
  return true;
}

bool DensityMatrix::is_full_rank(double tolerance) const {
  return eig_.values(eig_.values.size() - 1) > tolerance;
}

PureState::PureState(const ComplexVector& v) : v_(v) {
  if (v.size() == 0) throw InvalidArgument("PureState: empty vector");
  if (std::abs(v.norm() - 1.0) > tol::kPureNorm) {
    throw InvalidArgument("PureState: vector is not normalized");
  }
}

PureState PureState::normalized(const ComplexVector& v) {
  const double n = v.norm();
  if (n == 0.0 || !std::isfinite(n)) throw InvalidArgument("PureState: cannot normalize zero vector");
  return PureState(v / n);
}

DensityMatrix PureState::density() const {
  return DensityMatrix(HermitianOperator::symmetrized(projector()));
}

// --- Bloch representation ---------------------------------------------

DensityMatrix density_from_bloch(const BlochVector& s) {
  if (s.norm() > 1.0 + 1e-12) throw InvalidArgument("density_from_bloch: |s| > 1");
  ComplexMatrix rho = pauli(0);
  for (int a = 0; a < 3; ++a) rho += s(a) * pauli(a + 1);
  return DensityMatrix(HermitianOperator::symmetrized(0.5 * rho));
}

BlochVector bloch_from_density(const ComplexMatrix& rho) {
  if (rho.rows() != 2 || rho.cols() != 2) throw InvalidArgument("bloch_from_density: not a qubit");
  BlochVector s;
  for (int a = 0; a < 3; ++a) s(a) = trace_product(rho, pauli(a + 1));
  return s;
}

PureState pure_from_bloch(const BlochVector& n) {
  const double r = n.norm();
  if (std::abs(r - 1.0) > 1e-9) throw InvalidArgument("pure_from_bloch: Bloch vector must be a unit vector");
  const BlochVector u = n / r;
  const double theta = std::acos(std::clamp(u(2), -1.0, 1.0));
  const double phi = std::atan2(u(1), u(0));
  ComplexVector v(2);
  v << std::cos(theta / 2), std::polar(std::sin(theta / 2), phi);
  return PureState::normalized(v);
}

// --- parametrizations ----------------------------------------------------

ComplexMatrix complete_basis(const ComplexVector& v) {
  const Eigen::Index d = v.size();
  ComplexMatrix frame(d, d);
  frame.col(0) = v / v.norm();
  Eigen::Index filled = 1;
  for (Eigen::Index k = 0; k < d && filled < d; ++k) {
    ComplexVector w = ComplexVector::Unit(d, k);
    // Two Gram-Schmidt passes for numerical orthogonality.
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index c = 0; c < filled; ++c) w -= frame.col(c) * frame.col(c).dot(w);
    }
    const double n = w.norm();
    if (n > 1e-6) frame.col(filled++) = w / n;
  }
  return frame;
}

std::vector<HermitianOperator> gell_mann_basis(int d) {
  using namespace std::complex_literals;
  std::vector<HermitianOperator> basis;
  const double r2 = 1.0 / std::sqrt(2.0);
  for (int j = 0; j < d; ++j) {
    for (int k = j + 1; k < d; ++k) {
      ComplexMatrix m = ComplexMatrix::Zero(d, d);
      m(j, k) = r2;
      m(k, j) = r2;
      basis.push_back(HermitianOperator::symmetrized(m));
    }
  }
  for (int j = 0; j < d; ++j) {
    for (int k = j + 1; k < d; ++k) {
      ComplexMatrix m = ComplexMatrix::Zero(d, d);
      m(j, k) = -1i * r2;
      m(k, j) = 1i * r2;
      basis.push_back(HermitianOperator::symmetrized(m));
    }
  }
  for (int l = 1; l < d; ++l) {
    ComplexMatrix m = ComplexMatrix::Zero(d, d);
    const double norm = 1.0 / std::sqrt(static_cast<double>(l) * (l + 1));
    for (int m_idx = 0; m_idx < l; ++m_idx) m(m_idx, m_idx) = norm;
    m(l, l) = -static_cast<double>(l) * norm;
    basis.push_back(HermitianOperator::symmetrized(m));
  }
  return basis;
}

Parametrization Parametrization::pure_canonical(const PureState& base) {
  if (base.dim() < 2) throw InvalidArgument("pure_canonical: dimension must be at least 2");
  Parametrization p;
  p.kind_ = ParamKind::PureCanonical;
  p.dim_ = base.dim();
  p.theta_ = RealVector::Zero(2 * (p.dim_ - 1));
  p.frame_ = complete_basis(base.vec());
  return p;
}

Parametrization Parametrization::affine_mixed(const DensityMatrix& rho) {
  return affine_mixed(rho, gell_mann_basis(rho.dim()));
}

Parametrization Parametrization::affine_mixed(const DensityMatrix& rho, std::vector<HermitianOperator> basis) {
  const int d = rho.dim();
  if (static_cast<int>(basis.size()) != d * d - 1) {
    throw InvalidArgument("affine_mixed: basis must have d^2 - 1 elements");
  }
  for (size_t a = 0; a < basis.size(); ++a) {
    if (basis[a].dim() != d) throw InvalidArgument("affine_mixed: basis dimension mismatch");
    if (std::abs(basis[a].trace()) > 1e-10) throw InvalidArgument("affine_mixed: basis element not traceless");
    for (size_t b = 0; b <= a; ++b) {
      const double g = trace_product(basis[a].mat(), basis[b].mat());
      if (std::abs(g - (a == b ? 1.0 : 0.0)) > 1e-10) {
        throw InvalidArgument("affine_mixed: basis is not Hilbert-Schmidt orthonormal");
      }
    }
  }
  Parametrization p;
  p.kind_ = ParamKind::AffineMixed;
  p.dim_ = d;
  p.theta_.resize(static_cast<Eigen::Index>(basis.size()));
  for (size_t a = 0; a < basis.size(); ++a) {
    p.theta_(static_cast<Eigen::Index>(a)) = trace_product(rho.mat(), basis[a].mat());
  }
  p.basis_ = std::move(basis);
  return p;
}

Parametrization Parametrization::bloch_qubit(const BlochVector& s) {
  density_from_bloch(s);  // validates |s| <= 1
  Parametrization p;
  p.kind_ = ParamKind::BlochQubit;
  p.dim_ = 2;
  p.theta_ = s;
  return p;
}

ComplexMatrix Parametrization::pure_matrix_at(const RealVector& theta) const {
  const int d = dim_;
  ComplexVector v = ComplexVector::Zero(d);
  v(0) = 1.0;
  for (int j = 1; j < d; ++j) v(j) = Complex(theta(j - 1), theta(d - 1 + j - 1));
  const ComplexVector psi = frame_ * (v / v.norm());
  return projector(psi);
}

DensityMatrix Parametrization::state_at(const RealVector& theta) const {
  if (theta.size() != theta_.size()) throw InvalidArgument("state_at: wrong parameter count");
  switch (kind_) {
    case ParamKind::PureCanonical:
      return DensityMatrix(HermitianOperator::symmetrized(pure_matrix_at(theta)));
    case ParamKind::AffineMixed: {
      ComplexMatrix rho = ComplexMatrix::Identity(dim_, dim_) / static_cast<double>(dim_);
      for (size_t a = 0; a < basis_.size(); ++a) rho += theta(static_cast<Eigen::Index>(a)) * basis_[a].mat();
      return DensityMatrix(HermitianOperator::symmetrized(rho));
    }
    case ParamKind::BlochQubit:
      return density_from_bloch(BlochVector(theta(0), theta(1), theta(2)));
  }
  throw InvalidArgument("state_at: unsupported parametrization kind");
}

Parametrization Parametrization::with_theta(const RealVector& theta) const {
  if (theta.size() != theta_.size()) throw InvalidArgument("with_theta: wrong parameter count");
  state_at(theta);
  Parametrization p = *this;
  p.theta_ = theta;
  return p;
}

TangentSet Parametrization::tangents() const {
  TangentSet out;
  switch (kind_) {
    case ParamKind::PureCanonical: {
      const int d = dim_;
      ComplexVector v = ComplexVector::Zero(d);
      v(0) = 1.0;
      for (int j = 1; j < d; ++j) v(j) = Complex(theta_(j - 1), theta_(d - 1 + j - 1));
      const double n = v.squaredNorm();
      const ComplexVector psi = v / std::sqrt(n);
      for (int a = 0; a < 2 * (d - 1); ++a) {
        const int j = a % (d - 1) + 1;
        ComplexVector dv = ComplexVector::Zero(d);
        dv(j) = a < d - 1 ? Complex(1.0, 0.0) : Complex(0.0, 1.0);
        const double dn_half = v.dot(dv).real();  // (1/2) dn
        const ComplexVector dpsi = dv / std::sqrt(n) - v * (dn_half / std::pow(n, 1.5));
        const ComplexMatrix local = dpsi * psi.adjoint() + psi * dpsi.adjoint();
        out.derivatives.push_back(HermitianOperator::symmetrized(frame_ * local * frame_.adjoint()));
      }
      break;
    }
    case ParamKind::AffineMixed:
      out.derivatives = basis_;
      break;
    case ParamKind::BlochQubit:
      for (int a = 0; a < 3; ++a) out.derivatives.push_back(HermitianOperator::symmetrized(0.5 * pauli(a + 1)));
      break;
  }
  return out;
}

TangentSet tangent_ops(const Parametrization& param) { return param.tangents(); }

// --- SLD / QFI ----------------------------------------------------------------

HermitianOperator sld(const DensityMatrix& rho, const HermitianOperator& drho) {
  if (drho.dim() != rho.dim()) throw InvalidArgument("sld: dimension mismatch");
  const auto& eig = rho.eig();
  if (rho.is_full_rank()) {
    const ComplexMatrix local = eig.vectors.adjoint() * drho.mat() * eig.vectors;
    ComplexMatrix l(local.rows(), local.cols());
    for (Eigen::Index j = 0; j < local.rows(); ++j) {
      for (Eigen::Index k = 0; k < local.cols(); ++k) {
        l(j, k) = 2.0 * local(j, k) / (eig.values(j) + eig.values(k));
      }
    }
    return HermitianOperator::symmetrized(eig.vectors * l * eig.vectors.adjoint());
  }
  if (rho.is_pure()) {
    const ComplexMatrix p = projector(eig.vectors.col(0));
    const ComplexMatrix q = ComplexMatrix::Identity(rho.dim(), rho.dim()) - p;
    const double scale = std::max(drho.norm(), 1.0);
    if ((p * drho.mat() * p).norm() > 1e-9 * scale || (q * drho.mat() * q).norm() > 1e-9 * scale) {
      throw InvalidArgument("sld: derivative is not tangent to the pure-state manifold");
    }
    return drho * 2.0;
  }
  throw InvalidArgument(
      "sld: rank-deficient mixed states are unsupported (depolarize explicitly if intended)");
}

RealMatrix qfi_matrix(const DensityMatrix& rho, const TangentSet& tangents) {
  const int g = tangents.size();
  std::vector<HermitianOperator> slds;
  std::vector<ComplexMatrix> rho_l;
  slds.reserve(static_cast<size_t>(g));
  for (const auto& t : tangents.derivatives) {
    slds.push_back(sld(rho, t));
    rho_l.push_back(rho.mat() * slds.back().mat());
  }
  RealMatrix j(g, g);
  for (int a = 0; a < g; ++a) {
    for (int b = 0; b <= a; ++b) {
      // (1/2) tr[rho (L_a L_b + L_b L_a)] = Re tr(rho L_a L_b)
      const double v = trace_product(rho_l[static_cast<size_t>(a)], slds[static_cast<size_t>(b)].mat());
      j(a, b) = v;
      j(b, a) = v;
    }
  }
  return j;
}

RealMatrix qfi_matrix(const Parametrization& param) { return qfi_matrix(param.state(), param.tangents()); }

DensityMatrix depolarize(const DensityMatrix& rho, double eps) {
  if (eps < 0.0 || eps > 1.0) throw InvalidArgument("depolarize: eps must lie in [0, 1]");
  const int d = rho.dim();
  return DensityMatrix(HermitianOperator::symmetrized(
      (1.0 - eps) * rho.mat() + (eps / d) * ComplexMatrix::Identity(d, d)));
}

// --- distances --------------------------------------------------------------

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim()) throw InvalidArgument("fidelity: dimension mismatch");
  const ComplexMatrix sqrt_rho = rho.eig().apply([](double l) { return l > 0 ? std::sqrt(l) : 0.0; });
  const auto inner = hermitian_eig(HermitianOperator::symmetrized(sqrt_rho * sigma.mat() * sqrt_rho));
  double s = 0.0;
  for (Eigen::Index j = 0; j < inner.values.size(); ++j) s += inner.values(j) > 0 ? std::sqrt(inner.values(j)) : 0.0;
  return std::clamp(s * s, 0.0, 1.0);
}

double bures_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
  return std::sqrt(std::max(0.0, 2.0 - 2.0 * std::sqrt(fidelity(rho, sigma))));
}

double hs_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim()) throw InvalidArgument("hs_distance: dimension mismatch");
  return (rho.mat() - sigma.mat()).norm();
}

// --- random sampling --------------------------------------------------------

ComplexVector gaussian_vector(int d, Rng& rng) {
  std::normal_distribution<double> n01(0.0, 1.0);
  ComplexVector v(d);
  for (int j = 0; j < d; ++j) {
    const double re = n01(rng);
    const double im = n01(rng);
    v(j) = Complex(re, im);
  }
  return v;
}

PureState random_pure_state(int d, Rng& rng) { return PureState::normalized(gaussian_vector(d, rng)); }

ComplexMatrix random_unitary(int d, Rng& rng) {
  ComplexMatrix g(d, d);
  for (int c = 0; c < d; ++c) g.col(c) = gaussian_vector(d, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR();
  for (int c = 0; c < d; ++c) {
    const Complex rc = r(c, c);
    q.col(c) *= std::abs(rc) > 0 ? rc / std::abs(rc) : Complex(1.0);
  }
  return q;
}

DensityMatrix random_density(int d, Rng& rng) {
  for (;;) {
    ComplexMatrix g(d, d);
    for (int c = 0; c < d; ++c) g.col(c) = gaussian_vector(d, rng);
    ComplexMatrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    DensityMatrix out(HermitianOperator::symmetrized(rho));
    if (out.spectrum()(d - 1) > 1e-6) return out;
  }
}

}  // namespace ufsym
