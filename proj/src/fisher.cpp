#include "ufsym/fisher.hpp"

#include <algorithm>
#include <cmath>

namespace ufsym {

namespace {

void require_compatible(const DensityMatrix& rho, const Povm& p) {
  if (rho.dim() != p.base_dim) throw InvalidArgument("state dimension does not match the POVM");
  if (p.copies != 1 && p.copies != 2) throw InvalidArgument("only one- and two-copy POVMs are supported");
  const int n = p.dim();
  for (const auto& e : p.elements) {
    if (e.dim() != n) throw InvalidArgument("POVM element dimension mismatch");
  }
}

constexpr double kSingularJ = 1e-10;

void require_invertible(const RealMatrix& J, const char* what) {
  if (J.rows() != J.cols() || J.rows() == 0) throw InvalidArgument(std::string(what) + ": J must be square");
  if (min_symmetric_eigenvalue(J) <= kSingularJ) throw NumericalError(std::string(what) + ": J is singular");
}

double safe_sqrt(double x) { return std::sqrt(x); }
double inv_sqrt(double x) { return 1.0 / std::sqrt(x); }

}  // namespace

// --- real symmetric helpers ---------------------------------------------------

double min_symmetric_eigenvalue(const RealMatrix& a) {
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(0.5 * (a + a.transpose()), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

RealMatrix symmetric_function(const RealMatrix& a, double (*f)(double)) {
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(0.5 * (a + a.transpose()));
  RealVector vals = es.eigenvalues();
  for (Eigen::Index j = 0; j < vals.size(); ++j) {
    if (vals(j) < -1e-10) throw InvalidArgument("symmetric_function: matrix is not positive semidefinite");
    vals(j) = f(std::max(vals(j), 0.0));
  }
  return es.eigenvectors() * vals.asDiagonal() * es.eigenvectors().transpose();
}

// --- probabilities and Fisher information --------------------------------

RealVector outcome_probs(const DensityMatrix& rho, const Povm& p) {
  require_compatible(rho, p);
  const ComplexMatrix state = p.copies == 2 ? kron(rho.mat(), rho.mat()) : rho.mat();
  RealVector probs(p.size());
  for (int i = 0; i < p.size(); ++i) probs(i) = trace_product(state, p.elements[static_cast<size_t>(i)].mat());
  return probs;
}

FisherMatrixResult fisher_matrix(const Parametrization& param, const Povm& p, double drop_threshold) {
  const DensityMatrix rho = param.state();
  require_compatible(rho, p);
  const TangentSet tangents = param.tangents();
  const int g = tangents.size();
  const int n = p.size();

  std::vector<ComplexMatrix> dstate;
  for (const auto& t : tangents.derivatives) {
    dstate.push_back(p.copies == 2 ? ComplexMatrix(kron(t.mat(), rho.mat()) + kron(rho.mat(), t.mat())) : t.mat());
  }

  FisherMatrixResult out;
  out.probs = outcome_probs(rho, p);
  out.I = RealMatrix::Zero(g, g);
  RealVector dp(g);
  for (int i = 0; i < n; ++i) {
    const ComplexMatrix& e = p.elements[static_cast<size_t>(i)].mat();
    for (int a = 0; a < g; ++a) dp(a) = trace_product(dstate[static_cast<size_t>(a)], e);
    const double prob = out.probs(i);
    if (prob > drop_threshold) {
      out.I += dp * dp.transpose() / prob;
    } else {
      const double m = dp.cwiseAbs().maxCoeff();
      out.dropped.push_back({i, prob, m});
      out.regularity_warning = out.regularity_warning || m > kRegularityThreshold;
    }
  }
  out.I = 0.5 * (out.I + out.I.transpose());
  return out;
}

double gm_value(const RealMatrix& J, const RealMatrix& I) {
  if (I.rows() != J.rows() || I.cols() != J.cols()) throw InvalidArgument("gm_value: dimension mismatch");
  require_invertible(J, "gm_value");
  return J.llt().solve(I).trace();
}

const char* gm_mode_name(GmMode mode) {
  switch (mode) {
    case GmMode::SingleCopySeparable: return "separable";
    case GmMode::TwoCopyCollective: return "two-copy";
    case GmMode::PureAnyN: return "pure";
  }
  return "separable";
}

double gm_bound(GmMode mode, int d, int copies) {
  switch (mode) {
    case GmMode::SingleCopySeparable: return copies * (d - 1.0);
    case GmMode::TwoCopyCollective: return 3.0 * (d - 1.0);
    case GmMode::PureAnyN: return copies * (d - 1.0);
  }
  return d - 1.0;
}

namespace {

bool equality_structure(const Povm& p, const RealVector& probs) {
  if (p.copies == 2) return classify_coherent(p).coherent();
  for (int i = 0; i < p.size(); ++i) {
    if (numerical_rank(p.elements[static_cast<size_t>(i)]) != 1 || probs(i) <= kDropThreshold) return false;
  }
  return true;
}

}  // namespace

GmVerdict gm_check(const Parametrization& param, const Povm& p, GmMode mode, double tol) {
  return fisher_report(param, p, mode, tol).gm;
}

// --- Fisher symmetry -----------------------------------------------------

const char* symmetry_name(SymmetryKind kind) {
  switch (kind) {
    case SymmetryKind::FisherSymmetric: return "FisherSymmetric";
    case SymmetryKind::WeaklyFisherSymmetric: return "WeaklyFisherSymmetric";
    case SymmetryKind::Neither: return "Neither";
  }
  return "Neither";
}

double symmetry_target(bool pure, int d, int copies) {
  if (pure) return copies / 2.0;
  return copies == 2 ? 3.0 / (d + 1.0) : 1.0 / (d + 1.0);
}

SymmetryVerdict symmetry_from_matrices(const RealMatrix& J, const RealMatrix& I, double target, double tol) {
  SymmetryVerdict v;
  const double jj = J.squaredNorm();
  if (jj == 0.0) throw NumericalError("fisher symmetry: J vanishes");
  v.fitted_scale = (I.array() * J.array()).sum() / jj;
  v.weak_residual = v.fitted_scale > 0.0 ? (I - v.fitted_scale * J).norm() / (v.fitted_scale * J.norm()) : 1.0;
  v.target_scale = target;
  v.full_residual = (I - target * J).norm() / (target * J.norm());
  if (v.full_residual <= tol) {
    v.kind = SymmetryKind::FisherSymmetric;
  } else if (v.fitted_scale > 0.0 && v.weak_residual <= tol) {
    v.kind = SymmetryKind::WeaklyFisherSymmetric;
  }
  return v;
}

SymmetryVerdict fisher_symmetry_check(const Parametrization& param, const Povm& p, double tol) {
  const auto fm = fisher_matrix(param, p);
  const RealMatrix J = qfi_matrix(param);
  const bool pure = param.state().is_pure();
  return symmetry_from_matrices(J, fm.I, symmetry_target(pure, param.dim(), p.copies), tol);
}

// --- WMSE ---------------------------------------------------------------------

namespace {

struct WmseParts {
  RealMatrix sqrt_r;
  double trace_sqrt_r = 0.0;
};

WmseParts wmse_parts(const RealMatrix& J, const RealMatrix& W, int d, const char* what) {
  if (d < 2) throw InvalidArgument(std::string(what) + ": dimension must be at least 2");
  if (W.rows() != J.rows() || W.cols() != J.cols()) throw InvalidArgument(std::string(what) + ": dimension mismatch");
  require_invertible(J, what);
  if (min_symmetric_eigenvalue(W) < -1e-10) throw InvalidArgument(std::string(what) + ": W is not positive semidefinite");
  const RealMatrix jm = symmetric_function(J, inv_sqrt);
  const RealMatrix r = jm * W * jm;
  WmseParts parts;
  parts.sqrt_r = symmetric_function(r, safe_sqrt);
  parts.trace_sqrt_r = parts.sqrt_r.trace();
  return parts;
}

double wmse_coefficient(WmseMode mode, int d) { return mode == WmseMode::TwoCopy ? 3.0 * (d - 1.0) : d - 1.0; }

}  // namespace

double wmse_bound(const RealMatrix& J, const RealMatrix& W, WmseMode mode, int d) {
  const auto parts = wmse_parts(J, W, d, "wmse_bound");
  const double s2 = parts.trace_sqrt_r * parts.trace_sqrt_r;
  return mode == WmseMode::TwoCopy ? 2.0 * s2 / (3.0 * (d - 1.0)) : s2 / (d - 1.0);
}

RealMatrix optimal_fisher(const RealMatrix& J, const RealMatrix& W, WmseMode mode, int d) {
  const auto parts = wmse_parts(J, W, d, "optimal_fisher");
  if (parts.trace_sqrt_r <= 0.0) throw InvalidArgument("optimal_fisher: W vanishes");
  const RealMatrix jh = symmetric_function(J, safe_sqrt);
  RealMatrix iw = wmse_coefficient(mode, d) * jh * (parts.sqrt_r / parts.trace_sqrt_r) * jh;
  return 0.5 * (iw + iw.transpose());
}

// --- finite-difference oracle ---------------------------------------------------

RealMatrix fisher_fd_oracle(const Parametrization& param, const Povm& p, double h) {
  if (!(h > 0.0)) throw InvalidArgument("fisher_fd_oracle: step must be positive");
  const int g = param.num_params();
  const RealVector p0 = outcome_probs(param.state(), p);
  RealMatrix dp(p.size(), g);
  for (int a = 0; a < g; ++a) {
    RealVector up = param.theta(), down = param.theta();
    up(a) += h;
    down(a) -= h;
    RealVector pu, pd;
    try {
      pu = outcome_probs(param.state_at(up), p);
      pd = outcome_probs(param.state_at(down), p);
    } catch (const InvalidArgument&) {
      throw InvalidArgument("fisher_fd_oracle: displaced point leaves the state space (boundary point)");
    }
    dp.col(a) = (pu - pd) / (2.0 * h);
  }
  RealMatrix I = RealMatrix::Zero(g, g);
  for (int i = 0; i < p.size(); ++i) {
    if (p0(i) > kDropThreshold) I += dp.row(i).transpose() * dp.row(i) / p0(i);
  }
  return 0.5 * (I + I.transpose());
}

// --- report ---------------------------------------------------------------

GmMode default_gm_mode(const Parametrization& param, const Povm& p) {
  if (param.describes_pure_states()) return GmMode::PureAnyN;
  return p.copies == 2 ? GmMode::TwoCopyCollective : GmMode::SingleCopySeparable;
}

FisherReport fisher_report(const Parametrization& param, const Povm& p, GmMode mode, double tol) {
  FisherReport r;
  const auto fm = fisher_matrix(param, p);
  r.I = fm.I;
  r.probs = fm.probs;
  r.dropped = fm.dropped;
  r.regularity_warning = fm.regularity_warning;
  r.J = qfi_matrix(param);
  r.mode = mode;
  r.gm.gm = gm_value(r.J, r.I);
  r.gm.bound = gm_bound(mode, param.dim(), p.copies);
  r.gm.within_bound = r.gm.gm <= r.gm.bound + tol;
  r.gm.equality = std::abs(r.gm.gm - r.gm.bound) <= tol;
  r.gm.structure_holds = equality_structure(p, fm.probs);
  r.gm.consistent = r.gm.equality == r.gm.structure_holds;
  const bool pure = param.state().is_pure();
  r.symmetry = symmetry_from_matrices(r.J, r.I, symmetry_target(pure, param.dim(), p.copies), tol);
  return r;
}

}  // namespace ufsym
