#include "ufsym/matcore.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace ufsym {

namespace {

constexpr int kMaxJacobiSweeps = 100;

void require_square(const ComplexMatrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw InvalidArgument(std::string(what) + ": expected a nonempty square matrix");
  }
}

}  // namespace

// --- HermitianOperator -----------------------------------------------------

HermitianOperator::HermitianOperator(const ComplexMatrix& m) {
  require_square(m, "HermitianOperator");
  if (!m.allFinite()) throw InvalidArgument("HermitianOperator: non-finite entry");
  const double asym = (m - m.adjoint()).norm();
  if (asym > tol::kHermitian * m.norm()) {
    throw InvalidArgument("HermitianOperator: asymmetry " + std::to_string(asym) +
                          " exceeds tolerance");
  }
  m_ = 0.5 * (m + m.adjoint());
}

HermitianOperator HermitianOperator::symmetrized(const ComplexMatrix& m) {
  require_square(m, "HermitianOperator");
  if (!m.allFinite()) throw InvalidArgument("HermitianOperator: non-finite entry");
  HermitianOperator h;
  h.m_ = 0.5 * (m + m.adjoint());
  return h;
}

HermitianOperator HermitianOperator::identity(int dim) {
  return symmetrized(ComplexMatrix::Identity(dim, dim));
}

HermitianOperator HermitianOperator::zero(int dim) {
  return symmetrized(ComplexMatrix::Zero(dim, dim));
}

HermitianOperator HermitianOperator::operator+(const HermitianOperator& o) const {
  return symmetrized(m_ + o.m_);
}

HermitianOperator HermitianOperator::operator-(const HermitianOperator& o) const {
  return symmetrized(m_ - o.m_);
}

HermitianOperator HermitianOperator::operator*(double s) const { return symmetrized(m_ * s); }

// --- basic operators -------------------------------------------------------

ComplexMatrix pauli(int index) {
  using namespace std::complex_literals;
  ComplexMatrix m(2, 2);
  switch (index) {
    case 0: m << 1, 0, 0, 1; break;
    case 1: m << 0, 1, 1, 0; break;
    case 2: m << 0, -1i, 1i, 0; break;
    case 3: m << 1, 0, 0, -1; break;
    default: throw InvalidArgument("pauli: index must be 0..3");
  }
  return m;
}

ComplexMatrix projector(const ComplexVector& v) { return v * v.adjoint(); }

ComplexVector basis_vector(int dim, int index) {
  ComplexVector e = ComplexVector::Zero(dim);
  e(index) = 1.0;
  return e;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  const auto ra = a.rows(), ca = a.cols(), rb = b.rows(), cb = b.cols();
  ComplexMatrix out(ra * rb, ca * cb);
  for (Eigen::Index i = 0; i < ra; ++i) {
    for (Eigen::Index j = 0; j < ca; ++j) {
      out.block(i * rb, j * cb, rb, cb) = a(i, j) * b;
    }
  }
  return out;
}

ComplexVector kron(const ComplexVector& a, const ComplexVector& b) {
  ComplexVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, int dim_a, int dim_b, Subsystem traced) {
  if (m.rows() != dim_a * dim_b || m.cols() != dim_a * dim_b) {
    throw InvalidArgument("partial_trace: operator dimension does not match factors");
  }
  if (traced == Subsystem::First) {
    ComplexMatrix out = ComplexMatrix::Zero(dim_b, dim_b);
    for (int i = 0; i < dim_a; ++i) out += m.block(i * dim_b, i * dim_b, dim_b, dim_b);
    return out;
  }
  ComplexMatrix out(dim_a, dim_a);
  for (int i = 0; i < dim_a; ++i) {
    for (int j = 0; j < dim_a; ++j) {
      out(i, j) = m.block(i * dim_b, j * dim_b, dim_b, dim_b).trace();
    }
  }
  return out;
}

HermitianOperator partial_trace(const HermitianOperator& m, Subsystem traced) {
  const int d = checked_sqrt_dim(m.dim(), "partial_trace");
  return HermitianOperator::symmetrized(partial_trace(m.mat(), d, d, traced));
}

HermitianOperator swap_operator(int d) {
  if (d < 1) throw InvalidArgument("swap_operator: d must be positive");
  ComplexMatrix v = ComplexMatrix::Zero(d * d, d * d);
  for (int j = 0; j < d; ++j) {
    for (int k = 0; k < d; ++k) v(j * d + k, k * d + j) = 1.0;
  }
  return HermitianOperator::symmetrized(v);
}

HermitianOperator sym_projector(int d) {
  return HermitianOperator::symmetrized(
      0.5 * (ComplexMatrix::Identity(d * d, d * d) + swap_operator(d).mat()));
}

HermitianOperator antisym_projector(int d) {
  return HermitianOperator::symmetrized(
      0.5 * (ComplexMatrix::Identity(d * d, d * d) - swap_operator(d).mat()));
}

// --- Jacobi eigensolver ------------------------------------------------------

EigenDecomposition hermitian_eig(const ComplexMatrix& input) {
  require_square(input, "hermitian_eig");
  const Eigen::Index n = input.rows();
  ComplexMatrix a = 0.5 * (input + input.adjoint());
  ComplexMatrix v = ComplexMatrix::Identity(n, n);
  const double scale = a.norm();
  const double eps = std::numeric_limits<double>::epsilon();

  auto off_norm = [&] {
    double s = 0.0;
    for (Eigen::Index q = 1; q < n; ++q)
      for (Eigen::Index p = 0; p < q; ++p) s += std::norm(a(p, q));
    return std::sqrt(2.0 * s);
  };

  bool converged = scale == 0.0;
  for (int sweep = 0; sweep < kMaxJacobiSweeps && !converged; ++sweep) {
    if (off_norm() <= static_cast<double>(n) * eps * scale) {
      converged = true;
      break;
    }
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const Complex b = a(p, q);
        const double abs_b = std::abs(b);
        if (abs_b <= std::numeric_limits<double>::min()) continue;
        const Complex phase_conj = std::conj(b) / abs_b;  // e^{-i phi}
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        // Real rotation on the phase-corrected 2x2 block [[app, |b|], [|b|, aqq]].
        const double theta = (aqq - app) / (2.0 * abs_b);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const Complex vpp = c, vpq = s, vqp = -s * phase_conj, vqq = c * phase_conj;

        for (Eigen::Index k = 0; k < n; ++k) {
          const Complex akp = a(k, p), akq = a(k, q);
          a(k, p) = akp * vpp + akq * vqp;
          a(k, q) = akp * vpq + akq * vqq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const Complex apk = a(p, k), aqk = a(q, k);
          a(p, k) = std::conj(vpp) * apk + std::conj(vqp) * aqk;
          a(q, k) = std::conj(vpq) * apk + std::conj(vqq) * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        for (Eigen::Index k = 0; k < n; ++k) {
          const Complex wkp = v(k, p), wkq = v(k, q);
          v(k, p) = wkp * vpp + wkq * vqp;
          v(k, q) = wkp * vpq + wkq * vqq;
        }
      }
    }
  }
  if (!converged && off_norm() > static_cast<double>(n) * eps * scale * 16) {
    throw NumericalError("hermitian_eig: Jacobi sweeps did not converge");
  }

  std::vector<Eigen::Index> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index x, Eigen::Index y) { return a(x, x).real() > a(y, y).real(); });
  EigenDecomposition out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    out.values(j) = a(order[j], order[j]).real();
    out.vectors.col(j) = v.col(order[j]);
  }
  return out;
}

EigenDecomposition hermitian_eig(const HermitianOperator& a) { return hermitian_eig(a.mat()); }

HermitianOperator mat_power(const HermitianOperator& a, double p, double null_tolerance,
                            InversePolicy policy) {
  const EigenDecomposition eig = hermitian_eig(a);
  for (Eigen::Index j = 0; j < eig.values.size(); ++j) {
    const double lambda = eig.values(j);
    if (lambda < -null_tolerance) {
      throw InvalidArgument("mat_power: operator has negative eigenvalue " + std::to_string(lambda));
    }
    if (p < 0 && lambda <= null_tolerance && policy == InversePolicy::Strict) {
      throw NumericalError("mat_power: singular operator under strict inverse");
    }
  }
  return HermitianOperator::symmetrized(eig.apply([&](double lambda) {
    if (lambda <= 0.0) lambda = 0.0;
    if (p < 0 && lambda <= null_tolerance) return 0.0;
    if (p == 0.0) return 1.0;
    return std::pow(lambda, p);
  }));
}

Complex hs_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw InvalidArgument("hs_inner: dimension mismatch");
  }
  return (a.conjugate().cwiseProduct(b)).sum();
}

Complex hs_inner(const HermitianOperator& a, const HermitianOperator& b) {
  return hs_inner(a.mat(), b.mat());
}

double trace_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  // tr(AB) = sum_ij A_ij B_ji; for Hermitian B, B_ji = conj(B_ij).
  return (a.cwiseProduct(b.transpose())).sum().real();
}

double min_eigenvalue(const HermitianOperator& a) {
  const auto eig = hermitian_eig(a);
  return eig.values(eig.values.size() - 1);
}

int numerical_rank(const HermitianOperator& a, double rel_tol) {
  const double cutoff = rel_tol * a.norm();
  const auto eig = hermitian_eig(a);
  int rank = 0;
  for (Eigen::Index j = 0; j < eig.values.size(); ++j) rank += eig.values(j) > cutoff ? 1 : 0;
  return rank;
}

bool is_psd(const HermitianOperator& a, double rel_tol) {
  return min_eigenvalue(a) >= -rel_tol * std::max(a.norm(), 1.0);
}

double spectral_norm(const HermitianOperator& a) {
  const auto eig = hermitian_eig(a);
  return std::max(std::abs(eig.values(0)), std::abs(eig.values(eig.values.size() - 1)));
}

int checked_sqrt_dim(int n, const std::string& what) {
  const int r = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
  if (r * r != n) throw InvalidArgument(what + ": dimension " + std::to_string(n) + " is not a perfect square");
  return r;
}

}  // namespace ufsym
