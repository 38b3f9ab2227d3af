#include "ufsym/tomosim.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

namespace ufsym {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Stream for one trial, keyed by (seed, trial) only.
Rng trial_rng(std::uint64_t seed, int trial) {
  return Rng(splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(trial) + 0x632BE59BD9B4E019ULL)));
}

BlochVector project_ball(const BlochVector& s, double radius) {
  const double n = s.norm();
  return n > radius ? BlochVector(s * (radius / n)) : s;
}

RealVector frequencies(const Counts& counts) {
  std::int64_t total = 0;
  for (auto c : counts) total += c;
  if (total <= 0) throw InvalidArgument("estimator: all counts are zero");
  RealVector f(static_cast<Eigen::Index>(counts.size()));
  for (size_t i = 0; i < counts.size(); ++i) f(static_cast<Eigen::Index>(i)) = static_cast<double>(counts[i]) / total;
  return f;
}

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

}  // namespace

const char* scheme_name(Scheme s) {
  switch (s) {
    case Scheme::CollectiveSic: return "collective-sic";
    case Scheme::SicSingle: return "sic";
    case Scheme::MubSingle: return "mub";
    case Scheme::Custom: return "custom";
  }
  return "custom";
}

const char* estimator_name(Estimator e) { return e == Estimator::Mle ? "mle" : "linear"; }

// --- configuration ---------------------------------------------------------

Povm scheme_povm(const SimConfig& config) {
  switch (config.scheme) {
    case Scheme::CollectiveSic: return collective_sic_qubit();
    case Scheme::SicSingle: return make_povm(sic_qubit().operators(), 1);
    case Scheme::MubSingle: return make_povm(mub(2).operators(), 1);
    case Scheme::Custom:
      if (!config.custom_povm) throw InvalidArgument("simulation: custom scheme without a POVM");
      return *config.custom_povm;
  }
  throw InvalidArgument("simulation: unknown scheme");
}

void validate_config(const SimConfig& config) {
  if (config.bloch.norm() > 1.0 + 1e-12) throw InvalidArgument("simulation: |s| > 1");
  if (config.n_trials < 1) throw InvalidArgument("simulation: n_trials must be positive");
  if (config.n_copies < 2) throw InvalidArgument("simulation: n_copies must be at least 2");
  if (!(config.interior_clip > 0.0 && config.interior_clip <= 1.0)) {
    throw InvalidArgument("simulation: interior_clip must lie in (0, 1]");
  }
  const Povm p = scheme_povm(config);
  if (p.base_dim != 2) throw InvalidArgument("simulation: qubit POVMs only");
  if (p.subspace != Subspace::Full) throw InvalidArgument("simulation: POVM must resolve the full identity");
  if (!validate_povm(p).valid) throw InvalidArgument("simulation: POVM is not valid");
  if (config.n_copies % p.copies != 0) throw InvalidArgument("simulation: n_copies must be a multiple of the copies per shot");
}

// --- outcome model -----------------------------------------------------------

QubitOutcomeModel::QubitOutcomeModel(const Povm& p) : copies_(p.copies) {
  if (p.base_dim != 2) throw InvalidArgument("QubitOutcomeModel: qubit POVMs only");
  for (const auto& e : p.elements) {
    Eigen::Matrix4d t = Eigen::Matrix4d::Zero();
    if (copies_ == 1) {
      for (int mu = 0; mu < 4; ++mu) {
        const double c = 0.5 * trace_product(pauli(mu), e.mat());
        if (mu == 0) {
          t(0, 0) = c;
        } else {
          t(0, mu) = t(mu, 0) = 0.5 * c;
        }
      }
    } else {
      // rho (x) rho = (1/4) sum t_mu t_nu sigma_mu (x) sigma_nu
      for (int mu = 0; mu < 4; ++mu) {
        for (int nu = 0; nu < 4; ++nu) t(mu, nu) = 0.25 * trace_product(kron(pauli(mu), pauli(nu)), e.mat());
      }
      t = 0.5 * (t + t.transpose()).eval();
    }
    coeffs_.push_back(t);
  }
}

RealVector QubitOutcomeModel::probs(const BlochVector& s) const {
  const Eigen::Vector4d t(1.0, s(0), s(1), s(2));
  RealVector p(outcomes());
  for (int i = 0; i < outcomes(); ++i) p(i) = t.dot(coeffs_[static_cast<size_t>(i)] * t);
  return p;
}

Eigen::MatrixXd QubitOutcomeModel::jacobian(const BlochVector& s) const {
  const Eigen::Vector4d t(1.0, s(0), s(1), s(2));
  Eigen::MatrixXd jac(outcomes(), 3);
  for (int i = 0; i < outcomes(); ++i) {
    const Eigen::Vector4d g = 2.0 * coeffs_[static_cast<size_t>(i)] * t;
    jac.row(i) = g.tail<3>().transpose();
  }
  return jac;
}

Eigen::Matrix3d QubitOutcomeModel::hessian(int outcome) const {
  return 2.0 * coeffs_[static_cast<size_t>(outcome)].bottomRightCorner<3, 3>();
}

// --- sampling ------------------------------------------------------------------

Counts sample_outcomes(const RealVector& probs, std::int64_t n, Rng& rng) {
  Counts counts(static_cast<size_t>(probs.size()), 0);
  if (n <= 0 || probs.size() == 0) return counts;
  RealVector p = probs.cwiseMax(0.0);
  double mass = p.sum();
  if (!(mass > 0.0)) throw InvalidArgument("sample_outcomes: probabilities vanish");
  std::int64_t remaining = n;
  for (Eigen::Index i = 0; i + 1 < p.size() && remaining > 0; ++i) {
    const double q = std::clamp(p(i) / mass, 0.0, 1.0);
    std::binomial_distribution<std::int64_t> draw(remaining, q);
    const std::int64_t c = draw(rng);
    counts[static_cast<size_t>(i)] = c;
    remaining -= c;
    mass -= p(i);
    if (mass <= 0.0) break;
  }
  counts.back() += remaining;
  return counts;
}

// --- estimators -----------------------------------------------------------------

double log_likelihood(const QubitOutcomeModel& model, const Counts& counts, const BlochVector& s) {
  const RealVector f = frequencies(counts);
  const RealVector p = model.probs(s);
  double l = 0.0;
  for (Eigen::Index i = 0; i < f.size(); ++i) {
    if (f(i) == 0.0) continue;
    if (!(p(i) > 0.0)) return -std::numeric_limits<double>::infinity();
    l += f(i) * std::log(p(i));
  }
  return l;
}

BlochVector estimate_linear_qubit(const QubitOutcomeModel& model, const Counts& counts) {
  if (static_cast<int>(counts.size()) != model.outcomes()) throw InvalidArgument("estimator: count vector size mismatch");
  const RealVector f = frequencies(counts);
  BlochVector s = BlochVector::Zero();
  for (int it = 0; it < 100; ++it) {
    const Eigen::MatrixXd jac = model.jacobian(s);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(jac);
    qr.setThreshold(1e-10);
    if (qr.rank() < 3) throw InvalidArgument("estimate_linear_qubit: POVM is not informationally complete");
    const BlochVector step = qr.solve(RealVector(f - model.probs(s)));
    s = project_ball(s + step, 1.5);
    if (step.norm() < 1e-14 || model.copies() == 1) break;
  }
  return project_ball(s, 1.0);
}

namespace {

/// One ascent run; returns the final point and its log-likelihood.
MleResult ascend(const QubitOutcomeModel& model, const RealVector& f, BlochVector s, double radius) {
  auto loglik = [&](const BlochVector& x) {
    const RealVector p = model.probs(x);
    double l = 0.0;
    for (Eigen::Index i = 0; i < f.size(); ++i) {
      if (f(i) == 0.0) continue;
      if (!(p(i) > 0.0)) return -std::numeric_limits<double>::infinity();
      l += f(i) * std::log(p(i));
    }
    return l;
  };
  s = project_ball(s, radius);
  double l = loglik(s);
  for (int k = 0; k < 60 && !std::isfinite(l); ++k) {
    s *= 0.5;
    l = loglik(s);
  }

  MleResult r;
  for (r.iterations = 0; r.iterations < 200; ++r.iterations) {
    const RealVector p = model.probs(s);
    const Eigen::MatrixXd jac = model.jacobian(s);
    BlochVector g = BlochVector::Zero();
    Eigen::Matrix3d h = Eigen::Matrix3d::Zero();
    for (Eigen::Index i = 0; i < f.size(); ++i) {
      if (f(i) == 0.0) continue;
      const BlochVector gp = jac.row(i).transpose();
      g += f(i) / p(i) * gp;
      h += f(i) * (model.hessian(static_cast<int>(i)) / p(i) - gp * gp.transpose() / (p(i) * p(i)));
    }
    if (g.norm() < 1e-10 && s.norm() < radius) break;

    std::vector<BlochVector> directions;
    Eigen::LLT<Eigen::Matrix3d> llt(-h);
    if (llt.info() == Eigen::Success) directions.push_back(llt.solve(g));
    directions.push_back(g);

    bool improved = false;
    for (const auto& dir : directions) {
      double alpha = 1.0;
      for (int k = 0; k < 60; ++k, alpha *= 0.5) {
        const BlochVector cand = project_ball(s + alpha * dir, radius);
        const double lc = loglik(cand);
        if (lc > l) {
          improved = (cand - s).norm() > 1e-15;
          s = cand;
          l = lc;
          break;
        }
      }
      if (improved) break;
    }
    if (!improved) break;
  }
  r.s = s;
  r.log_likelihood = l;
  r.on_boundary = s.norm() >= radius * (1.0 - 1e-12);
  return r;
}

}  // namespace

MleResult estimate_mle_qubit(const QubitOutcomeModel& model, const Counts& counts, double interior_clip) {
  if (static_cast<int>(counts.size()) != model.outcomes()) throw InvalidArgument("estimator: count vector size mismatch");
  const RealVector f = frequencies(counts);
  const BlochVector start = project_ball(estimate_linear_qubit(model, counts), interior_clip);
  const BlochVector offsets[4] = {BlochVector::Zero(), BlochVector(0.1, 0, 0), BlochVector(0, 0.1, 0),
                                  BlochVector(0, 0, 0.1)};
  MleResult best;
  best.log_likelihood = -std::numeric_limits<double>::infinity();
  bool first = true;
  for (const auto& off : offsets) {
    MleResult r = ascend(model, f, start + off, interior_clip);
    if (first || r.log_likelihood > best.log_likelihood) best = r;
    first = false;
  }
  return best;
}

// --- simulation ------------------------------------------------------------------

namespace {

struct TrialOutcome {
  double mse = 0.0, msb = 0.0, infidelity = 0.0;
  BlochVector estimate = BlochVector::Zero();
  bool boundary = false;
  Counts counts;
};

struct SimSetup {
  QubitOutcomeModel model;
  RealVector probs;
  DensityMatrix truth;
  std::int64_t shots = 0;
};

SimSetup make_setup(const SimConfig& config) {
  validate_config(config);
  const Povm p = scheme_povm(config);
  const QubitOutcomeModel model(p);
  return SimSetup{model, model.probs(config.bloch), density_from_bloch(config.bloch), config.n_copies / p.copies};
}

TrialOutcome run_trial(const SimConfig& config, const SimSetup& setup, int trial) {
  Rng rng = trial_rng(config.seed, trial);
  TrialOutcome out;
  out.counts = sample_outcomes(setup.probs, setup.shots, rng);
  if (config.estimator == Estimator::Mle) {
    const MleResult r = estimate_mle_qubit(setup.model, out.counts, config.interior_clip);
    out.estimate = r.s;
    out.boundary = r.on_boundary;
  } else {
    out.estimate = estimate_linear_qubit(setup.model, out.counts);
    out.boundary = out.estimate.norm() >= 1.0 - 1e-12;
  }
  const DensityMatrix est = density_from_bloch(out.estimate);
  const double n = static_cast<double>(config.n_copies);
  const double hs = hs_distance(est, setup.truth);
  const double f = fidelity(est, setup.truth);
  const double db = bures_distance(est, setup.truth);
  out.mse = n * hs * hs;
  out.msb = n * db * db;
  out.infidelity = n * (1.0 - f);
  return out;
}

void mean_stderr(const std::vector<double>& xs, double& mean, double& stderr_out) {
  const double n = static_cast<double>(xs.size());
  double s = 0.0;
  for (double x : xs) s += x;
  mean = s / n;
  double v = 0.0;
  for (double x : xs) v += (x - mean) * (x - mean);
  stderr_out = xs.size() > 1 ? std::sqrt(v / (n - 1.0) / n) : 0.0;
}

SimResult reduce(const SimConfig& config, const SimSetup& setup, const std::vector<TrialOutcome>& trials) {
  SimResult r;
  r.n_trials = config.n_trials;
  r.n_copies = config.n_copies;
  r.shots = setup.shots;
  r.counts_histogram.assign(static_cast<size_t>(setup.model.outcomes()), 0);
  std::vector<double> mse, msb, inf;
  for (const auto& t : trials) {
    mse.push_back(t.mse);
    msb.push_back(t.msb);
    inf.push_back(t.infidelity);
    r.mean_estimate += t.estimate;
    r.boundary_trials += t.boundary ? 1 : 0;
    for (size_t i = 0; i < t.counts.size(); ++i) r.counts_histogram[i] += t.counts[i];
  }
  r.mean_estimate /= static_cast<double>(trials.size());
  mean_stderr(mse, r.scaled_mse, r.mse_stderr);
  mean_stderr(msb, r.scaled_msb, r.msb_stderr);
  mean_stderr(inf, r.scaled_infidelity, r.infidelity_stderr);
  return r;
}

}  // namespace

SimResult run_simulation(const SimConfig& config) {
  const SimSetup setup = make_setup(config);
  std::vector<TrialOutcome> trials(static_cast<size_t>(config.n_trials));
#pragma omp parallel for schedule(dynamic, 8)
  for (int t = 0; t < config.n_trials; ++t) trials[static_cast<size_t>(t)] = run_trial(config, setup, t);
  return reduce(config, setup, trials);
}

SimResult run_simulation_serial(const SimConfig& config) {
  const SimSetup setup = make_setup(config);
  std::vector<TrialOutcome> trials(static_cast<size_t>(config.n_trials));
  for (int t = 0; t < config.n_trials; ++t) trials[static_cast<size_t>(t)] = run_trial(config, setup, t);
  return reduce(config, setup, trials);
}

// --- asymptotics and sweeps ----------------------------------------------------------

double asymptotic_metrics(const Parametrization& param, const Povm& p, WeightKind weight) {
  const RealMatrix I = fisher_matrix(param, p).I;
  if (min_symmetric_eigenvalue(I) <= 1e-10) {
    throw NumericalError("asymptotic_metrics: Fisher information is singular (POVM not informationally complete)");
  }
  RealMatrix W;
  if (weight == WeightKind::Bures) {
    W = qfi_matrix(param) / 4.0;
  } else {
    const TangentSet t = param.tangents();
    W.resize(t.size(), t.size());
    for (int a = 0; a < t.size(); ++a) {
      for (int b = 0; b < t.size(); ++b) {
        W(a, b) = trace_product(t.derivatives[static_cast<size_t>(a)].mat(), t.derivatives[static_cast<size_t>(b)].mat());
      }
    }
  }
  return p.copies * I.llt().solve(W).trace();
}

std::vector<SweepRow> sweep(const SweepConfig& config) {
  if (config.radii.empty()) throw InvalidArgument("sweep: empty radius grid");
  const double n = config.base.bloch.norm();
  const BlochVector dir = n > 0.0 ? BlochVector(config.base.bloch / n) : BlochVector(1.0, 0.0, 0.0);
  std::vector<SweepRow> rows;
  for (double r : config.radii) {
    if (!(r >= 0.0 && r < 1.0)) throw InvalidArgument("sweep: radii must lie in [0, 1)");
    SimConfig c = config.base;
    c.bloch = r * dir;
    validate_config(c);
    const Povm p = scheme_povm(c);
    const auto param = Parametrization::bloch_qubit(c.bloch);
    SweepRow row;
    row.s = r;
    row.scheme = scheme_name(c.scheme);
    row.analytic_mse = asymptotic_metrics(param, p, WeightKind::HilbertSchmidt);
    row.analytic_msb = asymptotic_metrics(param, p, WeightKind::Bures);
    if (!config.analytic_only) {
      const SimResult res = run_simulation(c);
      row.scaled_mse = res.scaled_mse;
      row.mse_stderr = res.mse_stderr;
      row.scaled_msb = res.scaled_msb;
      row.msb_stderr = res.msb_stderr;
      row.simulated = true;
    }
    rows.push_back(row);
  }
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out =
      "# scaled_mse = N E[||rho_hat - rho||_F^2] = N E[|s_hat - s|^2 / 2]; scaled_msb = N E[D_B^2]; "
      "analytic columns are the Cramer-Rao limits\n";
  out += "s,scheme,scaled_mse,mse_stderr,scaled_msb,msb_stderr,analytic_mse,analytic_msb\n";
  for (const auto& r : rows) {
    auto mc = [&](double x) { return r.simulated ? format_double(x) : std::string(); };
    out += format_double(r.s) + "," + r.scheme + "," + mc(r.scaled_mse) + "," + mc(r.mse_stderr) + "," +
           mc(r.scaled_msb) + "," + mc(r.msb_stderr) + "," + format_double(r.analytic_mse) + "," +
           format_double(r.analytic_msb) + "\n";
  }
  return out;
}

}  // namespace ufsym
