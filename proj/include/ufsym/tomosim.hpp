#pragma once

// Monte Carlo qubit tomography: multinomial sampling, maximum-likelihood and
// linear-inversion estimators, scaled MSE (Hilbert-Schmidt) and scaled MSB
// (Bures) with their Cramer-Rao limits, and Bloch-radius sweeps.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ufsym/fisher.hpp"
#include "ufsym/povm.hpp"
#include "ufsym/states.hpp"

namespace ufsym {

enum class Scheme { CollectiveSic, SicSingle, MubSingle, Custom };
enum class Estimator { Mle, Linear };

const char* scheme_name(Scheme s);
const char* estimator_name(Estimator e);

struct SimConfig {
  BlochVector bloch = BlochVector::Zero();
  Scheme scheme = Scheme::CollectiveSic;
  std::optional<Povm> custom_povm;  // Scheme::Custom
  Estimator estimator = Estimator::Mle;
  std::int64_t n_copies = 10000;  // N; even for two-copy schemes
  int n_trials = 1000;
  std::uint64_t seed = 0;
  double interior_clip = 1.0 - 1e-9;  // max |s| of the MLE search
};

/// Throws InvalidArgument on N < 2, odd N for two-copy schemes, n_trials < 1,
/// |s| > 1, a missing custom POVM, or a non-qubit custom POVM.
void validate_config(const SimConfig& config);

/// The measurement used by a scheme.
Povm scheme_povm(const SimConfig& config);

/// p_xi(s) for a qubit POVM as an explicit polynomial in the Bloch vector:
/// linear for one copy, quadratic for two.
class QubitOutcomeModel {
 public:
  explicit QubitOutcomeModel(const Povm& p);

  int outcomes() const { return static_cast<int>(coeffs_.size()); }
  int copies() const { return copies_; }
  RealVector probs(const BlochVector& s) const;
  /// Rows are gradients of p_xi.
  Eigen::MatrixXd jacobian(const BlochVector& s) const;
  /// Hessian of p_xi (zero for one copy).
  Eigen::Matrix3d hessian(int outcome) const;

 private:
  int copies_ = 1;
  // p_xi = t^T T_xi t with t = (1, s); for one copy only the first row and column are nonzero.
  std::vector<Eigen::Matrix4d> coeffs_;
};

using Counts = std::vector<std::int64_t>;

/// Multinomial draw of n repetitions; negative probabilities from rounding
/// are clipped to zero and the rest renormalized.
Counts sample_outcomes(const RealVector& probs, std::int64_t n, Rng& rng);

/// Normalized log-likelihood sum_xi n_xi log p_xi(s) / sum n; -inf when an
/// observed outcome has zero probability.
double log_likelihood(const QubitOutcomeModel& model, const Counts& counts, const BlochVector& s);

struct MleResult {
  BlochVector s = BlochVector::Zero();
  double log_likelihood = 0.0;
  bool on_boundary = false;  // |s| reached interior_clip
  int iterations = 0;
};

/// Multi-start projected Newton ascent over |s| <= interior_clip, from the
/// linear-inversion point and three fixed perturbations of it. Throws on
/// all-zero counts.
MleResult estimate_mle_qubit(const QubitOutcomeModel& model, const Counts& counts, double interior_clip);

/// Least-squares fit of frequencies to p(s) (Gauss-Newton for two copies)
/// projected onto the unit ball. Throws InvalidArgument when the design is
/// rank deficient or counts are all zero.
BlochVector estimate_linear_qubit(const QubitOutcomeModel& model, const Counts& counts);

struct SimResult {
  double scaled_mse = 0.0;
  double mse_stderr = 0.0;
  double scaled_msb = 0.0;
  double msb_stderr = 0.0;
  double scaled_infidelity = 0.0;
  double infidelity_stderr = 0.0;
  int n_trials = 0;
  std::int64_t n_copies = 0;
  std::int64_t shots = 0;  // N / copies per trial
  int boundary_trials = 0;
  BlochVector mean_estimate = BlochVector::Zero();
  Counts counts_histogram;  // summed over trials
};

/// Trials run in parallel; results are bit-identical to run_simulation_serial.
SimResult run_simulation(const SimConfig& config);
SimResult run_simulation_serial(const SimConfig& config);

enum class WeightKind { HilbertSchmidt, Bures };

/// t tr(W I^{-1}) with W_ab = tr(rho_a rho_b) (Hilbert-Schmidt) or J/4
/// (Bures); the Cramer-Rao limit of the scaled WMSE.
double asymptotic_metrics(const Parametrization& param, const Povm& p, WeightKind weight);

struct SweepConfig {
  SimConfig base;  // bloch gives the direction (x if zero)
  std::vector<double> radii;
  bool analytic_only = false;
};

struct SweepRow {
  double s = 0.0;
  std::string scheme;
  double scaled_mse = 0.0, mse_stderr = 0.0, scaled_msb = 0.0, msb_stderr = 0.0;
  double analytic_mse = 0.0, analytic_msb = 0.0;
  bool simulated = false;  // Monte Carlo columns are empty in the CSV otherwise
};

/// Requires every radius in [0, 1).
std::vector<SweepRow> sweep(const SweepConfig& config);
std::string sweep_csv(const std::vector<SweepRow>& rows);

}  // namespace ufsym
