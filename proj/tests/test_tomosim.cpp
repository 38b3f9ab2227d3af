#include <doctest.h>

#include <cmath>
#include <sstream>

#include "test_support.hpp"
#include "ufsym/tomosim.hpp"

using namespace ufsym;
using namespace ufsym::testing;

namespace {

Counts proportional_counts(const RealVector& p, double scale) {
  Counts c;
  for (Eigen::Index i = 0; i < p.size(); ++i) c.push_back(static_cast<std::int64_t>(std::llround(p(i) * scale)));
  return c;
}

SimConfig config_for(Scheme scheme, const BlochVector& s, std::int64_t n, int trials, std::uint64_t seed) {
  SimConfig c;
  c.scheme = scheme;
  c.bloch = s;
  c.n_copies = n;
  c.n_trials = trials;
  c.seed = seed;
  return c;
}

}  // namespace

TEST_CASE("outcome model reproduces Born probabilities and their derivatives") {
  Rng rng(51);
  const std::vector<Povm> povms{collective_sic_qubit(), make_povm(sic_qubit().operators(), 1),
                                random_non_rank_one_povm(2, rng), random_twocopy_povm(2, rng)};
  for (const auto& p : povms) {
    const QubitOutcomeModel model(p);
    for (int trial = 0; trial < 10; ++trial) {
      const BlochVector s = random_bloch(rng, 0.99);
      CHECK((model.probs(s) - outcome_probs(density_from_bloch(s), p)).norm() < 1e-14);
      const double h = 1e-6;
      for (int a = 0; a < 3; ++a) {
        BlochVector up = s, down = s;
        up(a) += h;
        down(a) -= h;
        const RealVector fd = (model.probs(up) - model.probs(down)) / (2 * h);
        CHECK((fd - model.jacobian(s).col(a)).norm() < 1e-8);
      }
      for (int i = 0; i < model.outcomes(); ++i) {
        if (p.copies == 1) CHECK(model.hessian(i).norm() == 0.0);
      }
    }
  }
  CHECK_THROWS_AS(QubitOutcomeModel(twocopy_design_povm(sic_d3())), InvalidArgument);
}

TEST_CASE("multinomial sampling") {
  Rng rng(52);
  const RealVector uniform5 = RealVector::Constant(5, 0.2);
  const std::int64_t n = 5'000'000;
  const Counts c = sample_outcomes(uniform5, n, rng);
  std::int64_t total = 0;
  const double sigma = std::sqrt(n * 0.2 * 0.8);
  for (auto x : c) {
    total += x;
    CHECK(std::abs(x - n / 5.0) < 5 * sigma);
  }
  CHECK(total == n);
  const Counts zero = sample_outcomes(uniform5, 0, rng);
  for (auto x : zero) CHECK(x == 0);
  Rng a(9), b(9);
  CHECK(sample_outcomes(uniform5, 1000, a) == sample_outcomes(uniform5, 1000, b));
  RealVector rounding(3);
  rounding << 0.5, 0.5 + 1e-17, -1e-17;
  const Counts r = sample_outcomes(rounding, 100, rng);
  CHECK(r[2] == 0);
}

TEST_CASE("linear inversion") {
  const QubitOutcomeModel sic(make_povm(sic_qubit().operators(), 1));
  const QubitOutcomeModel cs(collective_sic_qubit());
  const BlochVector s(0.3, -0.2, 0.5);
  CHECK((estimate_linear_qubit(sic, proportional_counts(sic.probs(s), 1e12)) - s).norm() < 1e-9);
  CHECK((estimate_linear_qubit(cs, proportional_counts(cs.probs(s), 1e12)) - s).norm() < 1e-9);
  CHECK(estimate_linear_qubit(cs, proportional_counts(cs.probs(BlochVector::Zero()), 1e12)).norm() < 1e-9);
  // All counts on one SIC outcome: the unconstrained solution lies outside the ball.
  const BlochVector out = estimate_linear_qubit(sic, {100, 0, 0, 0});
  CHECK(std::abs(out.norm() - 1.0) < 1e-12);
  CHECK_THROWS_AS(estimate_linear_qubit(sic, {0, 0, 0, 0}), InvalidArgument);
  const QubitOutcomeModel z(make_povm({HermitianOperator::symmetrized(projector(basis_vector(2, 0))),
                                       HermitianOperator::symmetrized(projector(basis_vector(2, 1)))},
                                      1));
  CHECK_THROWS_AS(estimate_linear_qubit(z, {3, 4}), InvalidArgument);
}

TEST_CASE("maximum likelihood") {
  const QubitOutcomeModel cs(collective_sic_qubit());
  Rng rng(53);
  for (int trial = 0; trial < 10; ++trial) {
    const BlochVector s = random_bloch(rng, 0.9);
    const auto r = estimate_mle_qubit(cs, proportional_counts(cs.probs(s), 1e12), 1.0 - 1e-9);
    CHECK((r.s - s).norm() < 1e-6);
    CHECK(!r.on_boundary);
  }
  const QubitOutcomeModel sic(make_povm(sic_qubit().operators(), 1));
  const auto b = estimate_mle_qubit(sic, {50, 0, 0, 0}, 1.0 - 1e-9);
  CHECK(b.on_boundary);
  CHECK(std::abs(b.s.norm() - (1.0 - 1e-9)) < 1e-12);
  CHECK_THROWS_AS(estimate_mle_qubit(sic, {0, 0, 0, 0}, 0.99), InvalidArgument);
}

TEST_CASE("MLE never does worse than the clipped linear estimate") {
  Rng rng(54);
  const double clip = 1.0 - 1e-9;
  for (const Povm& p : {collective_sic_qubit(), make_povm(sic_qubit().operators(), 1),
                        make_povm(mub(2).operators(), 1)}) {
    const QubitOutcomeModel model(p);
    for (int trial = 0; trial < 200; ++trial) {
      const BlochVector s = random_bloch(rng, 1.0);
      const Counts c = sample_outcomes(model.probs(s), uniform_int(rng, 5, 400), rng);
      BlochVector lin = estimate_linear_qubit(model, c);
      if (lin.norm() > clip) lin *= clip / lin.norm();
      const auto mle = estimate_mle_qubit(model, c, clip);
      const double l_lin = log_likelihood(model, c, lin);
      CHECK(mle.log_likelihood >= l_lin - 1e-12 * std::abs(l_lin));
      CHECK(mle.s.norm() <= clip + 1e-15);
    }
  }
}

TEST_CASE("configuration validation") {
  SimConfig c = config_for(Scheme::CollectiveSic, BlochVector::Zero(), 101, 10, 1);
  CHECK_THROWS_AS(validate_config(c), InvalidArgument);  // odd N for two copies
  c.n_copies = 100;
  CHECK_NOTHROW(validate_config(c));
  c.n_trials = 0;
  CHECK_THROWS_AS(validate_config(c), InvalidArgument);
  c.n_trials = 1;
  c.bloch = BlochVector(1.0, 1.0, 0.0);
  CHECK_THROWS_AS(validate_config(c), InvalidArgument);
  c.bloch.setZero();
  c.scheme = Scheme::Custom;
  CHECK_THROWS_AS(validate_config(c), InvalidArgument);
  c.custom_povm = twocopy_design_povm(sic_qubit());
  CHECK_THROWS_AS(validate_config(c), InvalidArgument);  // symmetric subspace only
  c.custom_povm = make_povm(mub(3).operators(), 1);
  CHECK_THROWS_AS(validate_config(c), InvalidArgument);  // not a qubit
  c.custom_povm = make_povm(sic_qubit().operators(), 1);
  CHECK_NOTHROW(validate_config(c));
  c.n_copies = 1;
  CHECK_THROWS_AS(validate_config(c), InvalidArgument);
}

TEST_CASE("simulation is deterministic and parallel matches serial") {
  const SimConfig c = config_for(Scheme::CollectiveSic, BlochVector(0.4, 0.1, -0.2), 1000, 64, 1234);
  const SimResult a = run_simulation(c), b = run_simulation(c), s = run_simulation_serial(c);
  for (const SimResult* r : {&b, &s}) {
    CHECK(r->scaled_mse == a.scaled_mse);
    CHECK(r->scaled_msb == a.scaled_msb);
    CHECK(r->scaled_infidelity == a.scaled_infidelity);
    CHECK(r->mse_stderr == a.mse_stderr);
    CHECK(r->mean_estimate == a.mean_estimate);
    CHECK(r->counts_histogram == a.counts_histogram);
  }
  CHECK(a.shots == 500);
  std::int64_t total = 0;
  for (auto x : a.counts_histogram) total += x;
  CHECK(total == 500 * 64);

  SimConfig other = c;
  other.seed = 1235;
  CHECK(run_simulation(other).scaled_mse != a.scaled_mse);
  // Trial streams are keyed by index, so a prefix of the trials is reproduced.
  SimConfig shorter = c;
  shorter.n_trials = 1;
  SimConfig single = c;
  single.n_trials = 1;
  CHECK(run_simulation(shorter).scaled_mse == run_simulation_serial(single).scaled_mse);
}

TEST_CASE("asymptotic metrics") {
  const Povm cs = collective_sic_qubit();
  Rng rng(55);
  for (int trial = 0; trial < 20; ++trial) {
    const BlochVector s = random_bloch(rng, 0.97);
    const auto chart = Parametrization::bloch_qubit(s);
    CHECK(asymptotic_metrics(chart, cs, WeightKind::Bures) == doctest::Approx(1.5).epsilon(1e-10));
    CHECK(asymptotic_metrics(chart, cs, WeightKind::HilbertSchmidt) ==
          doctest::Approx(3.0 - s.squaredNorm()).epsilon(1e-10));
  }
  const auto center = Parametrization::bloch_qubit(BlochVector::Zero());
  const Povm sic = make_povm(sic_qubit().operators(), 1);
  CHECK(asymptotic_metrics(center, sic, WeightKind::Bures) == doctest::Approx(2.25).epsilon(1e-12));
  const Povm z = make_povm({HermitianOperator::symmetrized(projector(basis_vector(2, 0))),
                            HermitianOperator::symmetrized(projector(basis_vector(2, 1)))},
                           1);
  CHECK_THROWS_AS(asymptotic_metrics(center, z, WeightKind::Bures), NumericalError);
}

TEST_CASE("collective measurements win near the pure-state limit") {
  const Povm cs = collective_sic_qubit();
  const Povm sic = make_povm(sic_qubit().operators(), 1);
  const Povm mubp = make_povm(mub(2).operators(), 1);
  double last_sic = 0.0;
  for (double r : {0.95, 0.97, 0.99, 0.999}) {
    const auto chart = Parametrization::bloch_qubit(BlochVector(0.0, 0.0, r));
    CHECK(asymptotic_metrics(chart, cs, WeightKind::Bures) == doctest::Approx(1.5).epsilon(1e-9));
    const double a = asymptotic_metrics(chart, sic, WeightKind::Bures);
    const double b = asymptotic_metrics(chart, mubp, WeightKind::Bures);
    CHECK(a > 1.5);
    CHECK(b > 1.5);
    CHECK(a > last_sic);
    last_sic = a;
  }
}

TEST_CASE("Monte Carlo converges to the Cramer-Rao limit") {
  const BlochVector s(0.5, 0.0, 0.0);
  const double target = 1.5;
  double last_dev = 1e300;
  for (std::int64_t n : {100, 1000, 10000}) {
    const SimResult r = run_simulation(config_for(Scheme::CollectiveSic, s, n, 400, 77));
    const double dev = std::abs(r.scaled_msb - target);
    CHECK(dev < last_dev + 3 * r.msb_stderr);
    last_dev = dev;
    if (n == 10000) CHECK(dev <= 3 * r.msb_stderr + 0.05 * target);
  }
}

TEST_CASE("sweep rows and CSV") {
  SweepConfig sc;
  sc.base = config_for(Scheme::CollectiveSic, BlochVector::Zero(), 200, 4, 5);
  sc.radii = {0.0, 0.5, 0.9};
  sc.analytic_only = true;
  const auto rows = sweep(sc);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].analytic_mse == doctest::Approx(3.0));
  CHECK(rows[2].analytic_mse == doctest::Approx(2.19));
  for (const auto& r : rows) CHECK(r.analytic_msb == doctest::Approx(1.5));
  const std::string csv = sweep_csv(rows);
  std::istringstream in(csv);
  std::string comment, header, first;
  std::getline(in, comment);
  std::getline(in, header);
  std::getline(in, first);
  CHECK(comment.rfind("#", 0) == 0);
  CHECK(header == "s,scheme,scaled_mse,mse_stderr,scaled_msb,msb_stderr,analytic_mse,analytic_msb");
  CHECK(first.rfind("0,collective-sic,,,,,", 0) == 0);
  const auto tail = first.substr(std::string("0,collective-sic,,,,,").size());
  const auto comma = tail.find(',');
  CHECK(std::stod(tail.substr(0, comma)) == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(std::stod(tail.substr(comma + 1)) == doctest::Approx(1.5).epsilon(1e-14));

  sc.analytic_only = false;
  const auto sim = sweep(sc);
  CHECK(sim[1].simulated);
  CHECK(sweep(sc)[1].scaled_mse == sim[1].scaled_mse);
  sc.radii = {1.0};
  CHECK_THROWS_AS(sweep(sc), InvalidArgument);
}
