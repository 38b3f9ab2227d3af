#include "ufsym/cli.hpp"

#include <charconv>
#include <cmath>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "ufsym/io.hpp"

namespace ufsym::cli {

namespace {

using nlohmann::json;

struct Options {
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;
  std::string out_path;
  bool json_output = false;

  std::string verify_kind, verify_file;

  std::string build_kind;
  double phi = 0.0;
  int mub_dim = 2;
  std::string from, sic1, sic2;

  std::string povm, state, param, mode;

  std::string config;
};

void emit(const Options& o, const std::string& text, std::ostream& out) {
  if (o.out_path.empty()) {
    out << text;
  } else {
    io::write_text(o.out_path, text);
  }
}

std::optional<double> parse_double(const std::string& s) {
  double x = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(x)) return std::nullopt;
  return x;
}

std::vector<double> parse_number_list(const std::string& s, const char* what) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto x = parse_double(item);
    if (!x) throw io::ParseError(std::string("bad number \"") + item + "\" in " + what);
    v.push_back(*x);
  }
  return v;
}

// --- verify -------------------------------------------------------------------

WeightedStateSet require_state_set(const io::OperatorFile& f) {
  std::string why;
  auto set = io::to_state_set(f, &why);
  if (!set) throw InvalidArgument(why);
  return *set;
}

OperatorSet require_operator_set(const io::OperatorFile& f) {
  OperatorSet set = io::to_operator_set(f);
  set.validate();
  return set;
}

int cmd_verify(const Options& o, std::ostream& out) {
  const io::OperatorFile f = io::read_operator_file(o.verify_file);
  const std::string& kind = o.verify_kind;
  json report;
  bool pass = false;
  try {
    if (kind == "povm") {
      const auto r = validate_povm(io::to_povm(f), o.tol.value_or(1e-9));
      report = io::to_json(r);
      pass = r.valid;
    } else if (kind == "design2") {
      const auto c = projective_2design_check(require_state_set(f), o.tol.value_or(1e-8));
      report = io::to_json(c);
      pass = c.is_design;
    } else if (kind == "gdesign2") {
      const auto c = generalized_2design_check(require_operator_set(f), o.tol.value_or(1e-8));
      report = io::to_json(c);
      pass = c.is_design;
    } else if (kind == "sic") {
      const auto r = sic_check(require_state_set(f), o.tol.value_or(1e-10));
      report = io::to_json(r);
      pass = r.is_sic;
    } else if (kind == "gsic") {
      const auto r = generalized_sic_check(require_operator_set(f), o.tol.value_or(1e-8));
      report = io::to_json(r);
      pass = r.is_gsic;
    } else if (kind == "tight-coherent") {
      const auto r = tight_coherent_check(io::to_povm(f), o.tol.value_or(1e-8));
      report = io::to_json(r);
      pass = r.pass;
    } else {
      const auto c = classify_coherent(io::to_povm(f));
      report = io::to_json(c);
      pass = c.coherent();
    }
  } catch (const io::ParseError&) {
    throw;
  } catch (const InvalidArgument& e) {
    // The file parsed but does not have the structure the check needs.
    report = json{{"error", e.what()}};
    pass = false;
  }
  report["kind"] = kind;
  report["verdict"] = pass ? "pass" : "fail";
  emit(o, report.dump(2) + "\n", out);
  return pass ? kExitOk : kExitCheckFailed;
}

// --- build --------------------------------------------------------------------

WeightedStateSet named_state_set(const std::string& name, double phi, std::ostream& err) {
  if (name == "sic-qubit") return sic_qubit();
  if (name == "sic-d3") return sic_d3(phi, &err);
  if (name == "mub2") return mub(2);
  if (name == "mub3") return mub(3);
  std::string why;
  auto set = io::to_state_set(io::read_operator_file(name), &why);
  if (!set) throw io::ParseError(name + ": " + why);
  return *set;
}

WeightedStateSet d3_sic_argument(const std::string& arg, std::ostream& err) {
  if (const auto phi = parse_double(arg)) return sic_d3(*phi, &err);
  return named_state_set(arg, 0.0, err);
}

int cmd_build(const Options& o, std::ostream& out, std::ostream& err) {
  const std::string& kind = o.build_kind;
  io::OperatorFile f;
  if (kind == "sic-qubit") {
    f = io::from_state_set(sic_qubit());
  } else if (kind == "sic-d3") {
    f = io::from_state_set(sic_d3(o.phi, &err));
  } else if (kind == "mub") {
    f = io::from_state_set(mub(o.mub_dim));
  } else if (kind == "collective-sic") {
    f = io::from_povm(collective_sic_qubit());
  } else if (kind == "twocopy-design") {
    if (o.from.empty()) throw InvalidArgument("twocopy-design needs --from");
    f = io::from_povm(twocopy_design_povm(named_state_set(o.from, o.phi, err), o.tol.value_or(1e-8)));
  } else {
    if (o.sic1.empty() || o.sic2.empty()) throw InvalidArgument("tight-coherent-d3 needs --sic1 and --sic2");
    f = io::from_povm(minimal_tight_coherent_d3(d3_sic_argument(o.sic1, err), d3_sic_argument(o.sic2, err)));
  }
  emit(o, io::serialize_operator_file(f), out);
  return kExitOk;
}

// --- fisher -------------------------------------------------------------------

Povm povm_from_state_set(const WeightedStateSet& set) {
  const double scale = set.dim() / set.total_weight();
  std::vector<HermitianOperator> elems;
  for (const auto& op : set.operators()) elems.push_back(scale * op);
  return make_povm(std::move(elems), 1);
}

Povm named_povm(const std::string& name) {
  if (name == "collective-sic") return collective_sic_qubit();
  if (name == "qubit-sic") return povm_from_state_set(sic_qubit());
  if (name == "qubit-mub") return povm_from_state_set(mub(2));
  if (name == "qutrit-sic") return povm_from_state_set(sic_d3());
  if (name == "qutrit-mub") return povm_from_state_set(mub(3));
  return io::to_povm(io::read_operator_file(name));
}

struct StateSpec {
  DensityMatrix rho = DensityMatrix::maximally_mixed(2);
  std::optional<PureState> pure;
  std::optional<BlochVector> bloch;
};

StateSpec parse_state(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw io::ParseError("state spec must be bloch:x,y,z, pure:re,im,... or file:path");
  const std::string tag = spec.substr(0, colon), body = spec.substr(colon + 1);
  StateSpec s;
  if (tag == "bloch") {
    const auto v = parse_number_list(body, "bloch vector");
    if (v.size() != 3) throw io::ParseError("bloch vector needs three components");
    const BlochVector b(v[0], v[1], v[2]);
    const double r = b.norm();
    if (r > 1.0 + 1e-9) throw io::ParseError("bloch vector lies outside the unit ball");
    if (std::abs(r - 1.0) <= 1e-9) {
      s.pure = pure_from_bloch(b / r);
      s.rho = s.pure->density();
    } else {
      s.bloch = b;
      s.rho = density_from_bloch(b);
    }
  } else if (tag == "pure") {
    const auto v = parse_number_list(body, "pure state");
    if (v.size() < 4 || v.size() % 2 != 0) throw io::ParseError("pure state needs re,im pairs for d >= 2");
    ComplexVector psi(static_cast<Eigen::Index>(v.size() / 2));
    for (Eigen::Index j = 0; j < psi.size(); ++j) psi(j) = Complex(v[2 * j], v[2 * j + 1]);
    if (psi.norm() == 0.0) throw io::ParseError("pure state vector is zero");
    s.pure = PureState::normalized(psi);
    s.rho = s.pure->density();
  } else if (tag == "file") {
    s.rho = io::to_density(io::read_operator_file(body));
    if (s.rho.is_pure()) s.pure = PureState::normalized(s.rho.eig().vectors.col(0));
    if (s.rho.dim() == 2 && !s.pure) s.bloch = bloch_from_density(s.rho.mat());
  } else {
    throw io::ParseError("unknown state spec \"" + tag + "\"");
  }
  return s;
}

Parametrization choose_param(const StateSpec& s, const std::string& requested, std::ostream& err) {
  if (s.pure) {
    if (!requested.empty() && requested != "pure") {
      err << "note: state is pure; using the pure-state chart instead of " << requested << "\n";
    }
    return Parametrization::pure_canonical(*s.pure);
  }
  if (requested == "pure") throw InvalidArgument("--param pure needs a pure state");
  if (requested == "bloch" || (requested.empty() && s.rho.dim() == 2)) {
    if (s.rho.dim() != 2) throw InvalidArgument("--param bloch needs a qubit state");
    return Parametrization::bloch_qubit(s.bloch ? *s.bloch : bloch_from_density(s.rho.mat()));
  }
  return Parametrization::affine_mixed(s.rho);
}

int cmd_fisher(const Options& o, std::ostream& out, std::ostream& err) {
  const Povm p = named_povm(o.povm);
  const auto pr = validate_povm(p);
  if (!pr.valid) throw InvalidArgument("--povm is not a valid POVM: " + pr.reason);
  const StateSpec s = parse_state(o.state);
  const Parametrization param = choose_param(s, o.param, err);
  GmMode mode = default_gm_mode(param, p);
  if (o.mode == "separable") {
    mode = GmMode::SingleCopySeparable;
  } else if (o.mode == "two-copy") {
    mode = GmMode::TwoCopyCollective;
  } else if (o.mode == "pure") {
    mode = GmMode::PureAnyN;
  }
  const FisherReport r = fisher_report(param, p, mode, o.tol.value_or(1e-6));
  if (r.regularity_warning) err << "warning: an outcome with vanishing probability has nonzero derivative\n";
  json j = io::to_json(r);
  j["parametrization"] = param.kind() == ParamKind::PureCanonical ? "pure" : param.kind() == ParamKind::BlochQubit ? "bloch" : "affine";
  emit(o, j.dump(2) + "\n", out);
  return r.gm.within_bound ? kExitOk : kExitCheckFailed;
}

// --- simulate / sweep -------------------------------------------------------------

json load_config_json(const std::string& path) {
  try {
    return json::parse(io::read_text(path));
  } catch (const json::parse_error& e) {
    throw io::ParseError(std::string("invalid JSON in config: ") + e.what());
  }
}

std::filesystem::path config_dir(const std::string& path) {
  return std::filesystem::absolute(path).parent_path();
}

int cmd_simulate(const Options& o, std::ostream& out) {
  const SimConfig c = io::parse_sim_config(load_config_json(o.config), config_dir(o.config), o.seed);
  const SimResult r = run_simulation(c);
  json j = io::to_json(r);
  j["config"] = {{"bloch", {c.bloch(0), c.bloch(1), c.bloch(2)}},
                 {"scheme", scheme_name(c.scheme)},
                 {"estimator", estimator_name(c.estimator)},
                 {"n_copies", c.n_copies},
                 {"n_trials", c.n_trials},
                 {"seed", c.seed}};
  if (c.bloch.norm() < 1.0 - 1e-12) {
    try {
      const auto param = Parametrization::bloch_qubit(c.bloch);
      const Povm p = scheme_povm(c);
      j["analytic_mse"] = asymptotic_metrics(param, p, WeightKind::HilbertSchmidt);
      j["analytic_msb"] = asymptotic_metrics(param, p, WeightKind::Bures);
    } catch (const NumericalError&) {
      // Not informationally complete: no finite Cramer-Rao limit.
    }
  }
  emit(o, j.dump(2) + "\n", out);
  return kExitOk;
}

int cmd_sweep(const Options& o, std::ostream& out) {
  const SweepConfig c = io::parse_sweep_config(load_config_json(o.config), config_dir(o.config), o.seed);
  const auto rows = sweep(c);
  if (!o.json_output) {
    emit(o, sweep_csv(rows), out);
    return kExitOk;
  }
  json arr = json::array();
  for (const auto& r : rows) {
    json row = {{"s", r.s}, {"scheme", r.scheme}, {"analytic_mse", r.analytic_mse}, {"analytic_msb", r.analytic_msb}};
    if (r.simulated) {
      row["scaled_mse"] = r.scaled_mse;
      row["mse_stderr"] = r.mse_stderr;
      row["scaled_msb"] = r.scaled_msb;
      row["msb_stderr"] = r.msb_stderr;
    }
    arr.push_back(std::move(row));
  }
  emit(o, arr.dump(2) + "\n", out);
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Fisher-symmetric measurement toolkit: designs, POVMs, Fisher information and tomography simulation"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--tol", o.tol, "Tolerance for the chosen check (each check has its own default)");
  app.add_option("--seed", o.seed, "Seed used when a config has no \"seed\" field");
  app.add_option("--out", o.out_path, "Write output to this file instead of standard output");
  app.add_flag("--json", o.json_output, "Emit JSON where CSV is the default (sweep)");

  auto* verify = app.add_subcommand("verify", "Check an operator file");
  verify->add_option("kind", o.verify_kind, "What to verify")
      ->required()
      ->check(CLI::IsMember({"povm", "design2", "gdesign2", "sic", "gsic", "tight-coherent", "coherent"}));
  verify->add_option("file", o.verify_file, "Operator file (JSON)")->required();

  auto* build = app.add_subcommand("build", "Write a built-in construction as an operator file");
  build->add_option("kind", o.build_kind, "What to build")
      ->required()
      ->check(CLI::IsMember({"sic-qubit", "sic-d3", "mub", "collective-sic", "twocopy-design", "tight-coherent-d3"}));
  build->add_option("--phi", o.phi, "Fiducial phase of the d=3 SIC family");
  build->add_option("--d", o.mub_dim, "MUB dimension (2 or 3)")->check(CLI::IsMember({2, 3}));
  build->add_option("--from", o.from, "2-design for twocopy-design: sic-qubit, sic-d3, mub2, mub3 or a file");
  build->add_option("--sic1", o.sic1, "Qutrit SIC for the symmetric part: a phase or a file");
  build->add_option("--sic2", o.sic2, "Qutrit SIC for the antisymmetric part: a phase or a file");

  auto* fisher = app.add_subcommand("fisher", "Fisher information, Gill-Massar value and symmetry verdict");
  fisher->add_option("--povm", o.povm, "collective-sic, qubit-sic, qubit-mub, qutrit-sic, qutrit-mub or a file")
      ->required();
  fisher->add_option("--state", o.state, "bloch:x,y,z | pure:re,im,re,im,... | file:path")->required();
  fisher->add_option("--param", o.param, "Parametrization")->check(CLI::IsMember({"bloch", "affine", "pure"}));
  fisher->add_option("--mode", o.mode, "Gill-Massar bound")->check(CLI::IsMember({"separable", "two-copy", "pure"}));

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo tomography run");
  simulate->add_option("--config", o.config, "Simulation config (JSON)")->required();
  auto* sweep_cmd = app.add_subcommand("sweep", "Scaled MSE/MSB over Bloch radii (CSV)");
  sweep_cmd->add_option("--config", o.config, "Sweep config (JSON)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (verify->parsed()) return cmd_verify(o, out);
    if (build->parsed()) return cmd_build(o, out, err);
    if (fisher->parsed()) return cmd_fisher(o, out, err);
    if (simulate->parsed()) return cmd_simulate(o, out);
    return cmd_sweep(o, out);
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"ufsym"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace ufsym::cli
