#include "ufsym/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace ufsym::io {

using nlohmann::json;

namespace {

int ipow(int base, int e) {
  int r = 1;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

const json& require(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

double as_number(const json& j, const char* what) {
  if (!j.is_number()) throw ParseError(std::string(what) + " must be a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) throw ParseError(std::string(what) + " must be finite");
  return x;
}

int as_int(const json& j, const char* what) {
  if (!j.is_number_integer()) throw ParseError(std::string(what) + " must be an integer");
  return j.get<int>();
}

ComplexMatrix parse_matrix(const json& j, int n) {
  if (!j.is_array() || static_cast<int>(j.size()) != n) {
    throw ParseError("matrix must have " + std::to_string(n) + " rows");
  }
  ComplexMatrix m(n, n);
  for (int r = 0; r < n; ++r) {
    const json& row = j[static_cast<size_t>(r)];
    if (!row.is_array() || static_cast<int>(row.size()) != n) {
      throw ParseError("matrix row " + std::to_string(r) + " must have " + std::to_string(n) + " entries");
    }
    for (int c = 0; c < n; ++c) {
      const json& z = row[static_cast<size_t>(c)];
      if (!z.is_array() || z.size() != 2) throw ParseError("matrix entries must be [re, im] pairs");
      m(r, c) = Complex(as_number(z[0], "matrix entry"), as_number(z[1], "matrix entry"));
    }
  }
  return m;
}

json matrix_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

HermitianOperator checked_hermitian(const ComplexMatrix& m) {
  try {
    return HermitianOperator(m);
  } catch (const InvalidArgument& e) {
    throw ParseError(e.what());
  }
}

}  // namespace

// --- operator files ---------------------------------------------------------------

OperatorFile parse_operator_file(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("operator file must be a JSON object");
  OperatorFile f;
  f.dim = as_int(require(j, "dim"), "dim");
  f.copies = as_int(require(j, "copies"), "copies");
  if (f.dim < 1) throw ParseError("dim must be positive");
  if (f.copies != 1 && f.copies != 2) throw ParseError("copies must be 1 or 2");
  if (j.contains("subspace")) {
    if (!j["subspace"].is_string()) throw ParseError("subspace must be a string");
    f.subspace = j["subspace"].get<std::string>();
    if (*f.subspace != "symmetric" && *f.subspace != "full") throw ParseError("subspace must be \"symmetric\" or \"full\"");
  }
  const json& elems = require(j, "elements");
  if (!elems.is_array() || elems.empty()) throw ParseError("elements must be a nonempty array");
  const int n = ipow(f.dim, f.copies);
  for (const auto& e : elems) {
    OperatorElement el;
    if (e.contains("weight")) el.weight = as_number(e["weight"], "weight");
    el.matrix = parse_matrix(require(e, "matrix"), n);
    f.elements.push_back(std::move(el));
  }
  return f;
}

std::string serialize_operator_file(const OperatorFile& file) {
  json j;
  j["dim"] = file.dim;
  j["copies"] = file.copies;
  if (file.subspace) j["subspace"] = *file.subspace;
  json elems = json::array();
  for (const auto& e : file.elements) {
    json el;
    if (e.weight) el["weight"] = *e.weight;
    el["matrix"] = matrix_json(e.matrix);
    elems.push_back(std::move(el));
  }
  j["elements"] = std::move(elems);
  return j.dump() + "\n";
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot write " + path.string());
  out << text;
}

OperatorFile read_operator_file(const std::filesystem::path& path) { return parse_operator_file(read_text(path)); }

OperatorFile from_povm(const Povm& p) {
  OperatorFile f;
  f.dim = p.base_dim;
  f.copies = p.copies;
  if (p.subspace == Subspace::Symmetric) f.subspace = "symmetric";
  for (const auto& e : p.elements) f.elements.push_back({std::nullopt, e.mat()});
  return f;
}

Povm to_povm(const OperatorFile& file) {
  Povm p;
  p.base_dim = file.dim;
  p.copies = file.copies;
  p.subspace = file.subspace && *file.subspace == "symmetric" ? Subspace::Symmetric : Subspace::Full;
  if (p.subspace == Subspace::Symmetric && p.copies != 2) throw ParseError("symmetric subspace needs copies = 2");
  for (const auto& e : file.elements) p.elements.push_back(checked_hermitian(e.op()));
  return p;
}

OperatorFile from_state_set(const WeightedStateSet& set) {
  set.validate();
  OperatorFile f;
  f.dim = set.dim();
  f.copies = 1;
  for (size_t i = 0; i < set.states.size(); ++i) f.elements.push_back({set.weights[i], set.states[i].projector()});
  return f;
}

std::optional<WeightedStateSet> to_state_set(const OperatorFile& file, std::string* why) {
  if (file.copies != 1) throw ParseError("state sets are single-copy files");
  WeightedStateSet set;
  for (size_t i = 0; i < file.elements.size(); ++i) {
    const HermitianOperator op = checked_hermitian(file.elements[i].op());
    const auto eig = hermitian_eig(op);
    const double scale = std::max(op.norm(), 1e-300);
    const bool psd = eig.values(eig.values.size() - 1) >= -tol::kPsd * scale;
    if (!psd || numerical_rank(op) != 1) {
      if (why) *why = "element " + std::to_string(i) + " is not a positive rank-one operator";
      return std::nullopt;
    }
    set.states.push_back(PureState::normalized(eig.vectors.col(0)));
    set.weights.push_back(op.trace());
  }
  return set;
}

OperatorFile from_operator_set(const OperatorSet& set) {
  OperatorFile f;
  f.dim = set.dim();
  f.copies = 1;
  for (const auto& op : set.ops) f.elements.push_back({std::nullopt, op.mat()});
  return f;
}

OperatorSet to_operator_set(const OperatorFile& file) {
  if (file.copies != 1) throw ParseError("operator sets are single-copy files");
  OperatorSet set;
  for (const auto& e : file.elements) set.ops.push_back(checked_hermitian(e.op()));
  return set;
}

DensityMatrix to_density(const OperatorFile& file) {
  if (file.copies != 1 || file.elements.size() != 1) throw ParseError("a state file holds one single-copy matrix");
  try {
    return DensityMatrix(file.elements.front().op());
  } catch (const InvalidArgument& e) {
    throw ParseError(e.what());
  }
}

// --- configs ----------------------------------------------------------------

namespace {

Scheme parse_scheme(const std::string& s) {
  if (s == "collective-sic") return Scheme::CollectiveSic;
  if (s == "sic") return Scheme::SicSingle;
  if (s == "mub") return Scheme::MubSingle;
  if (s == "custom") return Scheme::Custom;
  throw ParseError("unknown scheme \"" + s + "\" (collective-sic, sic, mub, custom)");
}

BlochVector parse_bloch(const json& j) {
  if (!j.is_array() || j.size() != 3) throw ParseError("bloch must be an array of three numbers");
  return BlochVector(as_number(j[0], "bloch"), as_number(j[1], "bloch"), as_number(j[2], "bloch"));
}

}  // namespace

SimConfig parse_sim_config(const json& j, const std::filesystem::path& base_dir,
                           std::optional<std::uint64_t> seed_override) {
  if (!j.is_object()) throw ParseError("config must be a JSON object");
  SimConfig c;
  if (j.contains("bloch")) c.bloch = parse_bloch(j["bloch"]);
  if (j.contains("scheme")) {
    if (!j["scheme"].is_string()) throw ParseError("scheme must be a string");
    c.scheme = parse_scheme(j["scheme"].get<std::string>());
  }
  if (c.scheme == Scheme::Custom) {
    const json& path = require(j, "povm");
    if (!path.is_string()) throw ParseError("povm must be a file path");
    std::filesystem::path p = path.get<std::string>();
    if (p.is_relative()) p = base_dir / p;
    c.custom_povm = to_povm(read_operator_file(p));
  }
  if (j.contains("estimator")) {
    const json& e = j["estimator"];
    if (!e.is_string()) throw ParseError("estimator must be a string");
    const std::string name = e.get<std::string>();
    if (name == "mle") {
      c.estimator = Estimator::Mle;
    } else if (name == "linear") {
      c.estimator = Estimator::Linear;
    } else {
      throw ParseError("unknown estimator \"" + name + "\" (mle, linear)");
    }
  }
  if (j.contains("n_copies")) {
    if (!j["n_copies"].is_number_integer()) throw ParseError("n_copies must be an integer");
    c.n_copies = j["n_copies"].get<std::int64_t>();
  }
  if (j.contains("n_trials")) c.n_trials = as_int(j["n_trials"], "n_trials");
  if (j.contains("interior_clip")) c.interior_clip = as_number(j["interior_clip"], "interior_clip");
  if (j.contains("seed")) {
    const json& s = j["seed"];
    if (s.is_number_unsigned()) {
      c.seed = s.get<std::uint64_t>();
    } else if (s.is_number_integer() && s.get<std::int64_t>() >= 0) {
      c.seed = static_cast<std::uint64_t>(s.get<std::int64_t>());
    } else {
      throw ParseError("seed must be a nonnegative integer");
    }
  } else if (seed_override) {
    c.seed = *seed_override;
  } else {
    throw ParseError("missing field \"seed\"");
  }
  try {
    validate_config(c);
  } catch (const ParseError&) {
    throw;
  } catch (const InvalidArgument& e) {
    throw ParseError(e.what());
  }
  return c;
}

SweepConfig parse_sweep_config(const json& j, const std::filesystem::path& base_dir,
                               std::optional<std::uint64_t> seed_override) {
  SweepConfig s;
  s.base = parse_sim_config(j, base_dir, seed_override);
  if (j.contains("radii")) {
    const json& r = j["radii"];
    if (!r.is_array() || r.empty()) throw ParseError("radii must be a nonempty array");
    for (const auto& x : r) s.radii.push_back(as_number(x, "radius"));
  } else {
    const double s_max = as_number(require(j, "s_max"), "s_max");
    const int points = as_int(require(j, "points"), "points");
    if (points < 1) throw ParseError("points must be positive");
    for (int i = 0; i < points; ++i) s.radii.push_back(points == 1 ? 0.0 : s_max * i / (points - 1));
  }
  for (double r : s.radii) {
    if (!(r >= 0.0 && r < 1.0)) throw ParseError("radii must lie in [0, 1)");
  }
  if (j.contains("analytic_only")) {
    if (!j["analytic_only"].is_boolean()) throw ParseError("analytic_only must be a boolean");
    s.analytic_only = j["analytic_only"].get<bool>();
  }
  return s;
}

// --- reports ------------------------------------------------------------------

json to_json(const RealMatrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

json to_json(const DesignCertificate& c) {
  return {{"is_design", c.is_design},
          {"frame_potential", c.frame_potential},
          {"bound", c.bound},
          {"slack", c.slack},
          {"purity", c.purity},
          {"moment_residual", c.moment_residual}};
}

json to_json(const GeneralizedSicReport& r) {
  return {{"is_gsic", r.is_gsic},         {"alpha", r.alpha},
          {"beta", r.beta},               {"purity", r.purity},
          {"alpha_expected", r.alpha_expected}, {"beta_expected", r.beta_expected},
          {"gram_residual", r.gram_residual},   {"trace_residual", r.trace_residual},
          {"sum_residual", r.sum_residual}};
}

json to_json(const SicReport& r) {
  return {{"is_sic", r.is_sic},
          {"max_overlap_deviation", r.max_overlap_deviation},
          {"completeness_residual", r.completeness_residual}};
}

json to_json(const PovmReport& r) {
  json j = {{"valid", r.valid},
            {"dims_ok", r.dims_ok},
            {"max_psd_violation", r.max_psd_violation},
            {"completeness_residual", r.completeness_residual}};
  if (!r.reason.empty()) j["reason"] = r.reason;
  return j;
}

json to_json(const CoherentClassification& c) {
  json labels = json::array();
  for (const auto& e : c.elements) labels.push_back(e.zero ? "Zero" : label_name(e.label));
  return {{"coherent", c.coherent()},
          {"labels", labels},
          {"sym_power", c.count(CoherentLabel::SymPower)},
          {"slater", c.count(CoherentLabel::Slater)},
          {"neither", c.count(CoherentLabel::Neither)}};
}

json to_json(const TightCoherentReport& r) {
  json j = {{"pass", r.pass},
            {"povm", to_json(r.povm)},
            {"coherent", r.coherent},
            {"q_design", to_json(r.q_design)},
            {"purity", r.q_design.purity},
            {"target_purity", r.target_purity},
            {"purity_error", r.purity_error}};
  if (r.q_plus) j["q_plus"] = to_json(*r.q_plus);
  if (r.q_minus) j["q_minus"] = to_json(*r.q_minus);
  if (r.q_minus_gsic) j["q_minus_gsic"] = to_json(*r.q_minus_gsic);
  return j;
}

json to_json(const FisherReport& r) {
  json dropped = json::array();
  for (const auto& d : r.dropped) {
    dropped.push_back({{"index", d.index}, {"probability", d.probability}, {"max_abs_derivative", d.max_abs_derivative}});
  }
  json probs = json::array();
  for (Eigen::Index i = 0; i < r.probs.size(); ++i) probs.push_back(r.probs(i));
  return {{"I", to_json(r.I)},
          {"J", to_json(r.J)},
          {"probabilities", probs},
          {"mode", gm_mode_name(r.mode)},
          {"gm", r.gm.gm},
          {"gm_bound", r.gm.bound},
          {"within_bound", r.gm.within_bound},
          {"equality", r.gm.equality},
          {"structure_holds", r.gm.structure_holds},
          {"symmetry",
           {{"verdict", symmetry_name(r.symmetry.kind)},
            {"fitted_scale", r.symmetry.fitted_scale},
            {"weak_residual", r.symmetry.weak_residual},
            {"target_scale", r.symmetry.target_scale},
            {"full_residual", r.symmetry.full_residual}}},
          {"dropped_outcomes", dropped},
          {"regularity_warning", r.regularity_warning}};
}

json to_json(const SimResult& r) {
  return {{"scaled_mse", r.scaled_mse},
          {"mse_stderr", r.mse_stderr},
          {"scaled_msb", r.scaled_msb},
          {"msb_stderr", r.msb_stderr},
          {"scaled_infidelity", r.scaled_infidelity},
          {"infidelity_stderr", r.infidelity_stderr},
          {"n_trials", r.n_trials},
          {"n_copies", r.n_copies},
          {"shots_per_trial", r.shots},
          {"boundary_trials", r.boundary_trials},
          {"mean_estimate", {r.mean_estimate(0), r.mean_estimate(1), r.mean_estimate(2)}},
          {"counts_histogram", r.counts_histogram}};
}

}  // namespace ufsym::io
