#pragma once

// JSON operator interchange format, simulation configs and report
// serialization.
//
// Operator file:
//   {"dim": d, "copies": t, "subspace": "symmetric" (optional),
//    "elements": [{"weight": w (optional), "matrix": [[[re, im], ...], ...]}]}
// Each element operator is weight * matrix (weight defaults to 1); matrices
// are d^t x d^t, row-major. Doubles are written in shortest round-trip form,
// so parse followed by serialize reproduces the bytes.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ufsym/designs.hpp"
#include "ufsym/fisher.hpp"
#include "ufsym/povm.hpp"
#include "ufsym/tomosim.hpp"

namespace ufsym::io {

/// Malformed input (syntax, schema or dimension errors).
class ParseError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

struct OperatorElement {
  std::optional<double> weight;
  ComplexMatrix matrix;

  ComplexMatrix op() const { return weight ? ComplexMatrix(*weight * matrix) : matrix; }
};

struct OperatorFile {
  int dim = 2;
  int copies = 1;
  std::optional<std::string> subspace;
  std::vector<OperatorElement> elements;
};

OperatorFile parse_operator_file(const std::string& text);
std::string serialize_operator_file(const OperatorFile& file);
OperatorFile read_operator_file(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

OperatorFile from_povm(const Povm& p);
/// Elements must be Hermitian (ParseError otherwise); validity is not checked.
Povm to_povm(const OperatorFile& file);

/// Elements as weight w and projector |psi><psi|.
OperatorFile from_state_set(const WeightedStateSet& set);
/// Each element must be rank one; returns nullopt and sets why otherwise.
std::optional<WeightedStateSet> to_state_set(const OperatorFile& file, std::string* why = nullptr);

OperatorFile from_operator_set(const OperatorSet& set);
OperatorSet to_operator_set(const OperatorFile& file);

/// Density matrix stored as a one-element, one-copy operator file.
DensityMatrix to_density(const OperatorFile& file);

// --- configs ----------------------------------------------------------------

/// seed_override replaces a missing "seed"; without either, ParseError.
SimConfig parse_sim_config(const nlohmann::json& j, const std::filesystem::path& base_dir,
                           std::optional<std::uint64_t> seed_override = std::nullopt);
SweepConfig parse_sweep_config(const nlohmann::json& j, const std::filesystem::path& base_dir,
                               std::optional<std::uint64_t> seed_override = std::nullopt);

// --- reports ------------------------------------------------------------------

nlohmann::json to_json(const RealMatrix& m);
nlohmann::json to_json(const DesignCertificate& c);
nlohmann::json to_json(const GeneralizedSicReport& r);
nlohmann::json to_json(const SicReport& r);
nlohmann::json to_json(const PovmReport& r);
nlohmann::json to_json(const CoherentClassification& c);
nlohmann::json to_json(const TightCoherentReport& r);
nlohmann::json to_json(const FisherReport& r);
nlohmann::json to_json(const SimResult& r);

}  // namespace ufsym::io
