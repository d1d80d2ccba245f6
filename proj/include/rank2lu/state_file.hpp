#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "rank2lu/engine.hpp"
#include "rank2lu/lab.hpp"

namespace rank2lu::io {

using Json = nlohmann::json;

/// Contents of a state file: either the decomposition form
///   {"m", "n", "lambda", "A": {"re", "im"}, "B": {"re", "im"}}
/// or the raw form {"m", "n", "rho": {"re", "im"}}.
struct StateInput {
  BipartiteShape shape;
  std::optional<RankTwoState> decomposed;
  std::optional<DensityMatrix> raw;

  bool is_raw() const { return raw.has_value(); }
  /// Raw inputs go through decompose (and its degenerate-spectrum refusal).
  RankTwoState rank_two(const ToleranceConfig& cfg) const;
  DensityMatrix density() const;
};

Json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const Json& j, int rows, int cols, const char* name);

StateInput state_from_json(const Json& j, const ToleranceConfig& cfg = {});
StateInput read_state_file(const std::string& path, const ToleranceConfig& cfg = {});

Json state_to_json(const RankTwoState& s);
Json density_to_json(const DensityMatrix& rho);
void write_json_file(const std::string& path, const Json& j);

Json fingerprint_to_json(const Fingerprint& f);
Json canonical_to_json(const CanonicalForm& c);
Json lu_witness_to_json(const LUWitness& w);
Json slocc_witness_to_json(const SloccWitness& w);
Json verdict_to_json(const Verdict& v);

}  // namespace rank2lu::io
