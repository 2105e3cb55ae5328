#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "mep/autoneb.hpp"
#include "mep/chain.hpp"
#include "mep/explorer.hpp"
#include "mep/mlp.hpp"

namespace mep::io {

using Json = nlohmann::json;

/// Exact binary64 hex encoding ("%a"), e.g. 0x1.8p+0.
std::string to_hex(double value);
double from_hex(const std::string& text);

/// Provenance stamped into every artifact.
struct Stamp {
  std::uint64_t seed = 0;
  std::string config_hash;
};

/// {dim, values, hex}. Reading prefers `hex` when present.
Json params_to_json(const ParamVector& params);
ParamVector params_from_json(const Json& j);

/// {dim, pivots, pivots_hex}.
Json chain_to_json(const Chain& chain);
Chain chain_from_json(const Json& j);

Json saddle_to_json(const SaddleRecord& saddle);

Json read_json(const std::filesystem::path& path);
/// Writes `j` with two-space indentation and a trailing newline.
void write_json(const std::filesystem::path& path, const Json& j);

/// CSV with header; feature columns then one target column. Integer targets
/// become class labels for cross-entropy, real targets a one-column value
/// matrix for squared error.
Dataset load_dataset_csv(const std::filesystem::path& path, LossKind loss_kind);

/// Rows (cumulative_arc_length, alpha_global, loss, is_pivot) covering pivots
/// and dense samples in path order.
struct ProfileRow {
  double arc_length;
  double alpha_global;
  double loss;
  bool is_pivot;
};

std::vector<ProfileRow> profile_rows(const Chain& chain, const DenseProfile& profile);
void write_profile_csv(const std::filesystem::path& path, const std::vector<ProfileRow>& rows, const Stamp& stamp);

/// Diagnostic trace (iteration, max_interior_loss).
void write_trace_csv(const std::filesystem::path& path, const std::vector<double>& trace, const Stamp& stamp);

/// FNV-1a over the compact dump of `j`, as 16 hex digits.
std::string hash_json(const Json& j);

}  // namespace mep::io
