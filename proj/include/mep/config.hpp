#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mep/autoneb.hpp"
#include "mep/explorer.hpp"
#include "mep/landscape.hpp"
#include "mep/mlp.hpp"
#include "mep/train.hpp"

namespace mep {

/// Everything a CLI run needs, loaded from one JSON file.
///
///   {
///     "landscape": {"kind": "double_well"}
///              | {"kind": "gaussian_wells", "offset": 3, "wells": [{"center": [x, y], "depth": d, "width": w}]}
///              | {"kind": "mlp", "layers": [2, 3, 1], "activation": "tanh",
///                 "loss": "squared_error", "dataset": "xor.csv"},
///     "train":    {"learning_rate", "momentum", "weight_decay", "steps",
///                  "init_box": [[lo, hi], ...]},            // analytic only
///     "autoneb":  {"cycles": [[steps, lr], ...], "insert_threshold", "dense_count",
///                  "insert_cap", "initial_pivots", "momentum", "weight_decay", "spring_constant"},
///     "explore":  {"budget", "stop_ratio"},
///     "seed": 1
///   }
///
/// Relative dataset paths resolve against the config file's directory.
struct ExperimentConfig {
  nlohmann::json raw;
  std::string hash;
  LandscapePtr landscape;
  std::optional<MlpSpec> mlp;
  TrainConfig train;
  std::vector<std::array<double, 2>> init_box;
  AutoNebSchedule schedule;
  ExploreConfig explore;
  std::uint64_t seed = 0;

  /// Seeded initial point: MLP initialisation or uniform in init_box.
  ParamVector initial_point(std::uint64_t seed) const;
};

ExperimentConfig load_config(const std::filesystem::path& path);
ExperimentConfig parse_config(const nlohmann::json& j, const std::filesystem::path& base_dir);

}  // namespace mep
