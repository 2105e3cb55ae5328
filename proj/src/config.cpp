#include "mep/config.hpp"

#include <random>

#include "mep/error.hpp"
#include "mep/io.hpp"

namespace mep {

namespace {

using Json = nlohmann::json;

template <typename T>
T get_or(const Json& j, const char* key, T fallback) {
  return j.contains(key) ? j.at(key).get<T>() : fallback;
}

Activation parse_activation(const std::string& s) {
  if (s == "tanh") return Activation::Tanh;
  if (s == "relu") return Activation::ReLU;
  throw Error(ErrorKind::InvalidArgument, "unknown activation '" + s + "'");
}

LossKind parse_loss(const std::string& s) {
  if (s == "cross_entropy") return LossKind::CrossEntropy;
  if (s == "squared_error") return LossKind::SquaredError;
  throw Error(ErrorKind::InvalidArgument, "unknown loss '" + s + "'");
}

Dataset load_dataset(const Json& j, LossKind loss, const std::filesystem::path& base_dir) {
  if (j.is_string()) {
    std::filesystem::path p = j.get<std::string>();
    if (p.is_relative()) p = base_dir / p;
    if (!std::filesystem::exists(p)) throw Error(ErrorKind::Io, "dataset file not found: " + p.string());
    return io::load_dataset_csv(p, loss);
  }
  const auto gen = j.at("generator").get<std::string>();
  if (gen == "xor") return make_xor_dataset();
  if (gen == "two_clusters") {
    return make_two_clusters(j.at("n").get<std::size_t>(), get_or(j, "spread", 0.5), get_or<std::uint64_t>(j, "seed", 0));
  }
  throw Error(ErrorKind::InvalidArgument, "unknown dataset generator '" + gen + "'");
}

}  // namespace

ParamVector ExperimentConfig::initial_point(std::uint64_t point_seed) const {
  if (mlp) return init_mlp_params(*mlp, point_seed);
  std::mt19937_64 rng(point_seed);
  ParamVector p(static_cast<Eigen::Index>(landscape->dim()));
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    const auto box = static_cast<std::size_t>(i) < init_box.size() ? init_box[static_cast<std::size_t>(i)]
                                                                    : std::array<double, 2>{-2.0, 2.0};
    std::uniform_real_distribution<double> u(box[0], box[1]);
    p[i] = u(rng);
  }
  return p;
}

ExperimentConfig parse_config(const Json& j, const std::filesystem::path& base_dir) {
  ExperimentConfig cfg;
  cfg.raw = j;
  cfg.hash = io::hash_json(j);
  try {
    cfg.seed = get_or<std::uint64_t>(j, "seed", 0);

    const Json& land = j.at("landscape");
    const auto kind = land.at("kind").get<std::string>();
    if (kind == "double_well") {
      cfg.landscape = make_double_well();
    } else if (kind == "bowl") {
      cfg.landscape = make_bowl();
    } else if (kind == "gaussian_wells") {
      if (land.contains("random_seed")) {
        cfg.landscape = make_random_gaussian_wells(land.at("random_seed").get<std::uint64_t>(), land.at("count").get<int>());
      } else {
        std::vector<GaussianWell> wells;
        for (const auto& w : land.at("wells")) {
          GaussianWell g;
          g.center = {w.at("center")[0].get<double>(), w.at("center")[1].get<double>()};
          g.depth = w.at("depth").get<double>();
          g.width = w.at("width").get<double>();
          wells.push_back(g);
        }
        cfg.landscape = make_gaussian_wells(std::move(wells), get_or(land, "offset", 0.0), get_or(land, "confinement", 0.0));
      }
    } else if (kind == "mlp") {
      MlpSpec spec;
      spec.layer_sizes = land.at("layers").get<std::vector<std::size_t>>();
      spec.activation = parse_activation(get_or<std::string>(land, "activation", "tanh"));
      spec.loss_kind = parse_loss(get_or<std::string>(land, "loss", "squared_error"));
      spec.validate();
      cfg.mlp = spec;
      cfg.landscape = make_mlp(spec, load_dataset(land.at("dataset"), spec.loss_kind, base_dir));
    } else {
      throw Error(ErrorKind::InvalidArgument, "unknown landscape kind '" + kind + "'");
    }

    if (j.contains("train")) {
      const Json& t = j.at("train");
      cfg.train.learning_rate = get_or(t, "learning_rate", cfg.train.learning_rate);
      cfg.train.momentum = get_or(t, "momentum", cfg.train.momentum);
      cfg.train.weight_decay = get_or(t, "weight_decay", cfg.train.weight_decay);
      cfg.train.steps = get_or(t, "steps", cfg.train.steps);
      if (t.contains("init_box")) cfg.init_box = t.at("init_box").get<std::vector<std::array<double, 2>>>();
    }
    cfg.train.seed = cfg.seed;
    cfg.train.validate();

    cfg.schedule = AutoNebSchedule::standard();
    if (j.contains("autoneb")) {
      const Json& a = j.at("autoneb");
      if (a.contains("cycles")) {
        cfg.schedule.cycles.clear();
        for (const auto& c : a.at("cycles")) {
          if (c.is_array()) {
            cfg.schedule.cycles.push_back({c.at(0).get<std::size_t>(), c.at(1).get<double>()});
          } else {
            const auto repeat = get_or<std::size_t>(c, "repeat", 1);
            for (std::size_t r = 0; r < repeat; ++r) {
              cfg.schedule.cycles.push_back({c.at("steps").get<std::size_t>(), c.at("learning_rate").get<double>()});
            }
          }
        }
      }
      cfg.schedule.insert_threshold = get_or(a, "insert_threshold", cfg.schedule.insert_threshold);
      cfg.schedule.dense_count = get_or(a, "dense_count", cfg.schedule.dense_count);
      cfg.schedule.insert_cap = get_or(a, "insert_cap", cfg.schedule.insert_cap);
      cfg.schedule.initial_pivots = get_or(a, "initial_pivots", cfg.schedule.initial_pivots);
      cfg.schedule.momentum = get_or(a, "momentum", cfg.schedule.momentum);
      cfg.schedule.weight_decay = get_or(a, "weight_decay", cfg.schedule.weight_decay);
      cfg.schedule.spring_constant = get_or(a, "spring_constant", cfg.schedule.spring_constant);
    }
    cfg.schedule.validate();

    if (j.contains("explore")) {
      const Json& e = j.at("explore");
      cfg.explore.budget = get_or<std::size_t>(e, "budget", 0);
      cfg.explore.stop_ratio = get_or(e, "stop_ratio", cfg.explore.stop_ratio);
    }
    cfg.explore.seed = cfg.seed;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::InvalidArgument, std::string("config: ") + e.what());
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  return parse_config(io::read_json(path), path.parent_path());
}

}  // namespace mep
