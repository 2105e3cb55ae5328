#include "mep/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "mep/autoneb.hpp"
#include "mep/config.hpp"
#include "mep/error.hpp"
#include "mep/explorer.hpp"
#include "mep/io.hpp"
#include "mep/parallel.hpp"
#include "mep/train.hpp"

namespace mep::cli {

namespace fs = std::filesystem;
using io::Json;

namespace {

struct Context {
  ExperimentConfig cfg;
  io::Stamp stamp;
};

Context load(const Options& opts) {
  if (opts.config.empty()) throw Error(ErrorKind::InvalidArgument, "--config is required");
  if (!fs::exists(opts.config)) throw Error(ErrorKind::Io, "config not found: " + opts.config.string());
  Context ctx{load_config(opts.config), {}};
  if (opts.seed) {
    ctx.cfg.seed = *opts.seed;
    ctx.cfg.train.seed = *opts.seed;
    ctx.cfg.explore.seed = *opts.seed;
  }
  ctx.cfg.schedule.workers = std::max<std::size_t>(1, opts.workers);
  ctx.stamp = {ctx.cfg.seed, ctx.cfg.hash};
  return ctx;
}

Json stamped(Json j, const io::Stamp& stamp) {
  j["seed"] = stamp.seed;
  j["config_hash"] = stamp.config_hash;
  return j;
}

/// SplitMix64 finaliser; spreads consecutive indices over the seed space.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

ParamVector read_minimum(const fs::path& path) {
  const Json j = io::read_json(path);
  return io::params_from_json(j.contains("params") ? j.at("params") : j);
}

std::string minimum_name(std::size_t k) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "minimum_%03zu.json", k);
  return buf;
}

void check_dim(const ParamVector& p, const Landscape& landscape, const fs::path& source) {
  if (static_cast<std::size_t>(p.size()) != landscape.dim()) {
    throw Error(ErrorKind::DimensionMismatch, source.string() + " has " + std::to_string(p.size()) +
                                                  " parameters, landscape expects " + std::to_string(landscape.dim()));
  }
}

}  // namespace

int cmd_train(const Options& opts, std::size_t count) {
  const auto ctx = load(opts);
  const auto& landscape = *ctx.cfg.landscape;
  Json manifest = stamped(Json{{"count", count}, {"minima", Json::array()}}, ctx.stamp);
  int status = kOk;
  for (std::size_t k = 0; k < count; ++k) {
    const auto point_seed = mix_seed(ctx.cfg.seed, k);
    try {
      const ParamVector init = ctx.cfg.initial_point(point_seed);
      const ParamVector minimum = train_minimum(landscape, init, ctx.cfg.train);
      const double loss = landscape.loss(minimum);
      const auto name = minimum_name(k);
      io::write_json(opts.out / name, stamped(Json{{"index", k},
                                                   {"init_seed", point_seed},
                                                   {"loss", loss},
                                                   {"loss_hex", io::to_hex(loss)},
                                                   {"params", io::params_to_json(minimum)}},
                                              ctx.stamp));
      manifest["minima"].push_back({{"file", name}, {"loss", loss}});
      std::cout << name << "  loss " << loss << '\n';
    } catch (const Error& e) {
      if (!e.is_numerical()) throw;
      std::cerr << "minimum " << k << ": " << e.what() << '\n';
      status = kNumerical;
      break;
    }
  }
  io::write_json(opts.out / "manifest.json", manifest);
  return status;
}

int cmd_connect(const Options& opts, const fs::path& min_a, const fs::path& min_b) {
  const auto ctx = load(opts);
  const auto& landscape = *ctx.cfg.landscape;
  const ParamVector a = read_minimum(min_a);
  const ParamVector b = read_minimum(min_b);
  check_dim(a, landscape, min_a);
  check_dim(b, landscape, min_b);

  const auto result = auto_neb(a, b, landscape, ctx.cfg.schedule);
  const double straight = (b - a).norm();
  const double ratio = straight > 0.0 ? total_length(result.chain) / straight : 1.0;

  io::write_json(opts.out / "chain.json", stamped(io::chain_to_json(result.chain), ctx.stamp));
  io::write_profile_csv(opts.out / "profile.csv", io::profile_rows(result.chain, result.profile), ctx.stamp);
  io::write_json(opts.out / "saddle.json", stamped(io::saddle_to_json(result.saddle), ctx.stamp));
  Json cycles = Json::array();
  for (const auto& c : result.cycles) {
    cycles.push_back({{"pivots", c.pivots_before}, {"inserted", c.inserted}, {"max_dense_loss", c.max_dense_loss}});
  }
  io::write_json(opts.out / "report.json", stamped(Json{{"saddle_loss", result.saddle.loss},
                                                        {"min_loss_a", landscape.loss(a)},
                                                        {"min_loss_b", landscape.loss(b)},
                                                        {"path_length_ratio", ratio},
                                                        {"pivots", result.chain.size()},
                                                        {"cycles", cycles}},
                                                   ctx.stamp));
  std::cout << "saddle loss " << result.saddle.loss << " (" << to_string(result.saddle.source) << "), "
            << result.chain.size() << " pivots, path length ratio " << ratio << '\n';
  return kOk;
}

int cmd_explore(const Options& opts, const fs::path& minima_dir) {
  const auto ctx = load(opts);
  const auto& landscape = *ctx.cfg.landscape;

  std::vector<fs::path> files;
  if (fs::exists(minima_dir / "manifest.json")) {
    const Json manifest = io::read_json(minima_dir / "manifest.json");
    for (const auto& m : manifest.at("minima")) {
      files.push_back(minima_dir / m.at("file").get<std::string>());
    }
  } else if (fs::is_directory(minima_dir)) {
    for (const auto& entry : fs::directory_iterator(minima_dir)) {
      const auto name = entry.path().filename().string();
      if (name.rfind("minimum_", 0) == 0 && entry.path().extension() == ".json") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
  }
  if (files.size() < 2) throw Error(ErrorKind::InvalidArgument, "explore needs at least two minima in " + minima_dir.string());

  std::vector<ParamVector> minima;
  for (const auto& f : files) {
    minima.push_back(read_minimum(f));
    check_dim(minima.back(), landscape, f);
  }
  ExploreConfig ecfg = ctx.cfg.explore;
  if (ecfg.budget == 0) ecfg.budget = minima.size() * (minima.size() - 1) / 2;

  const auto result = explore(minima, landscape, ctx.cfg.schedule, ecfg);
  const auto& g = result.graph;

  Json nodes = Json::array();
  for (const auto& n : g.nodes()) {
    nodes.push_back({{"id", n.id}, {"min_loss", n.min_loss}, {"params_file", fs::absolute(files[n.id]).string()}});
  }
  Json edges = Json::array();
  for (const auto& e : g.edges()) {
    const std::string chain_file = "chains/edge_" + std::to_string(e.id) + ".json";
    if (e.chain) io::write_json(opts.out / chain_file, stamped(io::chain_to_json(*e.chain), ctx.stamp));
    edges.push_back({{"id", e.id}, {"u", e.u}, {"v", e.v}, {"saddle_loss", e.saddle_loss}, {"chain_file", chain_file}});
  }
  Json history = Json::array();
  for (const auto& h : result.history) history.push_back({{"runs", h.runs}, {"mst_max_saddle", h.mst_max_saddle}});
  io::write_json(opts.out / "graph.json", stamped(Json{{"nodes", nodes},
                                                       {"edges", edges},
                                                       {"mst", result.mst},
                                                       {"runs", result.runs},
                                                       {"history", history}},
                                                  ctx.stamp));

  std::cout << "MST saddles (" << result.runs << " AutoNEB runs)\n";
  std::printf("%6s %6s %6s %14s\n", "edge", "u", "v", "saddle_loss");
  for (auto id : result.mst) {
    const auto& e = g.edge(id);
    std::printf("%6zu %6zu %6zu %14.8g\n", e.id, e.u, e.v, e.saddle_loss);
  }
  std::fflush(stdout);
  return kOk;
}

int cmd_eval_path(const Options& opts, const fs::path& chain_file, std::size_t m) {
  if (m == 0) throw Error(ErrorKind::InvalidArgument, "-m must be >= 1");
  const auto ctx = load(opts);
  const auto& landscape = *ctx.cfg.landscape;
  const Chain chain = io::chain_from_json(io::read_json(chain_file));
  if (chain.dim() != landscape.dim()) throw Error(ErrorKind::DimensionMismatch, "chain and landscape differ in dimension");

  const auto workers = std::max<std::size_t>(1, opts.workers);
  const auto profile = evaluate_dense(chain, landscape, m, workers);
  // Same number of pivots, equally spaced on the chord, so both profiles share sample positions.
  const Chain straight = Chain::straight(chain.front(), chain.back(), chain.interior_count());
  const auto straight_profile = evaluate_dense(straight, landscape, m, workers);

  io::write_profile_csv(opts.out / "chain_profile.csv", io::profile_rows(chain, profile), ctx.stamp);
  io::write_profile_csv(opts.out / "straight_profile.csv", io::profile_rows(straight, straight_profile), ctx.stamp);
  std::cout << "chain max loss " << profile.max_loss() << ", straight segment max loss " << straight_profile.max_loss()
            << '\n';
  return kOk;
}

int run(int argc, char** argv) {
  CLI::App app{"Minimum energy paths between minima of loss landscapes"};
  app.require_subcommand(1);

  Options opts;
  opts.workers = default_workers();
  std::uint64_t seed = 0;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opts.config, "Experiment config (JSON)")->required();
    sub->add_option("--seed", seed, "Override the config seed");
    sub->add_option("--out", opts.out, "Output directory");
    sub->add_option("--workers", opts.workers, "Evaluation threads")->check(CLI::PositiveNumber);
  };

  std::size_t count = 1;
  auto* train = app.add_subcommand("train", "Train minima from seeded initialisations");
  add_common(train);
  train->add_option("--count", count, "Number of minima");

  fs::path min_a, min_b;
  auto* connect = app.add_subcommand("connect", "Connect two minima with AutoNEB");
  add_common(connect);
  connect->add_option("min_a", min_a, "First minimum (params JSON)")->required();
  connect->add_option("min_b", min_b, "Second minimum (params JSON)")->required();

  fs::path minima_dir;
  auto* explore_cmd = app.add_subcommand("explore", "Build the minimum spanning tree of saddles over a set of minima");
  add_common(explore_cmd);
  explore_cmd->add_option("minima_dir", minima_dir, "Directory with minimum_*.json files")->required();

  fs::path chain_file;
  std::size_t m = 9;
  auto* eval = app.add_subcommand("eval-path", "Dense loss profile of a stored chain and of the straight segment");
  add_common(eval);
  eval->add_option("chain", chain_file, "Chain JSON")->required();
  eval->add_option("-m,--dense", m, "Samples between neighbouring pivots");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  for (auto* sub : {train, connect, explore_cmd, eval}) {
    if (sub->parsed() && sub->count("--seed") > 0) opts.seed = seed;
  }

  try {
    if (train->parsed()) return cmd_train(opts, count);
    if (connect->parsed()) return cmd_connect(opts, min_a, min_b);
    if (explore_cmd->parsed()) return cmd_explore(opts, minima_dir);
    if (eval->parsed()) return cmd_eval_path(opts, chain_file, m);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.is_numerical() ? kNumerical : kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace mep::cli
