#include "mep/io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "mep/error.hpp"

namespace mep::io {

std::string to_hex(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", value);
  return buf;
}

double from_hex(const std::string& text) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end == text.c_str() || *end != '\0' || errno == ERANGE) {
    throw Error(ErrorKind::Io, "cannot parse binary64 hex value '" + text + "'");
  }
  return v;
}

namespace {

Json vector_values(const ParamVector& v) {
  Json arr = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

Json vector_hex(const ParamVector& v) {
  Json arr = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(to_hex(v[i]));
  return arr;
}

ParamVector vector_from(const Json& values, const Json* hex) {
  const Json& src = hex ? *hex : values;
  ParamVector v(static_cast<Eigen::Index>(src.size()));
  for (std::size_t i = 0; i < src.size(); ++i) {
    v[static_cast<Eigen::Index>(i)] = hex ? from_hex(src[i].get<std::string>()) : src[i].get<double>();
  }
  return v;
}

}  // namespace

Json params_to_json(const ParamVector& params) {
  return Json{{"dim", params.size()}, {"values", vector_values(params)}, {"hex", vector_hex(params)}};
}

ParamVector params_from_json(const Json& j) {
  try {
    const Json* hex = j.contains("hex") ? &j.at("hex") : nullptr;
    ParamVector v = vector_from(j.at("values"), hex);
    if (j.contains("dim") && j.at("dim").get<std::size_t>() != static_cast<std::size_t>(v.size())) {
      throw Error(ErrorKind::DimensionMismatch, "params 'dim' does not match the stored values");
    }
    return v;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Io, std::string("malformed params JSON: ") + e.what());
  }
}

Json chain_to_json(const Chain& chain) {
  Json pivots = Json::array();
  Json hex = Json::array();
  for (const auto& p : chain.pivots()) {
    pivots.push_back(vector_values(p));
    hex.push_back(vector_hex(p));
  }
  return Json{{"dim", chain.dim()}, {"pivots", pivots}, {"pivots_hex", hex}};
}

Chain chain_from_json(const Json& j) {
  try {
    const Json& pivots = j.at("pivots");
    const bool has_hex = j.contains("pivots_hex");
    std::vector<ParamVector> out;
    for (std::size_t i = 0; i < pivots.size(); ++i) {
      out.push_back(vector_from(pivots[i], has_hex ? &j.at("pivots_hex")[i] : nullptr));
    }
    Chain chain(std::move(out));
    if (j.contains("dim") && j.at("dim").get<std::size_t>() != chain.dim()) {
      throw Error(ErrorKind::DimensionMismatch, "chain 'dim' does not match the pivots");
    }
    return chain;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Io, std::string("malformed chain JSON: ") + e.what());
  }
}

Json saddle_to_json(const SaddleRecord& saddle) {
  return Json{{"saddle_loss", saddle.loss}, {"saddle_loss_hex", to_hex(saddle.loss)}, {"source", to_string(saddle.source)},
              {"params", params_to_json(saddle.params)}};
}

Json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Io, path.string() + ": " + e.what());
  }
}

void write_json(const std::filesystem::path& path, const Json& j) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  out << j.dump(2) << '\n';
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double parse_number(const std::string& cell, const std::filesystem::path& path, std::size_t line) {
  char* end = nullptr;
  const double v = std::strtod(cell.c_str(), &end);
  while (end && (*end == ' ' || *end == '\r')) ++end;
  if (cell.empty() || end == cell.c_str() || *end != '\0') {
    throw Error(ErrorKind::Io, path.string() + ":" + std::to_string(line) + ": not a number '" + cell + "'");
  }
  return v;
}

}  // namespace

Dataset load_dataset_csv(const std::filesystem::path& path, LossKind loss_kind) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::Io, path.string() + ": missing header row");
  const auto columns = split(line).size();
  if (columns < 2) throw Error(ErrorKind::Io, path.string() + ": need feature columns and a target column");

  std::vector<std::vector<double>> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto cells = split(line);
    if (cells.size() != columns) {
      throw Error(ErrorKind::Io, path.string() + ":" + std::to_string(line_no) + ": expected " + std::to_string(columns) + " columns");
    }
    std::vector<double> row;
    for (const auto& c : cells) row.push_back(parse_number(c, path, line_no));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error(ErrorKind::Io, path.string() + ": no samples");

  Dataset d;
  const auto n = static_cast<Eigen::Index>(rows.size());
  const auto features = static_cast<Eigen::Index>(columns - 1);
  d.inputs.resize(n, features);
  if (loss_kind == LossKind::SquaredError) d.values.resize(n, 1);
  for (Eigen::Index r = 0; r < n; ++r) {
    const auto& row = rows[static_cast<std::size_t>(r)];
    for (Eigen::Index c = 0; c < features; ++c) d.inputs(r, c) = row[static_cast<std::size_t>(c)];
    const double target = row.back();
    if (loss_kind == LossKind::SquaredError) {
      d.values(r, 0) = target;
    } else {
      if (target != std::floor(target)) throw Error(ErrorKind::Io, path.string() + ": class labels must be integers");
      d.labels.push_back(static_cast<int>(target));
    }
  }
  return d;
}

std::vector<ProfileRow> profile_rows(const Chain& chain, const DenseProfile& profile) {
  if (profile.pivot_losses.size() != chain.size()) throw Error(ErrorKind::DimensionMismatch, "profile does not match chain");
  const auto s = arc_lengths(chain);
  const double total = s.back();
  const double segments = static_cast<double>(chain.size() - 1);
  std::vector<ProfileRow> rows;
  auto global = [&](std::size_t seg, double alpha, double arc) {
    return total > 0.0 ? arc / total : (static_cast<double>(seg) + alpha) / segments;
  };
  for (std::size_t i = 0; i < chain.size(); ++i) {
    rows.push_back({s[i], global(i, 0.0, s[i]), profile.pivot_losses[i], true});
    if (i + 1 == chain.size()) break;
    for (std::size_t a = 0; a < profile.alphas.size(); ++a) {
      const double alpha = profile.alphas[a];
      const double arc = s[i] + alpha * (s[i + 1] - s[i]);
      rows.push_back({arc, global(i, alpha, arc), profile.true_loss[i][a], false});
    }
  }
  return rows;
}

namespace {

std::ofstream open_csv(const std::filesystem::path& path, const Stamp& stamp) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  out << "# seed=" << stamp.seed << " config_hash=" << stamp.config_hash << '\n';
  return out;
}

}  // namespace

void write_profile_csv(const std::filesystem::path& path, const std::vector<ProfileRow>& rows, const Stamp& stamp) {
  auto out = open_csv(path, stamp);
  out << "cumulative_arc_length,alpha_global,loss,is_pivot\n";
  char buf[128];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%d\n", r.arc_length, r.alpha_global, r.loss, r.is_pivot ? 1 : 0);
    out << buf;
  }
}

void write_trace_csv(const std::filesystem::path& path, const std::vector<double>& trace, const Stamp& stamp) {
  auto out = open_csv(path, stamp);
  out << "iteration,max_interior_loss\n";
  char buf[64];
  for (std::size_t i = 0; i < trace.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g\n", i, trace[i]);
    out << buf;
  }
}

std::string hash_json(const Json& j) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : j.dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace mep::io
