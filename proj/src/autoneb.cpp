#include "mep/autoneb.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <set>

#include "mep/error.hpp"
#include "mep/parallel.hpp"

namespace mep {

AutoNebSchedule AutoNebSchedule::standard() {
  AutoNebSchedule s;
  for (int i = 0; i < 4; ++i) s.cycles.push_back({1000, 0.1});
  for (int i = 0; i < 2; ++i) s.cycles.push_back({2000, 0.1});
  for (int i = 0; i < 4; ++i) s.cycles.push_back({1000, 0.01});
  for (int i = 0; i < 4; ++i) s.cycles.push_back({1000, 0.001});
  return s;
}

void AutoNebSchedule::validate() const {
  if (cycles.empty()) throw Error(ErrorKind::InvalidArgument, "AutoNEB schedule needs at least one cycle");
  for (const auto& c : cycles) {
    if (!(c.learning_rate > 0.0)) throw Error(ErrorKind::InvalidArgument, "cycle learning rate must be > 0");
  }
  if (!(insert_threshold > 0.0 && insert_threshold < 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "insert_threshold must be in (0, 1)");
  }
  if (dense_count == 0) throw Error(ErrorKind::InvalidArgument, "dense_count must be >= 1");
  if (insert_cap == 0) throw Error(ErrorKind::InvalidArgument, "insert_cap must be >= 1");
  if (initial_pivots == 0) throw Error(ErrorKind::InvalidArgument, "initial_pivots must be >= 1");
}

double DenseProfile::max_loss() const {
  double m = -std::numeric_limits<double>::infinity();
  for (double l : pivot_losses) m = std::max(m, l);
  for (const auto& seg : true_loss) {
    for (double l : seg) m = std::max(m, l);
  }
  return m;
}

double residual_normalizer(const PivotLosses& pivot_losses) {
  const auto [lo, hi] = std::minmax_element(pivot_losses.begin(), pivot_losses.end());
  const double range = *hi - *lo;
  if (range >= 1e-12) return range;
  const double mean = std::accumulate(pivot_losses.begin(), pivot_losses.end(), 0.0) / static_cast<double>(pivot_losses.size());
  return std::max(1e-12, std::abs(mean));
}

DenseProfile make_profile(PivotLosses pivot_losses, std::vector<std::vector<double>> true_loss, std::size_t m) {
  if (m == 0) throw Error(ErrorKind::InvalidArgument, "dense count must be >= 1");
  if (pivot_losses.size() < 2 || true_loss.size() + 1 != pivot_losses.size()) {
    throw Error(ErrorKind::DimensionMismatch, "need one sampled segment per pair of neighbouring pivots");
  }
  DenseProfile p;
  for (std::size_t a = 1; a <= m; ++a) p.alphas.push_back(static_cast<double>(a) / static_cast<double>(m + 1));
  p.normalizer = residual_normalizer(pivot_losses);
  const auto segments = true_loss.size();
  p.guess.resize(segments);
  p.residual.resize(segments);
  for (std::size_t s = 0; s < segments; ++s) {
    if (true_loss[s].size() != m) throw Error(ErrorKind::DimensionMismatch, "segment sample count differs from m");
    for (std::size_t a = 0; a < m; ++a) {
      const double alpha = p.alphas[a];
      const double guess = pivot_losses[s] * (1.0 - alpha) + pivot_losses[s + 1] * alpha;
      p.guess[s].push_back(guess);
      p.residual[s].push_back((true_loss[s][a] - guess) / p.normalizer);
    }
  }
  p.pivot_losses = std::move(pivot_losses);
  p.true_loss = std::move(true_loss);
  return p;
}

namespace {

ParamVector interpolate(const Chain& chain, std::size_t segment, double alpha) {
  return (1.0 - alpha) * chain[segment] + alpha * chain[segment + 1];
}

}  // namespace

DenseProfile evaluate_dense(const Chain& chain, const Landscape& landscape, std::size_t m, std::size_t workers) {
  if (m == 0) throw Error(ErrorKind::InvalidArgument, "dense count must be >= 1");
  if (chain.dim() != landscape.dim()) throw Error(ErrorKind::DimensionMismatch, "chain and landscape differ in dimension");
  const std::size_t pivots = chain.size();
  const std::size_t segments = pivots - 1;
  PivotLosses pivot_losses(pivots);
  std::vector<std::vector<double>> true_loss(segments, std::vector<double>(m));

  // Jobs 0 .. pivots-1 are pivots, the rest are dense points in segment-major order.
  parallel_for(pivots + segments * m, workers, [&](std::size_t job) {
    if (job < pivots) {
      pivot_losses[job] = landscape.loss(chain[job]);
      return;
    }
    const std::size_t s = (job - pivots) / m;
    const std::size_t a = (job - pivots) % m;
    const double alpha = static_cast<double>(a + 1) / static_cast<double>(m + 1);
    true_loss[s][a] = landscape.loss(interpolate(chain, s, alpha));
  });
  return make_profile(std::move(pivot_losses), std::move(true_loss), m);
}

std::vector<InsertionCandidate> insertion_candidates(const DenseProfile& profile, const PivotLosses& pivot_losses,
                                                     double threshold, std::size_t cap) {
  if (pivot_losses.size() != profile.segments() + 1) {
    throw Error(ErrorKind::DimensionMismatch, "pivot losses not aligned with the profile");
  }
  const double normalizer = residual_normalizer(pivot_losses);
  std::vector<InsertionCandidate> out;
  for (std::size_t s = 0; s < profile.segments(); ++s) {
    std::optional<InsertionCandidate> best;
    for (std::size_t a = 0; a < profile.alphas.size(); ++a) {
      const double alpha = profile.alphas[a];
      const double guess = pivot_losses[s] * (1.0 - alpha) + pivot_losses[s + 1] * alpha;
      const double residual = (profile.true_loss[s][a] - guess) / normalizer;
      if (residual > threshold && (!best || residual > best->residual)) best = InsertionCandidate{s, alpha, residual};
    }
    if (best) out.push_back(*best);
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const InsertionCandidate& a, const InsertionCandidate& b) { return a.residual > b.residual; });
  if (out.size() > cap) out.resize(cap);
  return out;
}

Chain insert_pivots(const Chain& chain, const std::vector<InsertionCandidate>& candidates) {
  std::vector<const InsertionCandidate*> by_segment(chain.size() - 1, nullptr);
  for (const auto& c : candidates) {
    if (c.segment + 1 >= chain.size()) throw Error(ErrorKind::InvalidArgument, "candidate segment out of range");
    if (!(c.alpha > 0.0 && c.alpha < 1.0)) throw Error(ErrorKind::InvalidArgument, "candidate alpha must be in (0, 1)");
    if (by_segment[c.segment]) {
      throw Error(ErrorKind::InvalidArgument, "duplicate candidate for segment " + std::to_string(c.segment));
    }
    by_segment[c.segment] = &c;
  }
  std::vector<ParamVector> pivots;
  pivots.reserve(chain.size() + candidates.size());
  for (std::size_t i = 0; i < chain.size(); ++i) {
    pivots.push_back(chain[i]);
    if (i + 1 < chain.size() && by_segment[i]) pivots.push_back(interpolate(chain, i, by_segment[i]->alpha));
  }
  return Chain(std::move(pivots));
}

const char* to_string(SaddleSource source) { return source == SaddleSource::Pivot ? "pivot" : "dense_point"; }

SaddleRecord find_saddle(const Chain& chain, const DenseProfile& profile) {
  if (profile.pivot_losses.size() != chain.size()) throw Error(ErrorKind::DimensionMismatch, "profile does not match chain");
  SaddleRecord best;
  best.loss = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < chain.size(); ++i) {
    if (profile.pivot_losses[i] > best.loss) best = {chain[i], profile.pivot_losses[i], SaddleSource::Pivot};
  }
  for (std::size_t s = 0; s < profile.segments(); ++s) {
    for (std::size_t a = 0; a < profile.alphas.size(); ++a) {
      if (profile.true_loss[s][a] > best.loss) {
        best = {interpolate(chain, s, profile.alphas[a]), profile.true_loss[s][a], SaddleSource::DensePoint};
      }
    }
  }
  return best;
}

AutoNebResult auto_neb(const ParamVector& start, const ParamVector& end, const Landscape& landscape,
                       const AutoNebSchedule& schedule) {
  schedule.validate();
  if (static_cast<std::size_t>(start.size()) != landscape.dim() || static_cast<std::size_t>(end.size()) != landscape.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "endpoints do not match the landscape dimension");
  }

  Chain chain = Chain::straight(start, end, schedule.initial_pivots);
  OptimizerState state;
  std::vector<CycleTrace> trace;
  for (const auto& cycle : schedule.cycles) {
    NebConfig cfg;
    cfg.steps = cycle.steps;
    cfg.learning_rate = cycle.learning_rate;
    cfg.momentum = schedule.momentum;
    cfg.weight_decay = schedule.weight_decay;
    cfg.spring_constant = schedule.spring_constant;
    cfg.workers = schedule.workers;
    chain = neb_relax(chain, landscape, cfg, state).chain;

    const DenseProfile profile = evaluate_dense(chain, landscape, schedule.dense_count, schedule.workers);
    const auto candidates =
        insertion_candidates(profile, profile.pivot_losses, schedule.insert_threshold, schedule.insert_cap);
    trace.push_back({chain.size(), candidates.size(), profile.max_loss()});
    if (!candidates.empty()) {
      chain = insert_pivots(chain, candidates);
      state.reset();
    }
  }

  DenseProfile profile = evaluate_dense(chain, landscape, schedule.dense_count, schedule.workers);
  SaddleRecord saddle = find_saddle(chain, profile);
  return {std::move(chain), std::move(saddle), std::move(profile), std::move(trace)};
}

}  // namespace mep
