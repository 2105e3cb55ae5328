#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "mep/chain.hpp"
#include "mep/landscape.hpp"
#include "mep/neb.hpp"

namespace mep {

struct NebCycle {
  std::size_t steps;
  double learning_rate;
};

struct AutoNebSchedule {
  std::vector<NebCycle> cycles;
  double insert_threshold = 0.2;
  std::size_t dense_count = 9;
  std::size_t insert_cap = 4;
  std::size_t initial_pivots = 3;
  // Shared by every cycle.
  double momentum = 0.9;
  double weight_decay = 1e-4;
  double spring_constant = 0.0;
  std::size_t workers = 1;

  /// Fourteen cycles: 4 x (1000, 0.1), 2 x (2000, 0.1), 4 x (1000, 0.01), 4 x (1000, 0.001).
  static AutoNebSchedule standard();

  void validate() const;
};

/// Dense samples between neighbouring pivots. Segment s joins pivots s and s+1.
struct DenseProfile {
  std::vector<double> alphas;            // 1/(m+1) .. m/(m+1)
  PivotLosses pivot_losses;
  std::vector<std::vector<double>> true_loss;  // [segment][alpha]
  std::vector<std::vector<double>> guess;
  std::vector<std::vector<double>> residual;
  /// Pivot-loss range, or max(1e-12, |mean pivot loss|) when the range is below 1e-12.
  double normalizer = 1.0;

  std::size_t segments() const { return true_loss.size(); }
  double max_loss() const;
};

/// Builds guess, residual and normaliser from pivot losses and sampled losses.
DenseProfile make_profile(PivotLosses pivot_losses, std::vector<std::vector<double>> true_loss, std::size_t m);

double residual_normalizer(const PivotLosses& pivot_losses);

DenseProfile evaluate_dense(const Chain& chain, const Landscape& landscape, std::size_t m, std::size_t workers = 1);

struct InsertionCandidate {
  std::size_t segment;
  double alpha;
  double residual;
};

/// At most one candidate per segment (its largest residual, if above
/// `threshold`), then the `cap` largest overall, sorted by descending residual.
std::vector<InsertionCandidate> insertion_candidates(const DenseProfile& profile, const PivotLosses& pivot_losses,
                                                     double threshold, std::size_t cap);

/// Splices p_s (1 - alpha) + p_{s+1} alpha into the chain for each candidate.
Chain insert_pivots(const Chain& chain, const std::vector<InsertionCandidate>& candidates);

enum class SaddleSource { Pivot, DensePoint };

const char* to_string(SaddleSource source);

struct SaddleRecord {
  ParamVector params;
  double loss = 0.0;
  SaddleSource source = SaddleSource::Pivot;
};

/// Highest point over pivots and dense samples.
SaddleRecord find_saddle(const Chain& chain, const DenseProfile& profile);

struct CycleTrace {
  std::size_t pivots_before;
  std::size_t inserted;
  double max_dense_loss;  // after relaxation, before insertion
};

struct AutoNebResult {
  Chain chain;
  SaddleRecord saddle;
  DenseProfile profile;  // of the returned chain
  std::vector<CycleTrace> cycles;
};

AutoNebResult auto_neb(const ParamVector& start, const ParamVector& end, const Landscape& landscape,
                       const AutoNebSchedule& schedule);

}  // namespace mep
