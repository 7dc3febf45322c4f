#pragma once

#include <deque>
#include <optional>
#include <span>
#include <vector>

#include "revtp/lp.hpp"
#include "revtp/spectrum.hpp"

namespace revtp {

/// One observed decision, distilled to the data the estimator consumes.
struct Observation {
  int step = 0;
  Dms dms;
  Vector chosen_free_vars;
  std::vector<int> active_pair;  // 1-based constraint labels
  Vector obs_unlv;               // normalized sum of the active normals
  double weight = 0.0;
};

/// Builds an observation from a chosen vertex of the situation's region.
/// Throws NotAVertex, DegenerateRegion, ShapeError.
Observation make_observation(const Dms& dms, const Vector& chosen_free_vars, int step = 0);
Observation make_observation(const Dms& dms, const TransportPlan& chosen_plan, int step = 0);

/// Observation from a recorded constraint pair alone (logs that store labels
/// rather than plans). The situation and point are left empty.
Observation observation_from_pair(ConstraintPair pair, int m, int n, int step = 0);

struct StepEstimate {
  int step = 0;
  Vector sums;
  std::optional<Vector> estimate;  // absent when the sums cancel to zero
};

/// Running state of the weighted single-point estimator
///
///   c_k = S_k / |S_k|,   S_k = sum_j beta_j e_j
///
/// summed over all observations, or over the last `window` ones when a
/// sliding window is set. Single writer; copy to snapshot.
class EstimateState {
 public:
  explicit EstimateState(int dim, std::optional<int> window = std::nullopt);

  /// Throws DimensionMismatch.
  void ingest(const Observation& observation);

  /// Throws NoObservations, ZeroSum.
  Unlv estimate() const;

  int dim() const { return dim_; }
  int count() const { return count_; }
  std::optional<int> window() const { return window_; }
  const Vector& sums() const { return sums_; }
  const std::vector<StepEstimate>& history() const { return history_; }
  // Observations currently summed: all of them, or the last `window`.
  const std::vector<Observation>& observations() const { return observations_; }

 private:
  int dim_;
  std::optional<int> window_;
  int count_ = 0;
  Vector sums_;
  std::vector<Observation> observations_;
  std::vector<StepEstimate> history_;
};

inline constexpr double kZeroSumTolerance = 1e-12;

/// distances[s][r]: Euclidean distance of the step-s estimate to reference r
/// (NaN where the estimate was undefined).
std::vector<std::vector<double>> convergence(const EstimateState& state,
                                             std::span<const Vector> references);

/// Polygon observation vector closest to the given direction.
Vector nearest_polygon_vector(const Vector& direction, int m, int n);

struct StopParams {
  int window = 5;
  double eps_mean = 0.02;  // radians
  double eps_std = 0.02;   // radians
};

struct StopDecision {
  bool stop = false;
  int step = 0;            // observation count the decision refers to
  double mean_change = 0.0;
  double std_change = 0.0;  // population standard deviation
  int samples = 0;
};

/// Stop when the last `window` angular changes between consecutive estimates
/// have mean and standard deviation below the thresholds. Never stops at
/// count <= window.
StopDecision should_stop(const EstimateState& state, const StopParams& params = {});

/// Same rule evaluated at every prefix of the history; first step that stops.
std::optional<int> first_stop_step(const EstimateState& state, const StopParams& params = {});

struct Prediction {
  TransportPlan plan;
  Solution solution;
};

/// Plan the situation with the estimate as objective.
Prediction predict_plan(const Vector& estimate, const Dms& dms);

}  // namespace revtp
