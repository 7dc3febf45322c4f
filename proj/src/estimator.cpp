#include "revtp/estimator.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "revtp/error.hpp"

namespace revtp {

namespace {

// Angle between unit vectors; accurate for small angles, unlike acos.
double unit_angle(const Vector& a, const Vector& b) {
  return 2.0 * std::asin(std::min(1.0, (a - b).norm() / 2.0));
}

StopDecision evaluate_stop(const std::vector<StepEstimate>& history, size_t count,
                           const StopParams& params) {
  StopDecision out;
  out.step = static_cast<int>(count);
  const size_t window = static_cast<size_t>(std::max(params.window, 1));
  if (count < 2) return out;

  std::vector<double> changes;
  const size_t first = count > window ? count - window : 1;
  for (size_t t = first; t < count; ++t) {
    const auto& prev = history[t - 1].estimate;
    const auto& cur = history[t].estimate;
    if (!prev || !cur) return out;
    changes.push_back(unit_angle(*cur, *prev));
  }
  out.samples = static_cast<int>(changes.size());
  out.mean_change = std::accumulate(changes.begin(), changes.end(), 0.0) / changes.size();
  double var = 0.0;
  for (double c : changes) var += (c - out.mean_change) * (c - out.mean_change);
  out.std_change = std::sqrt(var / changes.size());
  out.stop = count > window && out.mean_change < params.eps_mean &&
             out.std_change < params.eps_std;
  return out;
}

}  // namespace

Observation make_observation(const Dms& dms, const Vector& chosen_free_vars, int step) {
  const ReducedLpp lpp = build_constraints(dms);
  if (chosen_free_vars.size() != lpp.dim()) {
    std::ostringstream os;
    os << "expected " << lpp.dim() << " free variables, got " << chosen_free_vars.size();
    throw Error(ErrorKind::kShape, os.str());
  }
  if (!is_feasible(lpp, chosen_free_vars)) {
    throw Error(ErrorKind::kNotAVertex, "chosen point lies outside the tolerance region");
  }

  Vertex vertex{chosen_free_vars, tight_constraints(lpp, chosen_free_vars)};
  if (lpp.dim() == 2) {
    const auto vertices = enumerate_vertices(lpp);
    const double scale = std::max(1.0, chosen_free_vars.cwiseAbs().maxCoeff());
    const auto it = std::find_if(vertices.begin(), vertices.end(), [&](const Vertex& v) {
      return (v.point - chosen_free_vars).cwiseAbs().maxCoeff() <= kTightTolerance * scale;
    });
    if (it == vertices.end()) {
      throw Error(ErrorKind::kNotAVertex, "chosen point is not an extreme point of the region");
    }
    vertex = *it;
  }

  std::vector<int> active;
  try {
    active = active_pair_at(vertex, lpp);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kDegenerateVertex) {
      throw Error(ErrorKind::kNotAVertex, "chosen point is not an extreme point of the region");
    }
    throw;
  }

  const ObservationDirection dir = observation_direction(active, dms.m(), dms.n());
  Observation obs;
  obs.step = step;
  obs.dms = dms;
  obs.chosen_free_vars = chosen_free_vars;
  obs.active_pair = std::move(active);
  obs.obs_unlv = dir.direction;
  obs.weight = dir.weight;
  return obs;
}

Observation make_observation(const Dms& dms, const TransportPlan& chosen_plan, int step) {
  const FeasibilityReport report = check_feasible(chosen_plan, dms);
  if (!report.feasible()) {
    throw Error(ErrorKind::kNotAVertex, "chosen plan violates the situation's balance");
  }
  return make_observation(dms, free_vars_of(chosen_plan), step);
}

Observation observation_from_pair(ConstraintPair pair, int m, int n, int step) {
  const SpectrumPair info = pair_info(pair, m, n);
  Observation obs;
  obs.step = step;
  obs.active_pair = {info.pair[0], info.pair[1]};
  obs.obs_unlv = info.sum_unlv;
  obs.weight = info.weight;
  return obs;
}

EstimateState::EstimateState(int dim, std::optional<int> window)
    : dim_(dim), window_(window), sums_(Vector::Zero(dim)) {
  if (dim < 1) throw Error(ErrorKind::kShape, "estimate dimension must be positive");
  if (window && *window < 1) throw Error(ErrorKind::kDomain, "window must be at least 1");
}

void EstimateState::ingest(const Observation& observation) {
  if (observation.obs_unlv.size() != dim_) {
    std::ostringstream os;
    os << "observation has dimension " << observation.obs_unlv.size() << ", state has " << dim_;
    throw Error(ErrorKind::kDimensionMismatch, os.str());
  }
  observations_.push_back(observation);
  ++count_;
  if (window_ && static_cast<int>(observations_.size()) > *window_) {
    observations_.erase(observations_.begin());
  }
  if (window_) {
    // Re-summing the buffer avoids drift from repeated add/subtract.
    sums_.setZero();
    for (const auto& o : observations_) sums_ += o.weight * o.obs_unlv;
  } else {
    sums_ += observation.weight * observation.obs_unlv;
  }

  StepEstimate entry;
  entry.step = count_;
  entry.sums = sums_;
  const double norm = sums_.norm();
  if (norm > kZeroSumTolerance) entry.estimate = Vector(sums_ / norm);
  history_.push_back(std::move(entry));
}

Unlv EstimateState::estimate() const {
  if (count_ == 0) throw Error(ErrorKind::kNoObservations, "no observations ingested yet");
  if (sums_.norm() <= kZeroSumTolerance) {
    throw Error(ErrorKind::kZeroSum, "weighted observation vectors cancel out");
  }
  return unlv(sums_);
}

std::vector<std::vector<double>> convergence(const EstimateState& state,
                                             std::span<const Vector> references) {
  std::vector<std::vector<double>> out;
  out.reserve(state.history().size());
  for (const auto& entry : state.history()) {
    std::vector<double> row;
    for (const auto& ref : references) {
      if (ref.size() != state.dim()) {
        throw Error(ErrorKind::kDimensionMismatch, "reference dimension differs from the state");
      }
      row.push_back(entry.estimate ? (*entry.estimate - ref).norm()
                                   : std::numeric_limits<double>::quiet_NaN());
    }
    out.push_back(std::move(row));
  }
  return out;
}

Vector nearest_polygon_vector(const Vector& direction, int m, int n) {
  const auto candidates = polygon_observation_vectors(m, n);
  const Vector* best = &candidates.front();
  for (const auto& c : candidates) {
    if ((c - direction).norm() < (*best - direction).norm()) best = &c;
  }
  return *best;
}

StopDecision should_stop(const EstimateState& state, const StopParams& params) {
  return evaluate_stop(state.history(), state.history().size(), params);
}

std::optional<int> first_stop_step(const EstimateState& state, const StopParams& params) {
  for (size_t k = 1; k <= state.history().size(); ++k) {
    if (evaluate_stop(state.history(), k, params).stop) return static_cast<int>(k);
  }
  return std::nullopt;
}

Prediction predict_plan(const Vector& estimate, const Dms& dms) {
  const ReducedLpp lpp = build_constraints(dms);
  Prediction out;
  out.solution = solve_max(lpp, estimate);
  out.plan = reconstruct_plan(dms, out.solution.vertex.point);
  return out;
}

}  // namespace revtp
