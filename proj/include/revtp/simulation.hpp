#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "revtp/estimator.hpp"
#include "revtp/fixtures.hpp"
#include "revtp/io.hpp"

namespace revtp {

struct ValueRange {
  int lo = 1;
  int hi = 100;
};

enum class Source { kGenerated, kFixture };

struct ExperimentConfig {
  int m = 2;
  int n = 3;
  // Hidden truth: a cost matrix, or directly an objective direction in
  // free-variable space.
  std::variant<Matrix, Vector> truth;
  int steps = 25;
  ValueRange range;
  std::uint64_t seed = 0;
  std::optional<int> window;
  Source source = Source::kGenerated;
  std::vector<Dms> situations;  // the stream when source == kFixture
  std::optional<Dms> control;   // planned and recorded, never ingested
  StopParams stop;
};

struct StepRecord {
  std::string label;
  int step = 0;
  Dms dms;
  TransportPlan plan;
  Vector free_vars;
  std::vector<int> active_pair;
  Vector obs_unlv;
  double weight = 0.0;
  Vector sums;                       // empty for the control row
  std::optional<Vector> estimate;    // current estimate after this step
  std::optional<double> normalized_cost;
};

struct ExperimentResult {
  std::vector<StepRecord> records;
  std::optional<StepRecord> control;
  Vector truth_unlv;
  Vector final_estimate;
  double match_rate = 0.0;  // over all recorded situations plus the control
  std::optional<int> stopping_step;
  EstimateState state{1};
};

/// Config replaying the bundled study: modelling costs as truth, 25 recorded
/// situations, the polygon as control row.
ExperimentConfig fixture_config(const StudyFixture& fixture);

/// Random balanced situation: a1 and all b_j uniform in range, a2..am absorb
/// the balance; redrawn until every entry is >= 1. Throws DomainError after
/// 10000 failed draws.
Dms gen_dms(std::mt19937_64& rng, int m, int n, ValueRange range);

/// The simulated decision taker: plans the situation with the true objective.
Prediction simulated_dm(const Vector& truth_unlv, const Dms& dms);

Vector truth_direction(const ExperimentConfig& config);

ExperimentResult run_experiment(const ExperimentConfig& config);

/// Fraction of situations on which the estimate and the truth select the same
/// vertex.
double effectiveness(const Vector& estimate, const Vector& truth_unlv, std::span<const Dms> dms_set);
double effectiveness(const ExperimentResult& result, const Vector& truth_unlv,
                     std::span<const Dms> dms_set);

std::string result_csv(const ExperimentResult& result);
Json result_json(const ExperimentResult& result);

}  // namespace revtp
