#include "revtp/simulation.hpp"

#include <sstream>

#include "revtp/error.hpp"

namespace revtp {

namespace {

constexpr int kMaxDraws = 10000;

bool same_vertex(const Vector& a, const Vector& b) {
  return (a - b).cwiseAbs().maxCoeff() <= 1e-9 * std::max(1.0, a.cwiseAbs().maxCoeff());
}

StepRecord record_decision(const ExperimentConfig& config, const Vector& truth, const Dms& dms,
                           int step, std::string label) {
  const Prediction decision = simulated_dm(truth, dms);
  const Observation obs = make_observation(dms, decision.solution.vertex.point, step);
  StepRecord rec;
  rec.label = std::move(label);
  rec.step = step;
  rec.dms = dms;
  rec.plan = decision.plan;
  rec.free_vars = decision.solution.vertex.point;
  rec.active_pair = obs.active_pair;
  rec.obs_unlv = obs.obs_unlv;
  rec.weight = obs.weight;
  if (const auto* costs = std::get_if<Matrix>(&config.truth)) {
    rec.normalized_cost = plan_cost(*costs, rec.plan).normalized;
  }
  return rec;
}

}  // namespace

ExperimentConfig fixture_config(const StudyFixture& fixture) {
  ExperimentConfig config;
  config.m = fixture.modelling.m();
  config.n = fixture.modelling.n();
  config.truth = fixture.modelling.costs();
  config.steps = static_cast<int>(fixture.situations.size());
  config.source = Source::kFixture;
  config.situations = fixture.situations;
  config.control = fixture.polygon;
  return config;
}

Dms gen_dms(std::mt19937_64& rng, int m, int n, ValueRange range) {
  if (m < 2 || n < 2) throw Error(ErrorKind::kShape, "dimensions must be at least 2x2");
  if (range.lo < 1 || range.hi < range.lo) {
    throw Error(ErrorKind::kDomain, "value range must satisfy 1 <= lo <= hi");
  }
  std::uniform_int_distribution<int> draw(range.lo, range.hi);
  for (int attempt = 0; attempt < kMaxDraws; ++attempt) {
    Vector a(m);
    Vector b(n);
    a[0] = draw(rng);
    for (int j = 0; j < n; ++j) b[j] = draw(rng);
    const long long residual = static_cast<long long>(b.sum() - a[0]);
    const long long share = residual / (m - 1);
    for (int i = 1; i < m; ++i) a[i] = static_cast<double>(share);
    a[1] += static_cast<double>(residual - share * (m - 1));
    if ((a.array() >= 1.0).all()) return make_dms(a, b);
  }
  throw Error(ErrorKind::kDomain, "could not draw a balanced situation in range");
}

Prediction simulated_dm(const Vector& truth_unlv, const Dms& dms) {
  return predict_plan(truth_unlv, dms);
}

Vector truth_direction(const ExperimentConfig& config) {
  if (const auto* costs = std::get_if<Matrix>(&config.truth)) {
    return unlv(reduce_objective(*costs).coefficients()).e();
  }
  return unlv(std::get<Vector>(config.truth)).e();
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  if (config.steps < 1) throw Error(ErrorKind::kDomain, "experiment needs at least one step");
  if (config.source == Source::kFixture &&
      static_cast<int>(config.situations.size()) < config.steps) {
    throw Error(ErrorKind::kShape, "fixture stream is shorter than the step count");
  }
  if (const auto* costs = std::get_if<Matrix>(&config.truth);
      costs && (costs->rows() != config.m || costs->cols() != config.n)) {
    throw Error(ErrorKind::kShape, "truth cost matrix does not match the dimensions");
  }

  const Vector truth = truth_direction(config);
  if (truth.size() != free_dim(config.m, config.n)) {
    throw Error(ErrorKind::kDimensionMismatch, "truth direction does not match the dimensions");
  }

  ExperimentResult result;
  result.truth_unlv = truth;
  result.state = EstimateState(free_dim(config.m, config.n), config.window);
  std::mt19937_64 rng(config.seed);

  std::vector<Dms> seen;
  for (int k = 1; k <= config.steps; ++k) {
    const Dms dms = config.source == Source::kFixture
                        ? config.situations[k - 1]
                        : gen_dms(rng, config.m, config.n, config.range);
    StepRecord rec = record_decision(config, truth, dms, k, std::to_string(k));
    Observation obs;
    obs.step = k;
    obs.dms = dms;
    obs.chosen_free_vars = rec.free_vars;
    obs.active_pair = rec.active_pair;
    obs.obs_unlv = rec.obs_unlv;
    obs.weight = rec.weight;
    result.state.ingest(obs);
    rec.sums = result.state.sums();
    rec.estimate = result.state.history().back().estimate;
    result.records.push_back(std::move(rec));
    seen.push_back(dms);
  }

  if (config.control) {
    result.control = record_decision(config, truth, *config.control, 0, "polygon");
    seen.push_back(*config.control);
  }

  result.final_estimate = result.state.estimate().e();
  result.match_rate = effectiveness(result.final_estimate, truth, seen);
  result.stopping_step = first_stop_step(result.state, config.stop);
  return result;
}

double effectiveness(const Vector& estimate, const Vector& truth_unlv,
                     std::span<const Dms> dms_set) {
  if (dms_set.empty()) return 1.0;
  int matches = 0;
  for (const auto& dms : dms_set) {
    const Vector model = predict_plan(estimate, dms).solution.vertex.point;
    const Vector dm = simulated_dm(truth_unlv, dms).solution.vertex.point;
    if (same_vertex(model, dm)) ++matches;
  }
  return static_cast<double>(matches) / static_cast<double>(dms_set.size());
}

double effectiveness(const ExperimentResult& result, const Vector& truth_unlv,
                     std::span<const Dms> dms_set) {
  return effectiveness(result.final_estimate, truth_unlv, dms_set);
}

std::string result_csv(const ExperimentResult& result) {
  std::ostringstream os;
  os.precision(17);
  const auto& first = result.records.front();
  const int m = first.dms.m();
  const int n = first.dms.n();
  os << "step";
  for (int i = 1; i <= m; ++i) os << ",a" << i;
  for (int j = 1; j <= n; ++j) os << ",b" << j;
  for (int i = 1; i <= m; ++i) {
    for (int j = 1; j <= n; ++j) os << ",x_" << i << '_' << j;
  }
  os << ",active,weight";
  const int d = free_dim(m, n);
  for (int k = 1; k <= d; ++k) os << ",obs_" << k;
  for (int k = 1; k <= d; ++k) os << ",sum_" << k;
  for (int k = 1; k <= d; ++k) os << ",est_" << k;
  os << ",normalized_cost\n";

  auto row = [&](const StepRecord& r) {
    os << r.label;
    for (double v : r.dms.supply()) os << ',' << v;
    for (double v : r.dms.demand()) os << ',' << v;
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < n; ++j) os << ',' << r.plan.x(i, j);
    }
    os << ',';
    for (size_t k = 0; k < r.active_pair.size(); ++k) os << (k ? "-" : "") << r.active_pair[k];
    os << ',' << r.weight;
    for (double v : r.obs_unlv) os << ',' << v;
    for (int k = 0; k < d; ++k) {
      os << ',';
      if (r.sums.size() == d) os << r.sums[k];
    }
    for (int k = 0; k < d; ++k) {
      os << ',';
      if (r.estimate) os << (*r.estimate)[k];
    }
    os << ',';
    if (r.normalized_cost) os << *r.normalized_cost;
    os << '\n';
  };
  for (const auto& r : result.records) row(r);
  if (result.control) row(*result.control);
  return os.str();
}

Json result_json(const ExperimentResult& result) {
  Json steps = Json::array();
  auto encode = [](const StepRecord& r) {
    Json j = {{"label", r.label},
              {"dms", to_json(r.dms)},
              {"plan", to_json(r.plan.x)},
              {"free_vars", to_json(r.free_vars)},
              {"active_pair", r.active_pair},
              {"obs_unlv", to_json(r.obs_unlv)},
              {"weight", r.weight}};
    if (r.sums.size() > 0) j["sums"] = to_json(r.sums);
    j["estimate"] = r.estimate ? to_json(*r.estimate) : Json(nullptr);
    j["normalized_cost"] = r.normalized_cost ? Json(*r.normalized_cost) : Json(nullptr);
    return j;
  };
  for (const auto& r : result.records) steps.push_back(encode(r));
  Json j = {{"steps", result.records.size()},
            {"truth_unlv", to_json(result.truth_unlv)},
            {"final_estimate", to_json(result.final_estimate)},
            {"match_rate", result.match_rate},
            {"records", steps}};
  j["stopping_step"] = result.stopping_step ? Json(*result.stopping_step) : Json(nullptr);
  j["control"] = result.control ? encode(*result.control) : Json(nullptr);
  return j;
}

}  // namespace revtp
