#include <random>
#include <sstream>

#include "revtp/simulation.hpp"
#include "support/helpers.hpp"

using namespace revtp;
using namespace testing;

TEST_SUITE("simulation") {
  TEST_CASE("gen_dms draws balanced situations in range") {
    std::mt19937_64 rng(1);
    for (int t = 0; t < 500; ++t) {
      const Dms d = gen_dms(rng, 3, 4, {1, 20});
      CHECK(d.supply().sum() == d.demand().sum());
      CHECK(d.supply()[0] <= 20);
      CHECK(d.demand().maxCoeff() <= 20);
      CHECK(d.supply().minCoeff() >= 1);
      CHECK(d.demand().minCoeff() >= 1);
    }
    std::mt19937_64 r1(9), r2(9);
    CHECK(gen_dms(r1, 2, 3, {}) == gen_dms(r2, 2, 3, {}));
  }

  TEST_CASE("gen_dms errors") {
    std::mt19937_64 rng(1);
    // a1 = 1 and two demands of 1 leave one unit for two remaining supplies.
    CHECK(error_of([&] { gen_dms(rng, 3, 2, {1, 1}); }) == ErrorKind::kDomain);
    CHECK(error_of([&] { gen_dms(rng, 2, 3, {0, 5}); }) == ErrorKind::kDomain);
    CHECK(error_of([&] { gen_dms(rng, 1, 3, {}); }) == ErrorKind::kShape);
  }

  TEST_CASE("fixture experiment") {
    const StudyFixture fx = load_fixture();
    const ExperimentResult r = run_experiment(fixture_config(fx));
    REQUIRE(r.records.size() == 25);
    for (size_t k = 0; k < 25; ++k) {
      CHECK(r.records[k].plan.x == fx.decisions[k].plan);
      CHECK(r.records[k].normalized_cost.value() ==
            doctest::Approx(*fx.decisions[k].normalized_cost).epsilon(1e-3));
    }
    REQUIRE(r.control.has_value());
    CHECK(r.control->free_vars == vec({0, 2}));
    CHECK(r.match_rate == 1.0);
    CHECK(r.stopping_step == 18);
    CHECK(r.state.count() == 25);
    CHECK(max_diff(r.final_estimate, r.state.estimate().e()) == 0.0);
  }

  TEST_CASE("generated experiment learns a usable objective") {
    ExperimentConfig config;
    config.truth = vec({2, -1});
    config.seed = 42;
    config.steps = 40;
    const ExperimentResult r = run_experiment(config);
    CHECK(r.records.size() == 40);
    CHECK(r.final_estimate.norm() == doctest::Approx(1.0));
    CHECK(r.final_estimate.dot(r.truth_unlv) > 0.9);
    CHECK(run_experiment(config).final_estimate == r.final_estimate);
  }

  TEST_CASE("experiment config errors") {
    ExperimentConfig config;
    config.truth = Matrix(Matrix::Ones(3, 3));
    CHECK(error_of([&] { run_experiment(config); }) == ErrorKind::kShape);
    config.truth = vec({1, 0, 0});
    CHECK(error_of([&] { run_experiment(config); }) == ErrorKind::kDimensionMismatch);
    config.truth = vec({1, 0});
    config.steps = 0;
    CHECK(error_of([&] { run_experiment(config); }) == ErrorKind::kDomain);
    config.steps = 3;
    config.source = Source::kFixture;
    CHECK(error_of([&] { run_experiment(config); }) == ErrorKind::kShape);
  }

  TEST_CASE("result exports") {
    const ExperimentResult r = run_experiment(fixture_config(load_fixture()));
    const std::string csv = result_csv(r);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 27);
    CHECK(csv.rfind("step,a1,a2,b1,b2,b3,x_1_1", 0) == 0);
    CHECK(csv.find("\npolygon,5,3,4,2,2,") != std::string::npos);
    const Json j = result_json(r);
    CHECK(j["steps"] == 25);
    CHECK(j["records"].size() == 25);
    CHECK(j["stopping_step"] == 18);
    CHECK(j["control"]["free_vars"] == Json::parse("[0.0, 2.0]"));
  }

  TEST_CASE("effectiveness counts vertex agreement") {
    const std::vector<Dms> set = {dms({10, 25}, {5, 15, 15}), dms({5, 3}, {4, 2, 2})};
    CHECK(effectiveness(vec({-3, 13}), vec({-3, 13}), set) == 1.0);
    CHECK(effectiveness(vec({3, -13}), vec({-3, 13}), set) == 0.0);
  }
}
