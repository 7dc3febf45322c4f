#include <atomic>
#include <chrono>
#include <filesystem>
#include <random>
#include <thread>

#include "revtp/service.hpp"
#include "revtp/simulation.hpp"
#include "support/helpers.hpp"

// After Eigen: the resolver headers it pulls in define a `_res` macro.
#include <httplib.h>

using namespace revtp;
using namespace testing;

namespace {

HttpResponse call(Service& s, const std::string& method, const std::string& path,
                  const Json& body = nullptr, std::map<std::string, std::string> query = {}) {
  return s.handle({method, path, std::move(query), body.is_null() ? "" : body.dump()});
}

std::string create(Service& s, const Json& body = Json::object()) {
  const HttpResponse r = call(s, "POST", "/api/sessions", body);
  REQUIRE(r.status == 201);
  return r.body["id"];
}

Json situation(const Dms& d) { return {{"supply", to_json(d.supply())}, {"demand", to_json(d.demand())}}; }

Vector json_vec(const Json& j) { return vector_from_json(j); }

std::filesystem::path fresh_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() /
                   (name + "-" + std::to_string(std::random_device{}()));
  std::filesystem::remove_all(dir);
  return dir;
}

}  // namespace

TEST_SUITE("service") {
  TEST_CASE("health, spectrum and catalogue") {
    Service s;
    CHECK(call(s, "GET", "/api/health").status == 200);
    const HttpResponse spectrum = call(s, "GET", "/api/spectrum");
    CHECK(spectrum.status == 200);
    CHECK(spectrum.body["pairs"].size() == 12);
    const HttpResponse cat = call(s, "GET", "/api/catalogue");
    CHECK(cat.body.size() == 18);
    CHECK(cat.body[8]["general_rank"] == 8);
    CHECK(call(s, "GET", "/nowhere").status == 404);
    CHECK(call(s, "GET", "/api/spectrum", nullptr, {{"m", "two"}}).status == 400);
    CHECK(call(s, "GET", "/api/spectrum", nullptr, {{"m", "1"}}).status == 422);
    CHECK(call(s, "GET", "/api/nowhere").status == 404);
  }

  TEST_CASE("first decision of the study") {
    Service s;
    const std::string id = create(s);
    const std::string base = "/api/sessions/" + id;

    CHECK(call(s, "POST", base + "/decision", {{"point", {5, 15}}}).status == 409);
    CHECK(call(s, "GET", base + "/situation").status == 409);

    const HttpResponse sit = call(s, "POST", base + "/situation", situation(dms({10, 25}, {5, 15, 15})));
    REQUIRE(sit.status == 201);
    CHECK(sit.body["geometry"]["vertices"].size() == 4);
    CHECK(call(s, "POST", base + "/situation", situation(dms({10, 25}, {5, 15, 15}))).status == 409);
    CHECK(call(s, "GET", base + "/situation").status == 200);

    const HttpResponse interior = call(s, "POST", base + "/decision", {{"point", {3, 3}}});
    CHECK(interior.status == 422);
    CHECK(interior.body["error"] == "NotAVertex");

    const HttpResponse d = call(s, "POST", base + "/decision", {{"point", {5, 15}}});
    REQUIRE(d.status == 200);
    CHECK(max_diff(json_vec(d.body["estimate"]), vec({-0.924, 0.383})) < 5e-4);
    CHECK(d.body["observation"]["active_pair"] == Json::parse("[1,4]"));
    CHECK(d.body["session"]["pending"].is_null());
  }

  TEST_CASE("request errors map to status codes") {
    Service s;
    CHECK(call(s, "GET", "/api/sessions/nope").status == 404);
    CHECK(call(s, "POST", "/api/sessions/nope/decision", {{"point", {1, 1}}}).status == 404);
    CHECK(s.handle({"POST", "/api/sessions", {}, "{not json"}).status == 400);
    CHECK(call(s, "POST", "/api/sessions", {{"mode", "dream"}}).status == 400);
    CHECK(call(s, "POST", "/api/sessions", {{"m", 1}}).status == 422);
    const std::string id = create(s);
    const std::string base = "/api/sessions/" + id;
    const HttpResponse unbalanced =
        call(s, "POST", base + "/situation", {{"supply", {1, 2}}, {"demand", {1, 1, 2}}});
    CHECK(unbalanced.status == 422);
    CHECK(unbalanced.body["error"] == "BalanceError");
    CHECK(call(s, "POST", base + "/situation", {{"supply", {2, 2}}, {"demand", {2, 2}}}).status ==
          422);
    CHECK(call(s, "POST", base + "/situation", situation(dms({10, 25}, {5, 15, 15}))).status == 201);
    CHECK(call(s, "GET", base + "/proposal").status == 409);
    CHECK(call(s, "POST", base + "/decision", Json::object()).status == 400);
  }

  TEST_CASE("replaying the study through the API matches the library path") {
    const StudyFixture fx = load_fixture();
    const ExperimentResult lib = run_experiment(fixture_config(fx));

    Service s;
    const std::string id = create(s, {{"mode", "assist"}});
    const std::string base = "/api/sessions/" + id;
    for (size_t k = 0; k < fx.situations.size(); ++k) {
      REQUIRE(call(s, "POST", base + "/situation", situation(fx.situations[k])).status == 201);
      const HttpResponse d =
          call(s, "POST", base + "/decision", {{"point", to_json(lib.records[k].free_vars)}});
      REQUIRE(d.status == 200);
      CHECK(max_diff(json_vec(d.body["estimate"]), *lib.records[k].estimate) <= 1e-12);
      CHECK(max_diff(json_vec(d.body["sums"]), lib.records[k].sums) <= 1e-12);
    }

    const HttpResponse est = call(s, "GET", base + "/estimate", nullptr, {{"reference", "-0.225,0.974"}});
    REQUIRE(est.status == 200);
    CHECK(est.body["history"].size() == 25);
    CHECK(est.body["references"].size() == 2);
    CHECK(est.body["convergence"].size() == 25);
    CHECK(est.body["stop"]["stop"] == true);

    REQUIRE(call(s, "POST", base + "/situation", situation(fx.polygon)).status == 201);
    const HttpResponse geo = call(s, "GET", base + "/situation");
    CHECK(geo.body["geometry"]["vertices"].size() == 5);
    CHECK(geo.body["geometry"]["classification"]["type_id"] == 16);
    const HttpResponse prop = call(s, "GET", base + "/proposal");
    REQUIRE(prop.status == 200);
    CHECK(json_vec(prop.body["vertex"]["point"]) == vec({0, 2}));

    const HttpResponse ok = call(s, "POST", base + "/approve");
    REQUIRE(ok.status == 200);
    CHECK(ok.body["step"] == 26);
    CHECK(ok.body["observation"]["chosen_free_vars"] == Json::parse("[0.0, 2.0]"));
    const Json log = call(s, "GET", base + "/log").body["events"];
    CHECK(log.size() == 1 + 2 * 26);
    CHECK(log.back()["kind"] == "approve");
  }

  TEST_CASE("correcting a proposal ingests the human's point") {
    Service s;
    const std::string base = "/api/sessions/" + create(s);
    call(s, "POST", base + "/situation", situation(dms({10, 25}, {5, 15, 15})));
    call(s, "POST", base + "/decision", {{"point", {5, 15}}});
    call(s, "POST", base + "/situation", situation(dms({5, 3}, {4, 2, 2})));
    const HttpResponse c = call(s, "POST", base + "/correct", {{"point", {2, 0}}});
    REQUIRE(c.status == 200);
    CHECK(c.body["observation"]["active_pair"] == Json::parse("[3,6]"));
    CHECK(call(s, "GET", base + "/log").body["events"].back()["kind"] == "correct");
  }

  TEST_CASE("generated situations are reproducible from the seed") {
    Service s;
    const std::string a = create(s, {{"seed", 17}});
    const std::string b = create(s, {{"seed", 17}});
    const Json ga = call(s, "POST", "/api/sessions/" + a + "/situation", {{"generate", true}}).body;
    const Json gb = call(s, "POST", "/api/sessions/" + b + "/situation", {{"generate", true}}).body;
    CHECK(ga["session"]["pending"] == gb["session"]["pending"]);
    CHECK(call(s, "GET", "/api/sessions").body["sessions"].size() == 2);
  }

  TEST_CASE("sessions persist and replay exactly") {
    const auto dir = fresh_dir("revtp-sessions");
    std::string id;
    std::shared_ptr<const SessionSnapshot> before;
    {
      Service s(dir);
      id = create(s, {{"window", 10}, {"seed", 3}});
      const std::string base = "/api/sessions/" + id;
      call(s, "POST", base + "/situation", {{"generate", true}});
      CHECK(call(s, "POST", base + "/approve").status == 409);  // nothing to propose from yet
      for (int k = 0; k < 12; ++k) {
        if (k > 0) call(s, "POST", base + "/situation", {{"generate", true}});
        const auto snap = s.session(id);
        const Prediction p = predict_plan(vec({-3, 13}), *snap->pending);
        REQUIRE(call(s, "POST", base + "/decision", {{"point", to_json(p.solution.vertex.point)}})
                    .status == 200);
      }
      call(s, "POST", base + "/situation", {{"generate", true}});
      before = s.session(id);
    }
    Service reloaded(dir);
    const auto after = reloaded.session(id);
    CHECK(after->state.count() == before->state.count());
    CHECK(after->state.sums() == before->state.sums());
    CHECK(after->state.estimate().e() == before->state.estimate().e());
    CHECK(after->window == 10);
    REQUIRE(after->pending.has_value());
    CHECK(*after->pending == *before->pending);
    CHECK(after->log == before->log);
    std::filesystem::remove_all(dir);
  }

  TEST_CASE("concurrent sessions") {
    Service s;
    std::vector<std::string> ids;
    for (int k = 0; k < 4; ++k) ids.push_back(create(s, {{"seed", k}}));
    std::atomic<int> failures{0};
    std::vector<std::thread> threads;
    for (const auto& id : ids) {
      threads.emplace_back([&, id] {
        const std::string base = "/api/sessions/" + id;
        for (int k = 0; k < 20; ++k) {
          if (call(s, "POST", base + "/situation", {{"generate", true}}).status != 201) ++failures;
          const Dms d = *s.session(id)->pending;
          const Vector p = predict_plan(vec({1, 2}), d).solution.vertex.point;
          if (call(s, "POST", base + "/decision", {{"point", to_json(p)}}).status != 200) ++failures;
        }
      });
      threads.emplace_back([&, id] {
        for (int k = 0; k < 200; ++k) {
          const auto snap = s.session(id);
          if (snap->state.count() != static_cast<int>(snap->state.history().size())) ++failures;
        }
      });
    }
    for (auto& t : threads) t.join();
    CHECK(failures == 0);
    for (const auto& id : ids) CHECK(s.session(id)->state.count() == 20);
  }

  TEST_CASE("situation geometry") {
    const Json g = situation_geometry(dms({5, 3}, {4, 2, 2}));
    CHECK(g["constraints"].size() == 6);
    CHECK(g["vertices"].size() == 5);
    CHECK(g["edges"].size() == 5);
    CHECK(g["degenerate"] == false);
    for (const auto& v : g["vertices"]) {
      CHECK(v["active_pair"].size() == 2);
      CHECK(v["plan"].size() == 2);
    }
  }

  TEST_CASE("HTTP binding") {
    Service s;
    HttpServer server(s);
    const int port = server.bind("127.0.0.1", 0);
    std::thread runner([&] { server.run(); });
    httplib::Client client("127.0.0.1", port);
    client.set_connection_timeout(std::chrono::seconds(5));
    auto health = client.Get("/api/health");
    for (int k = 0; k < 50 && !health; ++k) {
      std::this_thread::sleep_for(std::chrono::milliseconds(20));
      health = client.Get("/api/health");
    }
    REQUIRE(health);
    CHECK(health->status == 200);
    CHECK(health->get_header_value("Access-Control-Allow-Origin") == "*");

    auto created = client.Post("/api/sessions", "{}", "application/json");
    REQUIRE(created);
    CHECK(created->status == 201);
    const std::string id = Json::parse(created->body)["id"];
    auto sit = client.Post("/api/sessions/" + id + "/situation",
                           R"({"supply":[10,25],"demand":[5,15,15]})", "application/json");
    REQUIRE(sit);
    CHECK(sit->status == 201);
    auto dec = client.Post("/api/sessions/" + id + "/decision", R"({"point":[5,15]})",
                           "application/json");
    REQUIRE(dec);
    CHECK(dec->status == 200);
    CHECK(max_diff(vector_from_json(Json::parse(dec->body)["estimate"]), vec({-0.924, 0.383})) <
          5e-4);
    auto missing = client.Get("/api/sessions/unknown");
    REQUIRE(missing);
    CHECK(missing->status == 404);

    server.stop();
    runner.join();
  }
}
