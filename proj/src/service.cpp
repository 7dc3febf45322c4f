#include "revtp/service.hpp"

#include <fstream>
#include <random>
#include <sstream>

#include <httplib.h>

#include "revtp/error.hpp"
#include "revtp/simulation.hpp"

namespace revtp {

namespace {

// Request is well-formed but conflicts with the session state.
class Conflict : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotFound : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

HttpResponse error_response(int status, std::string_view name, const std::string& message) {
  return {status, {{"error", name}, {"message", message}}};
}

int status_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kParse: return 400;
    case ErrorKind::kNoObservations:
    case ErrorKind::kZeroSum: return 409;
    default: return 422;
  }
}

std::string mode_name(SessionMode mode) { return mode == SessionMode::kAssist ? "assist" : "learn"; }

SessionMode parse_mode(const std::string& s) {
  if (s == "learn") return SessionMode::kLearn;
  if (s == "assist") return SessionMode::kAssist;
  throw Error(ErrorKind::kParse, "mode must be 'learn' or 'assist'");
}

std::string new_session_id() {
  static std::mutex mutex;
  static std::mt19937_64 rng{std::random_device{}()};
  std::lock_guard lock(mutex);
  std::ostringstream os;
  os << std::hex << rng();
  return os.str();
}

std::vector<std::string> split_path(const std::string& path) {
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : path) {
    if (ch == '/') {
      if (!cur.empty()) parts.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!cur.empty()) parts.push_back(std::move(cur));
  return parts;
}

Json parse_body(const std::string& body) {
  if (body.empty()) return Json::object();
  try {
    return Json::parse(body);
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::kParse, std::string("request body is not JSON: ") + e.what());
  }
}

Json summary(const SessionSnapshot& s) {
  Json j = {{"id", s.id},
            {"m", s.m},
            {"n", s.n},
            {"mode", mode_name(s.mode)},
            {"count", s.state.count()},
            {"situations", s.situations},
            {"sums", to_json(s.state.sums())}};
  j["window"] = s.window ? Json(*s.window) : Json(nullptr);
  j["pending"] = s.pending ? to_json(*s.pending) : Json(nullptr);
  const auto& history = s.state.history();
  j["estimate"] = !history.empty() && history.back().estimate ? to_json(*history.back().estimate)
                                                              : Json(nullptr);
  return j;
}

Prediction proposal_for(const SessionSnapshot& s) {
  if (!s.pending) throw Conflict("no pending situation");
  return predict_plan(s.state.estimate().e(), *s.pending);
}

int query_int(const HttpRequest& req, const std::string& key, int fallback) {
  const auto it = req.query.find(key);
  if (it == req.query.end()) return fallback;
  try {
    return std::stoi(it->second);
  } catch (const std::logic_error&) {
    throw Error(ErrorKind::kParse, "query parameter '" + key + "' must be an integer");
  }
}

Vector parse_reference(const std::string& text) {
  std::vector<double> values;
  try {
    for (const auto& f : split_csv_line(text)) values.push_back(std::stod(f));
  } catch (const std::logic_error&) {
    throw Error(ErrorKind::kParse, "reference must be comma-separated numbers");
  }
  Vector v(values.size());
  for (size_t k = 0; k < values.size(); ++k) v[k] = values[k];
  return v;
}

}  // namespace

// ---------------------------------------------------------------------------
// Session

Session::Session(Json created, std::optional<std::filesystem::path> file)
    : file_(std::move(file)) {
  apply(created);
}

std::unique_ptr<Session> Session::replay(const std::vector<Json>& events,
                                         std::optional<std::filesystem::path> file) {
  if (events.empty()) throw Error(ErrorKind::kParse, "empty session log");
  auto session = std::make_unique<Session>(events.front(), std::nullopt);
  for (size_t k = 1; k < events.size(); ++k) session->apply(events[k]);
  session->file_ = std::move(file);
  return session;
}

std::shared_ptr<const SessionSnapshot> Session::snapshot() const {
  std::lock_guard lock(publish_mutex_);
  return current_;
}

std::shared_ptr<const SessionSnapshot> Session::apply(const Json& event) {
  std::lock_guard write(write_mutex_);
  auto next = current_ ? std::make_shared<SessionSnapshot>(*current_)
                       : std::make_shared<SessionSnapshot>();
  mutate(*next, event);
  next->log.push_back(event);
  if (file_) {
    std::ofstream out(*file_, std::ios::app);
    out << event.dump() << '\n';
    if (!out) throw std::runtime_error("cannot append to " + file_->string());
  }
  std::lock_guard publish(publish_mutex_);
  current_ = std::move(next);
  return current_;
}

void Session::mutate(SessionSnapshot& s, const Json& event) const {
  const std::string type = event.value("type", "");
  if (type == "created") {
    if (current_) throw Error(ErrorKind::kParse, "session already created");
    s.id = event.at("id").get<std::string>();
    s.m = event.value("m", 2);
    s.n = event.value("n", 3);
    if (s.m < 2 || s.n < 2) throw Error(ErrorKind::kShape, "dimensions must be at least 2x2");
    s.mode = parse_mode(event.value("mode", "learn"));
    if (event.contains("window") && !event["window"].is_null()) {
      s.window = event["window"].get<int>();
    }
    s.seed = event.value("seed", std::uint64_t{0});
    s.state = EstimateState(free_dim(s.m, s.n), s.window);
    return;
  }
  if (!current_) throw Error(ErrorKind::kParse, "session log must start with 'created'");
  if (type == "situation") {
    if (s.pending) throw Conflict("a situation is already pending");
    Dms dms = dms_from_json(event);
    if (dms.m() != s.m || dms.n() != s.n) {
      throw Error(ErrorKind::kShape, "situation does not match the session dimensions");
    }
    s.pending = std::move(dms);
    ++s.situations;
    return;
  }
  if (type == "decision") {
    if (!s.pending) throw Conflict("no pending situation to decide");
    const Vector point = vector_from_json(event.at("point"));
    s.state.ingest(make_observation(*s.pending, point, s.state.count() + 1));
    s.pending.reset();
    return;
  }
  throw Error(ErrorKind::kParse, "unknown event type '" + type + "'");
}

// ---------------------------------------------------------------------------
// Geometry

Json situation_geometry(const Dms& dms) {
  const ReducedLpp lpp = build_constraints(dms);
  const auto normals = constraint_unlvs(dms.m(), dms.n());
  Json constraints = Json::array();
  for (int k = 0; k < lpp.rows(); ++k) {
    constraints.push_back({{"label", k + 1},
                           {"lhs", to_json(Vector(lpp.lhs.row(k).transpose()))},
                           {"rhs", lpp.rhs[k]},
                           {"unlv", to_json(normals[k].e())}});
  }

  Json j = {{"dms", to_json(dms)}, {"dim", lpp.dim()}, {"constraints", constraints}};
  const std::vector<Vertex> vertices = enumerate_vertices(lpp);
  Json vs = Json::array();
  for (const auto& v : vertices) {
    Json vj = to_json(v);
    vj["plan"] = to_json(reconstruct_plan(dms, v.point).x);
    try {
      const auto pair = active_pair_at(v, lpp);
      const auto dir = observation_direction(pair, dms.m(), dms.n());
      vj["active_pair"] = pair;
      vj["obs_unlv"] = to_json(dir.direction);
      vj["weight"] = dir.weight;
    } catch (const Error& e) {
      vj["active_pair"] = nullptr;
      vj["error"] = e.name();
    }
    vs.push_back(std::move(vj));
  }
  j["vertices"] = vs;

  try {
    const TrClassification tr = classify_tr(dms);
    j["classification"] = to_json(tr);
    j["degenerate"] = false;
    Json edges = Json::array();
    for (int label : tr.active_constraints) {
      std::vector<int> ends;
      for (size_t k = 0; k < vertices.size(); ++k) {
        const auto& act = vertices[k].active_set;
        if (std::binary_search(act.begin(), act.end(), label)) ends.push_back(static_cast<int>(k));
      }
      edges.push_back({{"constraint", label}, {"vertices", ends}});
    }
    j["edges"] = edges;
  } catch (const Error& e) {
    j["classification"] = nullptr;
    j["degenerate"] = true;
    j["error"] = e.name();
    j["edges"] = Json::array();
  }
  return j;
}

// ---------------------------------------------------------------------------
// Service

Service::Service(std::optional<std::filesystem::path> data_dir) : data_dir_(std::move(data_dir)) {
  if (!data_dir_) return;
  const auto dir = *data_dir_ / "sessions";
  std::filesystem::create_directories(dir);
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() != ".jsonl") continue;
    std::ifstream in(entry.path());
    std::vector<Json> events;
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty()) events.push_back(Json::parse(line));
    }
    if (events.empty()) continue;
    std::shared_ptr<Session> session = Session::replay(events, entry.path());
    sessions_[session->snapshot()->id] = std::move(session);
  }
}

std::shared_ptr<Session> Service::find(const std::string& id) const {
  std::shared_lock lock(sessions_mutex_);
  const auto it = sessions_.find(id);
  if (it == sessions_.end()) throw NotFound("unknown session '" + id + "'");
  return it->second;
}

std::shared_ptr<const SessionSnapshot> Service::session(const std::string& id) const {
  return find(id)->snapshot();
}

HttpResponse Service::handle(const HttpRequest& request) {
  try {
    return route(request);
  } catch (const NotFound& e) {
    return error_response(404, "NotFound", e.what());
  } catch (const Conflict& e) {
    return error_response(409, "Conflict", e.what());
  } catch (const Error& e) {
    return error_response(status_for(e.kind()), e.name(), e.what());
  } catch (const Json::exception& e) {
    return error_response(400, "ParseError", e.what());
  } catch (const std::exception& e) {
    return error_response(500, "InternalError", e.what());
  }
}

HttpResponse Service::create_session(const Json& body) {
  Json created = {{"type", "created"},
                  {"id", new_session_id()},
                  {"m", body.value("m", 2)},
                  {"n", body.value("n", 3)},
                  {"mode", body.value("mode", "learn")},
                  {"seed", body.value("seed", std::uint64_t{0})}};
  created["window"] = body.contains("window") ? body["window"] : Json(nullptr);
  const std::string id = created["id"];
  std::optional<std::filesystem::path> file;
  if (data_dir_) file = *data_dir_ / "sessions" / (id + ".jsonl");
  auto session = std::make_shared<Session>(created, file);
  {
    std::unique_lock lock(sessions_mutex_);
    sessions_[id] = session;
  }
  return {201, summary(*session->snapshot())};
}

HttpResponse Service::route(const HttpRequest& req) {
  const auto parts = split_path(req.path);
  const bool get = req.method == "GET";
  const bool post = req.method == "POST";
  if (parts.empty() || parts[0] != "api") throw NotFound("no route for " + req.path);

  if (parts.size() == 2 && parts[1] == "health" && get) return {200, {{"status", "ok"}}};
  if (parts.size() == 2 && parts[1] == "catalogue" && get) {
    Json rows = Json::array();
    for (const auto& r : informativeness_report(2, 3)) {
      rows.push_back({{"type_id", r.type_id},
                      {"picture", r.picture},
                      {"active_constraints", r.active_constraints},
                      {"vertex_ranks", r.vertex_ranks},
                      {"general_rank", r.general_rank},
                      {"average_rank", r.average_rank},
                      {"average_weight", r.average_weight},
                      {"group_id", r.group_id}});
    }
    return {200, rows};
  }
  if (parts.size() == 2 && parts[1] == "spectrum" && get) {
    const int m = query_int(req, "m", 2);
    const int n = query_int(req, "n", 3);
    Json normals = Json::array();
    for (const auto& u : constraint_unlvs(m, n)) normals.push_back(to_json(u.e()));
    Json pairs = Json::array();
    for (const auto& p : nonparallel_pairs(m, n)) {
      const SpectrumPair info = pair_info(p, m, n);
      pairs.push_back({{"pair", info.pair},
                       {"angle", info.angle},
                       {"sum_unlv", to_json(info.sum_unlv)},
                       {"sum_length", info.sum_length},
                       {"rank", info.rank},
                       {"weight", info.weight}});
    }
    return {200, {{"m", m}, {"n", n}, {"constraint_unlvs", normals}, {"pairs", pairs}}};
  }

  if (parts.size() < 2 || parts[1] != "sessions") throw NotFound("no route for " + req.path);
  if (parts.size() == 2) {
    if (post) return create_session(parse_body(req.body));
    if (get) {
      std::shared_lock lock(sessions_mutex_);
      Json ids = Json::array();
      for (const auto& [id, s] : sessions_) ids.push_back(id);
      return {200, {{"sessions", ids}}};
    }
    return error_response(405, "MethodNotAllowed", req.method + " " + req.path);
  }

  const std::shared_ptr<Session> session = find(parts[2]);
  if (parts.size() == 3 && get) return {200, summary(*session->snapshot())};
  if (parts.size() != 4) throw NotFound("no route for " + req.path);
  const std::string& action = parts[3];

  if (action == "situation" && post) {
    const Json body = parse_body(req.body);
    Json event = {{"type", "situation"}};
    if (body.value("generate", false)) {
      const auto snap = session->snapshot();
      ValueRange range;
      if (body.contains("range")) range = {body["range"].at(0).get<int>(), body["range"].at(1).get<int>()};
      std::mt19937_64 rng(snap->seed + static_cast<std::uint64_t>(snap->situations));
      const Dms dms = gen_dms(rng, snap->m, snap->n, range);
      event["supply"] = to_json(dms.supply());
      event["demand"] = to_json(dms.demand());
      event["source"] = "generated";
    } else {
      event["supply"] = body.at("supply");
      event["demand"] = body.at("demand");
      event["source"] = "manual";
    }
    const auto snap = session->apply(event);
    return {201, {{"session", summary(*snap)}, {"geometry", situation_geometry(*snap->pending)}}};
  }
  if (action == "situation" && get) {
    const auto snap = session->snapshot();
    if (!snap->pending) throw Conflict("no pending situation");
    return {200, {{"session", summary(*snap)}, {"geometry", situation_geometry(*snap->pending)}}};
  }

  auto decide = [&](const Vector& point, const std::string& kind) -> HttpResponse {
    const Json event = {{"type", "decision"}, {"kind", kind}, {"point", to_json(point)}};
    const auto snap = session->apply(event);
    Json body = {{"session", summary(*snap)},
                 {"observation", to_json(snap->state.observations().back())},
                 {"step", snap->state.count()},
                 {"sums", to_json(snap->state.sums())}};
    body["estimate"] = snap->state.history().back().estimate
                           ? to_json(*snap->state.history().back().estimate)
                           : Json(nullptr);
    return {200, body};
  };

  if ((action == "decision" || action == "correct") && post) {
    const Json body = parse_body(req.body);
    return decide(vector_from_json(body.at("point")), action == "decision" ? "decide" : "correct");
  }
  if (action == "approve" && post) {
    return decide(proposal_for(*session->snapshot()).solution.vertex.point, "approve");
  }
  if (action == "proposal" && get) {
    const auto snap = session->snapshot();
    const Prediction p = proposal_for(*snap);
    return {200,
            {{"vertex", to_json(p.solution.vertex)},
             {"active_pair", p.solution.active_pair},
             {"value", p.solution.value},
             {"plan", to_json(p.plan.x)},
             {"estimate", to_json(snap->state.estimate().e())}}};
  }
  if (action == "estimate" && get) {
    const auto snap = session->snapshot();
    Json refs = Json::array();
    std::vector<Vector> vectors;
    const auto& history = snap->state.history();
    if (!history.empty() && history.back().estimate && snap->m == 2 && snap->n == 3) {
      vectors.push_back(nearest_polygon_vector(*history.back().estimate, 2, 3));
      refs.push_back({{"name", "polygon"}, {"vector", to_json(vectors.back())}});
    }
    if (req.query.count("reference")) {
      vectors.push_back(parse_reference(req.query.at("reference")));
      refs.push_back({{"name", "reference"}, {"vector", to_json(vectors.back())}});
    }
    Json series = Json::array();
    for (const auto& row : convergence(snap->state, vectors)) {
      Json r = Json::array();
      for (double v : row) r.push_back(std::isfinite(v) ? Json(v) : Json(nullptr));
      series.push_back(std::move(r));
    }
    const StopDecision stop = should_stop(snap->state);
    return {200,
            {{"history", estimate_json(snap->state)},
             {"references", refs},
             {"convergence", series},
             {"stop",
              {{"stop", stop.stop},
               {"mean_change", stop.mean_change},
               {"std_change", stop.std_change},
               {"samples", stop.samples}}}}};
  }
  if (action == "log" && get) return {200, {{"events", session->snapshot()->log}}};

  throw NotFound("no route for " + req.method + " " + req.path);
}

struct HttpServer::Impl {
  httplib::Server server;
};

HttpServer::HttpServer(Service& service) : impl_(std::make_unique<Impl>()) {
  auto handler = [&service](const httplib::Request& req, httplib::Response& res) {
    HttpRequest request{req.method, req.path, {}, req.body};
    for (const auto& [k, v] : req.params) request.query[k] = v;
    const HttpResponse response = service.handle(request);
    res.status = response.status;
    res.set_header("Access-Control-Allow-Origin", "*");
    res.set_content(response.body.dump(), "application/json");
  };
  impl_->server.Get(".*", handler);
  impl_->server.Post(".*", handler);
  impl_->server.Options(".*", [](const httplib::Request&, httplib::Response& res) {
    res.set_header("Access-Control-Allow-Origin", "*");
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
    res.status = 204;
  });
}

HttpServer::~HttpServer() = default;

int HttpServer::bind(const std::string& host, int port) {
  const int bound = port == 0 ? impl_->server.bind_to_any_port(host)
                              : (impl_->server.bind_to_port(host, port) ? port : -1);
  if (bound < 0) {
    throw std::runtime_error("cannot listen on " + host + ":" + std::to_string(port));
  }
  return bound;
}

void HttpServer::run() { impl_->server.listen_after_bind(); }

void HttpServer::stop() { impl_->server.stop(); }

void serve(Service& service, const std::string& host, int port) {
  HttpServer server(service);
  server.bind(host, port);
  server.run();
}

}  // namespace revtp
