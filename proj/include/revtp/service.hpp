#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "revtp/estimator.hpp"
#include "revtp/io.hpp"

namespace revtp {

enum class SessionMode { kLearn, kAssist };

/// Immutable view of a session at one point of its event log.
struct SessionSnapshot {
  std::string id;
  int m = 2;
  int n = 3;
  SessionMode mode = SessionMode::kLearn;
  std::optional<int> window;
  std::uint64_t seed = 0;
  int situations = 0;  // situations submitted so far
  std::optional<Dms> pending;
  EstimateState state{2};
  std::vector<Json> log;
};

/// One decision-taker session. The event log (created / situation /
/// decision) is the source of truth: every mutation is validated, appended to
/// the log (and the session file, when persistent), then published as a new
/// snapshot. Writers are serialized; readers take the published snapshot.
class Session {
 public:
  /// Replays `events`; throws revtp::Error if any event is invalid.
  static std::unique_ptr<Session> replay(const std::vector<Json>& events,
                                         std::optional<std::filesystem::path> file);

  Session(Json created, std::optional<std::filesystem::path> file);

  std::shared_ptr<const SessionSnapshot> snapshot() const;

  /// Applies and records one event; returns the snapshot after it.
  std::shared_ptr<const SessionSnapshot> apply(const Json& event);

 private:
  void mutate(SessionSnapshot& s, const Json& event) const;

  std::mutex write_mutex_;
  mutable std::mutex publish_mutex_;
  std::shared_ptr<const SessionSnapshot> current_;
  std::optional<std::filesystem::path> file_;
};

struct HttpRequest {
  std::string method;
  std::string path;
  std::map<std::string, std::string> query;
  std::string body;
};

struct HttpResponse {
  int status = 200;
  Json body;
};

/// JSON service behind the decision console. Transport-independent: serve()
/// binds it to HTTP, tests call handle() directly.
class Service {
 public:
  /// Sessions persist as <data_dir>/sessions/<id>.jsonl when a directory is
  /// given; existing files are replayed on construction.
  explicit Service(std::optional<std::filesystem::path> data_dir = std::nullopt);

  HttpResponse handle(const HttpRequest& request);

  std::shared_ptr<const SessionSnapshot> session(const std::string& id) const;

 private:
  std::shared_ptr<Session> find(const std::string& id) const;
  HttpResponse route(const HttpRequest& request);
  HttpResponse create_session(const Json& body);

  std::optional<std::filesystem::path> data_dir_;
  mutable std::shared_mutex sessions_mutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
};

/// Geometry of a situation's region for display: constraints, vertices with
/// their active sets, adjacent pairs, observation vectors and full plans,
/// edges, and the region classification.
Json situation_geometry(const Dms& dms);

/// HTTP binding of a Service. JSON bodies, permissive CORS for the console.
class HttpServer {
 public:
  explicit HttpServer(Service& service);
  ~HttpServer();

  /// Binds host:port (port 0 picks a free one); returns the bound port.
  int bind(const std::string& host, int port);
  /// Serves until stop() is called from another thread.
  void run();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Blocking HTTP server on host:port.
void serve(Service& service, const std::string& host, int port);

}  // namespace revtp
