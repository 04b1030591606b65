#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <thread>

#include "scq/service/task_service.hpp"

namespace httplib {
class Server;
}

namespace scq::service {

/// Upper bound on any request body. Agent reports carry dense tables and
/// are far larger than submissions.
inline constexpr std::size_t kMaxReportBytes = std::size_t{64} << 20;

struct ServerOptions {
  std::string agent_token;  ///< required as "Authorization: Bearer …" on /agent/*
  std::string user_token;   ///< required on /api/* when non-empty
  std::optional<std::filesystem::path> static_dir;
};

/// HTTP+JSON front of a TaskService:
///
///     POST /api/tasks                     submit
///     GET  /api/tasks/{id}                task view
///     GET  /api/tasks/{id}/result         ResultDocument JSON
///     GET  /api/tasks/{id}/result.csv     CSV rendering
///     GET  /agent/tasks/next?wait=S       long poll (agent)
///     POST /agent/tasks/{id}/result       report (agent)
///
/// Agents name themselves with the X-Agent-Id header.
class HttpServer {
public:
  HttpServer(TaskService& service, ServerOptions options);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds and serves on a background thread; returns the bound port.
  /// Throws std::runtime_error if binding fails.
  int start(const std::string& host, int port);

  /// Blocks serving on the calling thread until stop() is called elsewhere.
  void run(const std::string& host, int port);

  void stop();

private:
  void install_routes();

  TaskService& service_;
  ServerOptions options_;
  std::unique_ptr<httplib::Server> http_;
  std::thread thread_;
};

}  // namespace scq::service
