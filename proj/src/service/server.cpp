#include "scq/service/server.hpp"

#include <algorithm>
#include <chrono>
#include <stdexcept>
#include <utility>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "scq/service/result_document.hpp"

namespace scq::service {

namespace {

using nlohmann::json;

constexpr int kMaxWaitSeconds = 60;

void reply(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void fail(httplib::Response& res, int status, std::string message) {
  reply(res, status, {{"error", std::move(message)}});
}

json errors_json(const std::vector<qasm::SourceError>& errors) {
  json out = json::array();
  for (const auto& e : errors) out.push_back({{"line", e.line}, {"column", e.column}, {"message", e.message}});
  return out;
}

bool authorized(const httplib::Request& req, const std::string& token) {
  if (token.empty()) return true;
  return req.get_header_value("Authorization") == "Bearer " + token;
}

/// Parses POST /api/tasks; throws std::invalid_argument on bad fields.
TaskRequest parse_submit(const std::string& body) {
  json j;
  try {
    j = json::parse(body);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("body is not JSON: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("body must be a JSON object");
  TaskRequest r;
  try {
    r.source = j.at("source").get<std::string>();
    if (j.contains("shots")) {
      if (!j["shots"].is_number_integer()) throw std::invalid_argument("shots must be an integer");
      const auto shots = j["shots"].get<long long>();
      r.shots = shots < 0 ? 0 : static_cast<std::uint64_t>(shots);
    }
    if (j.contains("backend")) {
      const auto b = parse_backend(j["backend"].get<std::string>());
      if (!b) throw std::invalid_argument("backend must be \"ideal\" or \"calibrated\"");
      r.backend = *b;
    }
    if (j.contains("apply_correction")) r.apply_correction = j["apply_correction"].get<bool>();
    if (j.contains("seed") && !j["seed"].is_null()) r.seed = j["seed"].get<std::uint64_t>();
  } catch (const json::exception& e) {
    throw std::invalid_argument(e.what());
  }
  return r;
}

}  // namespace

HttpServer::HttpServer(TaskService& service, ServerOptions options)
    : service_(service), options_(std::move(options)), http_(std::make_unique<httplib::Server>()) {
  install_routes();
}

HttpServer::~HttpServer() { stop(); }

void HttpServer::install_routes() {
  httplib::Server& s = *http_;
  s.set_payload_max_length(kMaxReportBytes);
  s.new_task_queue = [] { return new httplib::ThreadPool(16); };

  auto user = [this](auto handler) {
    return [this, handler](const httplib::Request& req, httplib::Response& res) {
      if (!authorized(req, options_.user_token)) return fail(res, 401, "missing or wrong token");
      handler(req, res);
    };
  };
  auto agent = [this](auto handler) {
    return [this, handler](const httplib::Request& req, httplib::Response& res) {
      if (!authorized(req, options_.agent_token)) return fail(res, 401, "missing or wrong agent token");
      std::string name = req.get_header_value("X-Agent-Id");
      if (name.empty()) name = "agent";
      handler(req, res, name);
    };
  };

  s.Get("/healthz", [](const httplib::Request&, httplib::Response& res) { res.set_content("ok\n", "text/plain"); });

  s.Post("/api/tasks", user([this](const httplib::Request& req, httplib::Response& res) {
    // Escaping can at most double a typical source; the exact limit is on
    // the decoded source below.
    if (req.body.size() > 2 * kMaxSourceBytes + 4096) return fail(res, 413, "request body too large");
    TaskRequest request;
    try {
      request = parse_submit(req.body);
    } catch (const std::invalid_argument& e) {
      return fail(res, 400, e.what());
    }
    const SubmitOutcome out = service_.submit(request);
    if (const auto* task = std::get_if<TaskRecord>(&out)) {
      res.set_header("Location", "/api/tasks/" + task->id);
      return reply(res, 202, {{"id", task->id}, {"status", to_string(task->status)}});
    }
    const auto& r = std::get<Rejection>(out);
    const int status = r.kind == Rejection::Kind::TooLarge ? 413 : r.kind == Rejection::Kind::BadRequest ? 400 : 422;
    reply(res, status, {{"error", r.message}, {"errors", errors_json(r.errors)}});
  }));

  s.Get(R"(/api/tasks/([0-9A-Za-z_-]+)/result\.csv)", user([this](const httplib::Request& req, httplib::Response& res) {
    const auto found = service_.result(req.matches[1]);
    if (!found.task) return fail(res, 404, "unknown task");
    if (!found.document) {
      return reply(res, 409, {{"error", "result not ready"}, {"status", to_string(found.task->status)},
                              {"task_error", found.task->error ? json(*found.task->error) : json(nullptr)}});
    }
    const ResultDocument doc = result_from_json(json::parse(*found.document));
    res.set_content(to_csv(doc), "text/csv");
  }));

  s.Get(R"(/api/tasks/([0-9A-Za-z_-]+)/result)", user([this](const httplib::Request& req, httplib::Response& res) {
    const auto found = service_.result(req.matches[1]);
    if (!found.task) return fail(res, 404, "unknown task");
    if (!found.document) {
      return reply(res, 409, {{"error", "result not ready"}, {"status", to_string(found.task->status)},
                              {"task_error", found.task->error ? json(*found.task->error) : json(nullptr)}});
    }
    res.set_content(*found.document, "application/json");
  }));

  s.Get(R"(/api/tasks/([0-9A-Za-z_-]+))", user([this](const httplib::Request& req, httplib::Response& res) {
    const auto task = service_.task(req.matches[1]);
    if (!task) return fail(res, 404, "unknown task");
    reply(res, 200, to_json(*task));
  }));

  s.Get("/agent/tasks/next", agent([this](const httplib::Request& req, httplib::Response& res, const std::string& name) {
    int wait = 0;
    if (req.has_param("wait")) {
      try {
        wait = std::stoi(req.get_param_value("wait"));
      } catch (const std::exception&) {
        return fail(res, 400, "wait must be an integer number of seconds");
      }
    }
    wait = std::clamp(wait, 0, kMaxWaitSeconds);
    const auto payload = service_.next(name, std::chrono::seconds(wait));
    if (!payload) {
      res.status = 204;
      return;
    }
    reply(res, 200, to_json(*payload));
  }));

  s.Post(R"(/agent/tasks/([0-9A-Za-z_-]+)/result)",
         agent([this](const httplib::Request& req, httplib::Response& res, const std::string& name) {
           const std::string id = req.matches[1];
           json body;
           try {
             body = json::parse(req.body);
           } catch (const json::exception& e) {
             return fail(res, 400, std::string("body is not JSON: ") + e.what());
           }
           ReportOutcome outcome;
           try {
             if (body.contains("result")) {
               outcome = service_.report_result(id, name, body["result"].dump());
             } else if (body.contains("error") && body["error"].is_string()) {
               outcome = service_.report_failure(id, name, body["error"].get<std::string>());
             } else {
               return fail(res, 400, "report needs \"result\" or \"error\"");
             }
           } catch (const std::invalid_argument& e) {
             return fail(res, 400, e.what());
           }
           switch (outcome) {
             case ReportOutcome::NotFound: return fail(res, 404, "unknown task");
             case ReportOutcome::LeaseMismatch: return fail(res, 409, "task is not leased to " + name);
             case ReportOutcome::Accepted:
             case ReportOutcome::Duplicate: {
               const auto task = service_.task(id);
               return reply(res, 200, {{"status", to_string(task->status)},
                                       {"duplicate", outcome == ReportOutcome::Duplicate}});
             }
           }
         }));

  if (options_.static_dir) s.set_mount_point("/", options_.static_dir->string());

  s.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
    std::string what = "internal error";
    try {
      std::rethrow_exception(ep);
    } catch (const std::exception& e) {
      what = e.what();
    } catch (...) {
    }
    fail(res, 500, what);
  });
}

int HttpServer::start(const std::string& host, int port) {
  const int bound = port == 0 ? http_->bind_to_any_port(host) : (http_->bind_to_port(host, port) ? port : -1);
  if (bound < 0) throw std::runtime_error("cannot bind " + host + ":" + std::to_string(port));
  thread_ = std::thread([this] { http_->listen_after_bind(); });
  http_->wait_until_ready();
  return bound;
}

void HttpServer::run(const std::string& host, int port) {
  if (!http_->listen(host, port)) throw std::runtime_error("cannot listen on " + host + ":" + std::to_string(port));
}

void HttpServer::stop() {
  service_.shutdown();
  if (http_) http_->stop();
  if (thread_.joinable()) thread_.join();
}

}  // namespace scq::service
