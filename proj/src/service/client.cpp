#include "scq/service/client.hpp"

#include <utility>

#include <httplib.h>

namespace scq::service {

namespace {

using nlohmann::json;

[[noreturn]] void throw_api_error(const httplib::Result& res) {
  std::string message = "HTTP " + std::to_string(res->status);
  std::vector<qasm::SourceError> errors;
  std::string task_status;
  try {
    const json j = json::parse(res->body);
    if (j.contains("error")) message = j["error"].get<std::string>();
    if (j.contains("errors")) {
      for (const auto& e : j["errors"])
        errors.push_back({e.at("line").get<int>(), e.at("column").get<int>(), e.at("message").get<std::string>()});
    }
    if (j.contains("status")) task_status = j["status"].get<std::string>();
    if (j.contains("task_error") && j["task_error"].is_string()) message += ": " + j["task_error"].get<std::string>();
  } catch (const json::exception&) {
    if (!res->body.empty()) message += ": " + res->body;
  }
  throw ApiError(res->status, message, std::move(errors), std::move(task_status));
}

}  // namespace

ServiceClient::ServiceClient(std::string base_url, Options options)
    : base_url_(std::move(base_url)), options_(std::move(options)) {
  while (!base_url_.empty() && base_url_.back() == '/') base_url_.pop_back();
}

namespace {

struct Call {
  httplib::Client http;
  httplib::Headers headers;

  Call(const std::string& url, const std::string& token, int connect_timeout, int read_timeout) : http(url) {
    if (!http.is_valid()) throw NetworkError("bad server URL " + url);
    http.set_connection_timeout(connect_timeout, 0);
    http.set_read_timeout(read_timeout, 0);
    if (!token.empty()) headers.emplace("Authorization", "Bearer " + token);
  }

  httplib::Result checked(httplib::Result res, const std::string& what) {
    if (!res) throw NetworkError(what + ": " + httplib::to_string(res.error()));
    return res;
  }

  httplib::Result get(const std::string& path) { return checked(http.Get(path, headers), "GET " + path); }
  httplib::Result post(const std::string& path, const std::string& body) {
    return checked(http.Post(path, headers, body, "application/json"), "POST " + path);
  }
};

}  // namespace

std::string ServiceClient::submit(const TaskRequest& request) const {
  Call call(base_url_, options_.user_token, options_.connect_timeout_seconds, 60);
  json body = {{"source", request.source},
               {"shots", request.shots},
               {"backend", to_string(request.backend)},
               {"apply_correction", request.apply_correction}};
  if (request.seed) body["seed"] = *request.seed;
  auto res = call.post("/api/tasks", body.dump());
  if (res->status != 202) throw_api_error(res);
  return json::parse(res->body).at("id").get<std::string>();
}

json ServiceClient::task(const std::string& id) const {
  Call call(base_url_, options_.user_token, options_.connect_timeout_seconds, 60);
  auto res = call.get("/api/tasks/" + id);
  if (res->status != 200) throw_api_error(res);
  return json::parse(res->body);
}

std::string ServiceClient::result_json(const std::string& id) const {
  Call call(base_url_, options_.user_token, options_.connect_timeout_seconds, 60);
  auto res = call.get("/api/tasks/" + id + "/result");
  if (res->status != 200) throw_api_error(res);
  return res->body;
}

ResultDocument ServiceClient::result(const std::string& id) const {
  return result_from_json(json::parse(result_json(id)));
}

std::string ServiceClient::result_csv(const std::string& id) const {
  Call call(base_url_, options_.user_token, options_.connect_timeout_seconds, 60);
  auto res = call.get("/api/tasks/" + id + "/result.csv");
  if (res->status != 200) throw_api_error(res);
  return res->body;
}

std::optional<TaskPayload> ServiceClient::next(int wait_seconds) const {
  Call call(base_url_, options_.agent_token, options_.connect_timeout_seconds, wait_seconds + 30);
  call.headers.emplace("X-Agent-Id", options_.agent_name);
  auto res = call.get("/agent/tasks/next?wait=" + std::to_string(wait_seconds));
  if (res->status == 204) return std::nullopt;
  if (res->status != 200) throw_api_error(res);
  return payload_from_json(json::parse(res->body));
}

bool ServiceClient::report_result(const std::string& id, const ResultDocument& doc) const {
  Call call(base_url_, options_.agent_token, options_.connect_timeout_seconds, 60);
  call.headers.emplace("X-Agent-Id", options_.agent_name);
  auto res = call.post("/agent/tasks/" + id + "/result", json{{"result", to_json(doc)}}.dump());
  if (res->status != 200) throw_api_error(res);
  return json::parse(res->body).value("duplicate", false);
}

bool ServiceClient::report_failure(const std::string& id, const std::string& error) const {
  Call call(base_url_, options_.agent_token, options_.connect_timeout_seconds, 60);
  call.headers.emplace("X-Agent-Id", options_.agent_name);
  auto res = call.post("/agent/tasks/" + id + "/result", json{{"error", error}}.dump());
  if (res->status != 200) throw_api_error(res);
  return json::parse(res->body).value("duplicate", false);
}

}  // namespace scq::service
