#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "scq/qasm.hpp"
#include "scq/service/result_document.hpp"
#include "scq/service/task.hpp"

namespace scq::service {

/// The server could not be reached or the connection broke.
class NetworkError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// The server answered with an error status.
class ApiError : public std::runtime_error {
public:
  ApiError(int status, const std::string& message, std::vector<qasm::SourceError> errors = {},
           std::string task_status = {})
      : std::runtime_error(message), status_(status), errors_(std::move(errors)),
        task_status_(std::move(task_status)) {}

  int status() const noexcept { return status_; }
  /// Located diagnostics of a rejected submission.
  const std::vector<qasm::SourceError>& errors() const noexcept { return errors_; }
  /// Task status carried by a 409 "result not ready" answer.
  const std::string& task_status() const noexcept { return task_status_; }

private:
  int status_;
  std::vector<qasm::SourceError> errors_;
  std::string task_status_;
};

/// Blocking HTTP client for both the user and the agent side of the API.
/// Each call opens its own connection, so one instance may be shared across
/// threads.
class ServiceClient {
public:
  struct Options {
    std::string user_token;
    std::string agent_token;
    std::string agent_name = "agent";
    int connect_timeout_seconds = 5;
  };

  /// `base_url` like "http://127.0.0.1:8080".
  explicit ServiceClient(std::string base_url, Options options);
  explicit ServiceClient(std::string base_url) : ServiceClient(std::move(base_url), Options{}) {}

  const std::string& base_url() const noexcept { return base_url_; }

  /// Returns the task id.
  std::string submit(const TaskRequest& request) const;
  nlohmann::json task(const std::string& id) const;
  /// Throws ApiError 409 with task_status() while the task is not Done.
  ResultDocument result(const std::string& id) const;
  std::string result_json(const std::string& id) const;
  std::string result_csv(const std::string& id) const;

  std::optional<TaskPayload> next(int wait_seconds) const;
  /// Returns true for a duplicate of an earlier identical report.
  bool report_result(const std::string& id, const ResultDocument& doc) const;
  bool report_failure(const std::string& id, const std::string& error) const;

private:
  std::string base_url_;
  Options options_;
};

}  // namespace scq::service
