#pragma once

#include <chrono>
#include <condition_variable>
#include <cstddef>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "scq/device.hpp"
#include "scq/qasm.hpp"
#include "scq/service/task.hpp"
#include "scq/service/task_store.hpp"

namespace scq::service {

inline constexpr std::size_t kMaxSourceBytes = std::size_t{1} << 20;

/// Why a submission was turned away.
struct Rejection {
  enum class Kind {
    TooLarge,    ///< source over the size limit
    BadRequest,  ///< shots out of range and similar request errors
    Invalid,     ///< the program does not parse or does not fit the device
  };
  Kind kind = Kind::Invalid;
  std::string message;
  std::vector<qasm::SourceError> errors;
};

using SubmitOutcome = std::variant<TaskRecord, Rejection>;

/// The admission checks of `TaskService::submit`: size, shot range, syntax,
/// device fit and a trailing measure. Returns the parsed circuit.
std::variant<Circuit, Rejection> check_submission(const TaskRequest& request, const DeviceSpec& device);

/// A rejected submission outside the HTTP path.
class SubmissionRejected : public std::runtime_error {
public:
  explicit SubmissionRejected(Rejection r) : std::runtime_error(r.message), rejection_(std::move(r)) {}
  const Rejection& rejection() const noexcept { return rejection_; }

private:
  Rejection rejection_;
};

/// Result lookup: the task (if it exists) plus its document once Done.
struct ResultLookup {
  std::optional<TaskRecord> task;
  std::optional<std::string> document;
};

/// Transport-independent core of the task service. The HTTP server is a thin
/// adapter over it, and tests drive it directly.
class TaskService {
public:
  struct Options {
    std::chrono::milliseconds lease{std::chrono::seconds(300)};
  };

  TaskService(TaskStore& store, DeviceSpec device, Options options, Clock clock = system_millis);

  const DeviceSpec& device() const noexcept { return device_; }
  const Options& options() const noexcept { return options_; }

  /// Parses and validates against the device, then persists the task as
  /// Queued before returning it.
  SubmitOutcome submit(const TaskRequest& request);

  std::optional<TaskRecord> task(const std::string& id) const;
  ResultLookup result(const std::string& id) const;

  /// Long poll: leases the oldest queued task to `agent`, waiting up to
  /// `wait` for one to arrive.
  std::optional<TaskPayload> next(const std::string& agent, std::chrono::milliseconds wait);

  /// Stores a serialized ResultDocument for a leased task. Throws
  /// std::invalid_argument if the document is malformed or names another
  /// task.
  ReportOutcome report_result(const std::string& id, const std::string& agent,
                              const std::string& document);
  ReportOutcome report_failure(const std::string& id, const std::string& agent,
                               const std::string& error);

  /// Wakes every waiting poller with an empty answer.
  void shutdown();

private:
  TaskStore& store_;
  DeviceSpec device_;
  Options options_;
  Clock clock_;
  std::mutex mutex_;
  std::condition_variable queued_;
  std::uint64_t generation_ = 0;
  bool stopping_ = false;
};

}  // namespace scq::service
