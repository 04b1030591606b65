#pragma once

#include <cstddef>
#include <filesystem>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>

#include "scq/service/task.hpp"

struct sqlite3;

namespace scq::service {

class StoreError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

enum class ReportOutcome {
  Accepted,       ///< task moved to Done/Failed
  Duplicate,      ///< identical report already stored; nothing changed
  NotFound,
  LeaseMismatch,  ///< task not Running or leased to someone else
};

/// Durable task table in one SQLite file (write-ahead log, full sync).
///
/// All methods are thread-safe. Every state change is a single transaction,
/// so a crash leaves each task either before or after the transition.
class TaskStore {
public:
  /// Opens or creates the store; ":memory:" gives a private in-memory one.
  explicit TaskStore(const std::filesystem::path& path);
  ~TaskStore();
  TaskStore(const TaskStore&) = delete;
  TaskStore& operator=(const TaskStore&) = delete;

  /// Throws StoreError if the id already exists.
  void insert(const TaskRecord& task);
  std::optional<TaskRecord> get(const std::string& id) const;

  /// Returns Running tasks whose lease ended before `now` to the queue.
  int requeue_expired(Millis now);

  /// Requeues expired leases, then moves the oldest Queued task to Running
  /// under a lease for `agent` until now + lease.
  std::optional<TaskRecord> claim_next(const std::string& agent, Millis now, Millis lease);

  /// Completes a task leased to `agent` with exactly one of `result` (a
  /// serialized ResultDocument) or `error`.
  ReportOutcome finish(const std::string& id, const std::string& agent, Millis now,
                       const std::optional<std::string>& result,
                       const std::optional<std::string>& error);

  /// Stored result document text of a Done task.
  std::optional<std::string> result(const std::string& id) const;

  std::size_t count(TaskStatus status) const;

private:
  sqlite3* db_ = nullptr;
  mutable std::mutex mutex_;
};

}  // namespace scq::service
