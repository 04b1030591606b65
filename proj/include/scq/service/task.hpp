#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

namespace scq::service {

enum class Backend { Ideal, Calibrated };
enum class TaskStatus { Queued, Running, Done, Failed };

std::string_view to_string(Backend b) noexcept;
std::string_view to_string(TaskStatus s) noexcept;
std::optional<Backend> parse_backend(std::string_view text);
std::optional<TaskStatus> parse_status(std::string_view text);

inline constexpr std::uint64_t kDefaultShots = 3000;
inline constexpr std::uint64_t kMaxShots = 1'000'000;

/// What a user submits.
struct TaskRequest {
  std::string source;
  std::uint64_t shots = kDefaultShots;
  Backend backend = Backend::Calibrated;
  bool apply_correction = true;
  std::optional<std::uint64_t> seed;  ///< drawn at submission when absent
};

/// Milliseconds since the Unix epoch.
using Millis = std::int64_t;
using Clock = std::function<Millis()>;
Millis system_millis();

/// ISO 8601 UTC with millisecond precision.
std::string format_timestamp(Millis t);

struct TaskRecord {
  std::string id;
  std::string source;  ///< canonical assembly text forwarded to agents
  std::uint64_t shots = 0;
  Backend backend = Backend::Calibrated;
  bool apply_correction = true;
  std::uint64_t seed = 0;
  TaskStatus status = TaskStatus::Queued;
  Millis submitted_at = 0;
  std::optional<Millis> started_at;
  std::optional<Millis> finished_at;
  std::optional<std::string> result_ref;
  std::optional<std::string> error;
  std::optional<std::string> lease_owner;
  std::optional<Millis> lease_expires;
};

/// Public view (GET /api/tasks/{id}); leases are not exposed.
nlohmann::json to_json(const TaskRecord& t);

/// The payload an agent receives from GET /agent/tasks/next.
struct TaskPayload {
  std::string id;
  std::string source;
  std::uint64_t shots = 0;
  Backend backend = Backend::Calibrated;
  bool apply_correction = true;
  std::uint64_t seed = 0;
};

nlohmann::json to_json(const TaskPayload& p);
/// Throws std::invalid_argument on missing or mistyped fields.
TaskPayload payload_from_json(const nlohmann::json& j);
TaskPayload payload_of(const TaskRecord& t);

/// Random 128-bit identifier in hex.
std::string new_task_id();

}  // namespace scq::service
