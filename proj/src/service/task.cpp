#include "scq/service/task.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <mutex>
#include <random>
#include <stdexcept>

#include "scq/rng.hpp"

namespace scq::service {

std::string_view to_string(Backend b) noexcept {
  return b == Backend::Ideal ? "ideal" : "calibrated";
}

std::string_view to_string(TaskStatus s) noexcept {
  switch (s) {
    case TaskStatus::Queued: return "queued";
    case TaskStatus::Running: return "running";
    case TaskStatus::Done: return "done";
    case TaskStatus::Failed: return "failed";
  }
  return "unknown";
}

std::optional<Backend> parse_backend(std::string_view text) {
  if (text == "ideal") return Backend::Ideal;
  if (text == "calibrated") return Backend::Calibrated;
  return std::nullopt;
}

std::optional<TaskStatus> parse_status(std::string_view text) {
  for (TaskStatus s : {TaskStatus::Queued, TaskStatus::Running, TaskStatus::Done, TaskStatus::Failed})
    if (to_string(s) == text) return s;
  return std::nullopt;
}

Millis system_millis() {
  using namespace std::chrono;
  return duration_cast<milliseconds>(system_clock::now().time_since_epoch()).count();
}

std::string format_timestamp(Millis t) {
  const std::time_t secs = static_cast<std::time_t>(t / 1000);
  std::tm tm{};
  gmtime_r(&secs, &tm);
  char buf[40];
  const std::size_t len = std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%S", &tm);
  std::snprintf(buf + len, sizeof buf - len, ".%03dZ", static_cast<int>(t % 1000));
  return buf;
}

nlohmann::json to_json(const TaskRecord& t) {
  auto stamp = [](const std::optional<Millis>& m) -> nlohmann::json {
    return m ? nlohmann::json(format_timestamp(*m)) : nlohmann::json(nullptr);
  };
  return {
      {"id", t.id},
      {"status", to_string(t.status)},
      {"source", t.source},
      {"shots", t.shots},
      {"backend", to_string(t.backend)},
      {"apply_correction", t.apply_correction},
      {"seed", t.seed},
      {"submitted_at", format_timestamp(t.submitted_at)},
      {"started_at", stamp(t.started_at)},
      {"finished_at", stamp(t.finished_at)},
      {"result_ref", t.result_ref ? nlohmann::json(*t.result_ref) : nlohmann::json(nullptr)},
      {"error", t.error ? nlohmann::json(*t.error) : nlohmann::json(nullptr)},
  };
}

nlohmann::json to_json(const TaskPayload& p) {
  return {{"id", p.id},
          {"source", p.source},
          {"shots", p.shots},
          {"backend", to_string(p.backend)},
          {"apply_correction", p.apply_correction},
          {"seed", p.seed}};
}

TaskPayload payload_from_json(const nlohmann::json& j) {
  try {
    TaskPayload p;
    p.id = j.at("id").get<std::string>();
    p.source = j.at("source").get<std::string>();
    p.shots = j.at("shots").get<std::uint64_t>();
    const auto backend = parse_backend(j.at("backend").get<std::string>());
    if (!backend) throw std::invalid_argument("unknown backend");
    p.backend = *backend;
    p.apply_correction = j.at("apply_correction").get<bool>();
    p.seed = j.at("seed").get<std::uint64_t>();
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("bad task payload: ") + e.what());
  }
}

TaskPayload payload_of(const TaskRecord& t) {
  return {t.id, t.source, t.shots, t.backend, t.apply_correction, t.seed};
}

std::string new_task_id() {
  static std::mutex mutex;
  static SplitMix64 rng = [] {
    std::random_device rd;
    const std::uint64_t seed = (std::uint64_t{rd()} << 32) ^ rd() ^
                               static_cast<std::uint64_t>(system_millis());
    return SplitMix64(seed);
  }();
  std::lock_guard lock(mutex);
  char buf[33];
  std::snprintf(buf, sizeof buf, "%016llx%016llx", static_cast<unsigned long long>(rng.next()),
                static_cast<unsigned long long>(rng.next()));
  return buf;
}

}  // namespace scq::service
