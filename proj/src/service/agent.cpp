#include "scq/service/agent.hpp"

#include <chrono>
#include <thread>
#include <utility>

#include "scq/service/worker.hpp"

namespace scq::service {

Agent::Agent(ServiceClient client, DeviceSpec device, Log log)
    : client_(std::move(client)), device_(std::move(device)), log_(std::move(log)) {}

void Agent::report(const std::function<void()>& send) {
  // Reports are idempotent, so a report lost in transit can be resent.
  for (int attempt = 0;; ++attempt) {
    try {
      send();
      return;
    } catch (const NetworkError& e) {
      if (attempt == 4) throw;
      if (log_) log_(std::string("report failed, retrying: ") + e.what());
      std::this_thread::sleep_for(std::chrono::milliseconds(200 << attempt));
    }
  }
}

bool Agent::poll_once(int wait_seconds) {
  const auto task = client_.next(wait_seconds);
  if (!task) return false;
  std::optional<ResultDocument> doc;
  std::string error;
  try {
    doc = execute_task(*task, device_);
  } catch (const std::exception& e) {
    error = e.what();
  }
  if (doc) {
    try {
      report([&] { client_.report_result(task->id, *doc); });
      if (log_) log_("task " + task->id + " done");
    } catch (const ApiError& e) {
      // A refused result would otherwise bounce between agents forever.
      if (e.status() == 409) throw;
      error = std::string("result rejected: ") + e.what();
      doc.reset();
    }
  }
  if (!doc) {
    report([&] { client_.report_failure(task->id, error); });
    if (log_) log_("task " + task->id + " failed: " + error);
  }
  ++completed_;
  return true;
}

void Agent::run(const std::atomic<bool>& stop, int wait_seconds) {
  while (!stop.load()) {
    try {
      poll_once(wait_seconds);
    } catch (const std::exception& e) {
      if (log_) log_(std::string("agent: ") + e.what());
      std::this_thread::sleep_for(std::chrono::seconds(1));
    }
  }
}

}  // namespace scq::service
