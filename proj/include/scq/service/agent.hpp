#pragma once

#include <atomic>
#include <functional>
#include <string>

#include "scq/device.hpp"
#include "scq/service/client.hpp"

namespace scq::service {

/// Worker colocated with the simulated QPU: pulls tasks from the service,
/// runs them and reports pretreated results.
class Agent {
public:
  using Log = std::function<void(const std::string&)>;

  Agent(ServiceClient client, DeviceSpec device, Log log = {});

  /// One long poll of up to `wait_seconds`. Runs and reports the task that
  /// arrives, if any; returns whether one did. Network errors propagate.
  bool poll_once(int wait_seconds);

  /// Polls until `stop` is set. Network errors are logged and retried after
  /// a pause.
  void run(const std::atomic<bool>& stop, int wait_seconds = 20);

  std::size_t completed() const noexcept { return completed_; }

private:
  void report(const std::function<void()>& send);

  ServiceClient client_;
  DeviceSpec device_;
  Log log_;
  std::size_t completed_ = 0;
};

}  // namespace scq::service
