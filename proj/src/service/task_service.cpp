#include "scq/service/task_service.hpp"

#include <random>
#include <stdexcept>
#include <utility>

#include "scq/service/result_document.hpp"
#include "scq/simulator.hpp"

namespace scq::service {

namespace {

Rejection reject(Rejection::Kind kind, std::string message, std::vector<qasm::SourceError> errors = {}) {
  return {kind, std::move(message), std::move(errors)};
}

// Kept below 2^53 so JavaScript clients read the seed back exactly.
std::uint64_t fresh_seed() {
  std::random_device rd;
  return ((std::uint64_t{rd()} << 32) ^ rd()) & ((std::uint64_t{1} << 53) - 1);
}

}  // namespace

TaskService::TaskService(TaskStore& store, DeviceSpec device, Options options, Clock clock)
    : store_(store), device_(std::move(device)), options_(options), clock_(std::move(clock)) {}

std::variant<Circuit, Rejection> check_submission(const TaskRequest& request, const DeviceSpec& device) {
  if (request.source.size() > kMaxSourceBytes) {
    return reject(Rejection::Kind::TooLarge, "source exceeds " + std::to_string(kMaxSourceBytes) + " bytes");
  }
  if (request.shots < 1 || request.shots > kMaxShots) {
    return reject(Rejection::Kind::BadRequest, "shots must lie in [1, " + std::to_string(kMaxShots) + "]");
  }
  qasm::ParseResult parsed = qasm::parse(request.source);
  if (!parsed.ok()) return reject(Rejection::Kind::Invalid, "syntax errors", std::move(parsed.errors));
  if (auto errors = qasm::check_device(parsed, device); !errors.empty()) {
    return reject(Rejection::Kind::Invalid, "program does not fit the device", std::move(errors));
  }
  if (parsed.circuit->measured().empty()) {
    const int line = parsed.gate_positions.empty() ? 1 : parsed.gate_positions.back().line;
    return reject(Rejection::Kind::Invalid, "nothing to return",
                  {{line, 1, "program has no measure statement"}});
  }
  if (parsed.circuit->num_qubits() > kMaxStateQubits) {
    return reject(Rejection::Kind::Invalid, "program too wide",
                  {{1, 1, "simulator supports at most " + std::to_string(kMaxStateQubits) + " qubits"}});
  }
  return std::move(*parsed.circuit);
}

SubmitOutcome TaskService::submit(const TaskRequest& request) {
  auto checked = check_submission(request, device_);
  if (auto* r = std::get_if<Rejection>(&checked)) return std::move(*r);
  const Circuit& circuit = std::get<Circuit>(checked);

  TaskRecord task;
  task.id = new_task_id();
  task.source = qasm::serialize(circuit);
  task.shots = request.shots;
  task.backend = request.backend;
  task.apply_correction = request.apply_correction;
  task.seed = request.seed.value_or(fresh_seed());
  task.status = TaskStatus::Queued;
  task.submitted_at = clock_();
  store_.insert(task);
  {
    std::lock_guard lock(mutex_);
    ++generation_;
  }
  queued_.notify_all();
  return task;
}

std::optional<TaskRecord> TaskService::task(const std::string& id) const { return store_.get(id); }

ResultLookup TaskService::result(const std::string& id) const {
  ResultLookup out;
  out.task = store_.get(id);
  if (out.task && out.task->status == TaskStatus::Done) out.document = store_.result(id);
  return out;
}

std::optional<TaskPayload> TaskService::next(const std::string& agent, std::chrono::milliseconds wait) {
  using namespace std::chrono;
  const auto deadline = steady_clock::now() + wait;
  std::unique_lock lock(mutex_);
  while (!stopping_) {
    const std::uint64_t seen = generation_;
    lock.unlock();
    auto task = store_.claim_next(agent, clock_(), options_.lease.count());
    lock.lock();
    if (task) return payload_of(*task);
    const auto now = steady_clock::now();
    if (now >= deadline) break;
    // Expired leases are noticed on the next claim, so wake up now and then
    // even without new submissions.
    const auto until = std::min(deadline, now + milliseconds(250));
    queued_.wait_until(lock, until, [&] { return stopping_ || generation_ != seen; });
  }
  return std::nullopt;
}

ReportOutcome TaskService::report_result(const std::string& id, const std::string& agent,
                                         const std::string& document) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(document);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("result is not JSON: ") + e.what());
  }
  const ResultDocument doc = result_from_json(j);
  if (doc.task_id != id) throw std::invalid_argument("result names task " + doc.task_id);
  doc.check();
  return store_.finish(id, agent, clock_(), to_json(doc).dump(), std::nullopt);
}

ReportOutcome TaskService::report_failure(const std::string& id, const std::string& agent,
                                          const std::string& error) {
  return store_.finish(id, agent, clock_(), std::nullopt, error);
}

void TaskService::shutdown() {
  {
    std::lock_guard lock(mutex_);
    stopping_ = true;
  }
  queued_.notify_all();
}

}  // namespace scq::service
