#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "scq/circuit.hpp"
#include "scq/device.hpp"
#include "scq/ghz.hpp"
#include "scq/service/client.hpp"
#include "scq/service/result_document.hpp"
#include "scq/tomography.hpp"

namespace scq {

/// Where tasks run: in this process or through the task service. Both give
/// the same numbers for the same requests.
class TaskRunner {
public:
  virtual ~TaskRunner() = default;
  virtual service::ResultDocument run(const service::TaskRequest& request) = 0;
  /// Runs a batch; the default runs one request after another.
  virtual std::vector<service::ResultDocument> run_all(const std::vector<service::TaskRequest>& requests);
};

/// Same admission checks as the service, then the agent's execution path.
/// Throws service::SubmissionRejected for programs the service would refuse.
class LocalRunner final : public TaskRunner {
public:
  explicit LocalRunner(DeviceSpec device) : device_(std::move(device)) {}
  service::ResultDocument run(const service::TaskRequest& request) override;

private:
  DeviceSpec device_;
  std::uint64_t next_id_ = 0;
};

/// Submits to a running service and waits for agents to finish. A task that
/// ends Failed throws TaskFailed.
class RemoteRunner final : public TaskRunner {
public:
  explicit RemoteRunner(service::ServiceClient client) : client_(std::move(client)) {}
  service::ResultDocument run(const service::TaskRequest& request) override;
  /// Submits the whole batch first so that several agents can share it.
  std::vector<service::ResultDocument> run_all(const std::vector<service::TaskRequest>& requests) override;

private:
  service::ResultDocument wait(const std::string& id);
  service::ServiceClient client_;
};

class TaskFailed : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct BenchOptions {
  int n_min = 6;
  int n_max = 10;
  std::uint64_t shots = 3000;
  service::Backend backend = service::Backend::Calibrated;
  std::uint64_t seed = 2024;
  ScanSpec scan = default_parity_scan();
  int resamples = 200;  ///< bootstrap resamples; 0 skips error bars
};

/// One GHZ block: fidelity report, corrected parity curve and raw counts.
struct BenchBlock {
  GhzReport report;
  ParityCurve curve;
  GhzCounts counts;
};

/// All blocks (offset, n) of the chain with n_min ≤ n ≤ n_max, ordered by n
/// then offset. Block b runs its population circuit with seed
/// mix_seed(seed, 2b) and its parity scan with mix_seed(seed, 2b + 1).
std::vector<BenchBlock> ghz_bench(TaskRunner& runner, const DeviceSpec& device, const BenchOptions& options);

/// Table with one row per block:
///
///     n,offset,qubits,population,coherence,phase,fidelity,genuine,fit_rmse,
///     sigma_population,sigma_coherence,sigma_fidelity
///
/// `qubits` is 1-based like "Q1-Q6"; reals use 6 decimals, sigmas are empty
/// without bootstrap.
std::string fidelity_table_csv(const std::vector<BenchBlock>& blocks);

/// `gamma,parity` with 8 decimals, one row per scan point.
std::string parity_curve_csv(const BenchBlock& block);

struct QptOutcome {
  ProcessMatrix chi;
  double fidelity = 0.0;  ///< against the ideal CZ
};

/// Sampled QPT of the CZ on chain neighbours (low, low + 1): the 144 design
/// circuits run through `runner` with readout correction.
QptOutcome qpt_sampled(TaskRunner& runner, const DeviceSpec& device, int low, std::uint64_t shots,
                       service::Backend backend, std::uint64_t seed);

/// Exact sub-mode: density-matrix execution of the design on the pair alone
/// with the backend's noise and exact readout correction.
QptOutcome qpt_exact(const DeviceSpec& device, int low, service::Backend backend);

/// χ as CSV rows `row,col,re,im`.
std::string chi_csv(const ProcessMatrix& chi);

}  // namespace scq
