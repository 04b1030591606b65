#include "scq/bench.hpp"

#include <chrono>
#include <cstdio>
#include <map>
#include <stdexcept>
#include <thread>

#include "scq/qasm.hpp"
#include "scq/readout.hpp"
#include "scq/rng.hpp"
#include "scq/service/task_service.hpp"
#include "scq/service/worker.hpp"
#include "scq/simulator.hpp"

namespace scq {

using service::ResultDocument;
using service::TaskRequest;

std::vector<ResultDocument> TaskRunner::run_all(const std::vector<TaskRequest>& requests) {
  std::vector<ResultDocument> out;
  out.reserve(requests.size());
  for (const TaskRequest& r : requests) out.push_back(run(r));
  return out;
}

ResultDocument LocalRunner::run(const TaskRequest& request) {
  auto checked = service::check_submission(request, device_);
  if (auto* r = std::get_if<service::Rejection>(&checked)) throw service::SubmissionRejected(std::move(*r));
  service::TaskPayload payload;
  payload.id = "local-" + std::to_string(next_id_++);
  payload.source = qasm::serialize(std::get<Circuit>(checked));
  payload.shots = request.shots;
  payload.backend = request.backend;
  payload.apply_correction = request.apply_correction;
  payload.seed = request.seed.value_or(0);
  return service::execute_task(payload, device_);
}

ResultDocument RemoteRunner::wait(const std::string& id) {
  using namespace std::chrono;
  auto pause = milliseconds(20);
  for (;;) {
    const auto view = client_.task(id);
    const std::string status = view.at("status").get<std::string>();
    if (status == "done") return client_.result(id);
    if (status == "failed") {
      const auto& err = view.at("error");
      throw TaskFailed("task " + id + " failed: " + (err.is_string() ? err.get<std::string>() : "unknown error"));
    }
    std::this_thread::sleep_for(pause);
    pause = std::min(pause * 2, milliseconds(500));
  }
}

ResultDocument RemoteRunner::run(const TaskRequest& request) { return wait(client_.submit(request)); }

std::vector<ResultDocument> RemoteRunner::run_all(const std::vector<TaskRequest>& requests) {
  std::vector<std::string> ids;
  ids.reserve(requests.size());
  for (const TaskRequest& r : requests) ids.push_back(client_.submit(r));
  std::vector<ResultDocument> out;
  out.reserve(ids.size());
  for (const std::string& id : ids) out.push_back(wait(id));
  return out;
}

namespace {

const ProbabilityTable& best_table(const service::ResultPoint& p) {
  return p.probs_corrected ? *p.probs_corrected : p.probs_raw;
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

std::vector<BenchBlock> ghz_bench(TaskRunner& runner, const DeviceSpec& device, const BenchOptions& options) {
  const int width = device.num_qubits();
  if (options.n_min < 1 || options.n_max > width || options.n_min > options.n_max) {
    throw std::invalid_argument("block sizes must satisfy 1 <= n_min <= n_max <= " + std::to_string(width));
  }
  std::vector<GhzBlock> blocks;
  for (int n = options.n_min; n <= options.n_max; ++n)
    for (int offset = 0; offset + n <= width; ++offset) blocks.push_back({offset, n});

  std::vector<TaskRequest> requests;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const Circuit population = build_ghz(blocks[b].n, blocks[b].offset, width);
    const Circuit scan = append_parity_stage(population, options.scan);
    for (int which = 0; which < 2; ++which) {
      TaskRequest r;
      r.source = qasm::serialize(which == 0 ? population : scan);
      r.shots = options.shots;
      r.backend = options.backend;
      r.apply_correction = true;
      r.seed = mix_seed(options.seed, 2 * b + static_cast<std::uint64_t>(which));
      requests.push_back(std::move(r));
    }
  }
  const std::vector<ResultDocument> docs = runner.run_all(requests);
  const NoiseModel noise = service::noise_for(options.backend, device);

  std::vector<BenchBlock> out;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const ResultDocument& pop = docs[2 * b];
    const ResultDocument& par = docs[2 * b + 1];
    BenchBlock block;
    block.curve.n = blocks[b].n;
    block.counts.population = pop.points.at(0).counts;
    for (const auto& p : par.points) {
      block.curve.gammas.push_back(p.gamma);
      block.curve.parities.push_back(parity(best_table(p)));
      block.counts.gammas.push_back(p.gamma);
      block.counts.parity.push_back(p.counts);
    }
    block.report = ghz_report(blocks[b], best_table(pop.points.at(0)), block.curve);
    if (options.resamples > 0) {
      const std::vector<Confusion> confusion = noise.confusions(pop.measured);
      block.report.sigma = bootstrap_ghz(block.counts, blocks[b].n, confusion, options.resamples,
                                         mix_seed(options.seed, 1'000'000 + b));
    }
    out.push_back(std::move(block));
  }
  return out;
}

std::string fidelity_table_csv(const std::vector<BenchBlock>& blocks) {
  std::string out =
      "n,offset,qubits,population,coherence,phase,fidelity,genuine,fit_rmse,"
      "sigma_population,sigma_coherence,sigma_fidelity\n";
  for (const BenchBlock& b : blocks) {
    const GhzReport& r = b.report;
    out += std::to_string(r.block.n) + "," + std::to_string(r.block.offset) + ",Q" +
           std::to_string(r.block.offset + 1) + "-Q" + std::to_string(r.block.offset + r.block.n) + "," +
           fixed(r.population, 6) + "," + fixed(r.coherence, 6) + "," + fixed(r.phase, 6) + "," +
           fixed(r.fidelity, 6) + "," + (r.genuine_entanglement ? "true" : "false") + "," + fixed(r.fit_rmse, 6) + ",";
    if (r.sigma) {
      out += fixed(r.sigma->population, 6) + "," + fixed(r.sigma->coherence, 6) + "," + fixed(r.sigma->fidelity, 6);
    } else {
      out += ",,";
    }
    out += '\n';
  }
  return out;
}

std::string parity_curve_csv(const BenchBlock& block) {
  std::string out = "gamma,parity\n";
  for (std::size_t i = 0; i < block.curve.gammas.size(); ++i)
    out += fixed(block.curve.gammas[i], 8) + "," + fixed(block.curve.parities[i], 8) + "\n";
  return out;
}

namespace {

void require_pair(const DeviceSpec& device, int low) {
  if (low < 0 || !device.coupler(low, low + 1)) {
    throw std::invalid_argument("no coupler between qubits " + std::to_string(low) + " and " +
                                std::to_string(low + 1));
  }
}

QptOutcome finish_qpt(const CircuitExecutor& executor, const QptDesign& design) {
  QptOutcome out;
  out.chi = qpt_two_qubit(executor, design);
  out.fidelity = process_fidelity(out.chi, chi_from_unitary(gates::cz<double>()));
  return out;
}

}  // namespace

QptOutcome qpt_sampled(TaskRunner& runner, const DeviceSpec& device, int low, std::uint64_t shots,
                       service::Backend backend, std::uint64_t seed) {
  require_pair(device, low);
  const QptDesign design{device.num_qubits(), {low, low + 1}, GateKind::CZ};
  std::vector<TaskRequest> requests;
  for (int prep = 0; prep < 16; ++prep) {
    for (int setting = 0; setting < 9; ++setting) {
      TaskRequest r;
      r.source = qasm::serialize(design.circuit(prep, setting));
      r.shots = shots;
      r.backend = backend;
      r.apply_correction = true;
      r.seed = mix_seed(seed, static_cast<std::uint64_t>(prep * 9 + setting));
      requests.push_back(std::move(r));
    }
  }
  const std::vector<ResultDocument> docs = runner.run_all(requests);
  std::map<std::string, ProbabilityTable> tables;
  for (std::size_t i = 0; i < docs.size(); ++i) tables.emplace(requests[i].source, best_table(docs[i].points.at(0)));
  return finish_qpt([&](const Circuit& c) { return tables.at(qasm::serialize(c)); }, design);
}

QptOutcome qpt_exact(const DeviceSpec& device, int low, service::Backend backend) {
  require_pair(device, low);
  const std::vector<int> pair = {low, low + 1};
  const NoiseModel noise = service::noise_for(backend, device).restrict(pair);
  const QptDesign design{2, {0, 1}, GateKind::CZ};
  return finish_qpt(
      [&](const Circuit& c) {
        const ProbabilityTable raw = run_density_exact(c, noise);
        return readout_correct(raw, noise.confusions(raw.qubits));
      },
      design);
}

std::string chi_csv(const ProcessMatrix& chi) {
  std::string out = "row,col,re,im\n";
  for (int r = 0; r < 16; ++r)
    for (int c = 0; c < 16; ++c)
      out += std::to_string(r) + "," + std::to_string(c) + "," + fixed(chi.chi(r, c).real(), 10) + "," +
             fixed(chi.chi(r, c).imag(), 10) + "\n";
  return out;
}

}  // namespace scq
