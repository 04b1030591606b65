#include "scq/service/worker.hpp"

#include <stdexcept>

#include "scq/qasm.hpp"
#include "scq/readout.hpp"
#include "scq/simulator.hpp"

namespace scq::service {

NoiseModel noise_for(Backend backend, const DeviceSpec& device) {
  return backend == Backend::Ideal ? NoiseModel::ideal(device.num_qubits()) : NoiseModel::calibrated(device);
}

ResultDocument execute_task(const TaskPayload& task, const DeviceSpec& device) {
  const qasm::ParseResult parsed = qasm::parse(task.source);
  if (!parsed.ok()) throw std::invalid_argument("task source does not parse: " + parsed.errors.front().to_string());
  // The lab side compiles to the native set before execution, so gate
  // errors land on the gates the chip actually runs.
  const Circuit circuit = decompose_cnot(*parsed.circuit);

  const NoiseModel noise = noise_for(task.backend, device);
  const RunResult run = run_shots(circuit, task.shots, noise, task.seed);
  const std::vector<Confusion> confusion = noise.confusions(run.measured);

  ResultDocument doc;
  doc.task_id = task.id;
  doc.device = device.name;
  doc.backend = task.backend;
  doc.shots = task.shots;
  doc.seed = task.seed;
  doc.measured = run.measured;
  doc.scan = circuit.scan();
  for (const ScanPoint& p : run.points) {
    ResultPoint out;
    out.index = p.index;
    out.gamma = p.gamma;
    out.counts = p.counts;
    out.probs_raw = p.probs_raw;
    if (task.apply_correction) out.probs_corrected = readout_correct(p.probs_raw, confusion);
    doc.points.push_back(std::move(out));
  }
  return doc;
}

}  // namespace scq::service
