#pragma once

#include "scq/device.hpp"
#include "scq/noise.hpp"
#include "scq/service/result_document.hpp"
#include "scq/service/task.hpp"

namespace scq::service {

/// Noise model a backend stands for on `device`.
NoiseModel noise_for(Backend backend, const DeviceSpec& device);

/// Runs one task on the simulator and pretreats the counts: raw
/// probabilities always, readout-corrected ones when requested, using the
/// backend's own confusion matrices. Throws std::invalid_argument if the
/// payload does not parse or cannot run.
ResultDocument execute_task(const TaskPayload& task, const DeviceSpec& device);

}  // namespace scq::service
