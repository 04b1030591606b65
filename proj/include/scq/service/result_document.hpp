#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "scq/circuit.hpp"
#include "scq/probability_table.hpp"
#include "scq/service/task.hpp"

namespace scq::service {

struct ResultPoint {
  int index = 0;
  double gamma = 0.0;
  std::vector<std::uint64_t> counts;  ///< dense, indexed like ProbabilityTable
  ProbabilityTable probs_raw;
  std::optional<ProbabilityTable> probs_corrected;
};

/// Everything a finished task returns.
///
/// JSON lists counts and raw probabilities for observed bitstrings only and
/// corrected probabilities for every bitstring, because correction moves
/// weight onto outcomes that were never observed.
struct ResultDocument {
  std::string task_id;
  std::string device;
  Backend backend = Backend::Calibrated;
  std::uint64_t shots = 0;
  std::uint64_t seed = 0;
  std::vector<int> measured;
  std::optional<ScanSpec> scan;
  std::vector<ResultPoint> points;

  /// Point count matches the scan, tables match `measured`, counts sum to
  /// `shots` and every probability row sums to 1 within 1e-6. Throws
  /// std::invalid_argument naming the first problem.
  void check() const;
};

nlohmann::json to_json(const ResultDocument& doc);
/// Throws std::invalid_argument on malformed documents.
ResultDocument result_from_json(const nlohmann::json& j);

/// CSV rendering:
///
///     scan_index,gamma,bitstring,count,prob_raw,prob_corrected
///
/// One row per observed bitstring, ordered by scan index then bitstring
/// (lexicographic). Reals are fixed with 8 decimals; prob_corrected is
/// empty when no correction was requested. Lines end in '\n'.
std::string to_csv(const ResultDocument& doc);

}  // namespace scq::service
