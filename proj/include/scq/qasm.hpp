#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "scq/circuit.hpp"

namespace scq::qasm {

/// A diagnostic anchored at a 1-based line and column of the source text.
struct SourceError {
  int line = 1;
  int column = 1;
  std::string message;

  std::string to_string() const;
  bool operator==(const SourceError&) const = default;
};

struct SourcePos {
  int line = 1;
  int column = 1;
};

struct ParseResult {
  std::optional<Circuit> circuit;  ///< set iff `errors` is empty
  std::vector<SourceError> errors;
  std::vector<SourcePos> gate_positions;  ///< one per circuit gate

  bool ok() const noexcept { return circuit.has_value(); }
};

/// Parses the line-based assembly language:
///
///     qubits N                          (first statement)
///     scan linspace START STOP COUNT    (optional, once)
///     h|x|y|z Q
///     rx|ry|rz Q PARAM                  PARAM = decimal | s*MULT
///     cnot C T
///     cz C T
///     measure Q1 Q2 ...                 (last statement)
///
/// `#` starts a comment; mnemonics are case-insensitive. Never throws on
/// malformed input; every problem is reported with its location and parsing
/// resumes on the next line.
ParseResult parse(std::string_view text);

/// Device constraints (width, chain adjacency) of a parsed program,
/// reported at the offending statements.
std::vector<SourceError> check_device(const ParseResult& parsed, const DeviceSpec& device);

/// Canonical text: lowercase mnemonics, single spaces, shortest round-trip
/// angles, lines joined by '\n' without a trailing newline.
std::string serialize(const Circuit& circuit);

}  // namespace scq::qasm
