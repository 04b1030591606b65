#include "scq/qasm.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

#include "scq/decimal.hpp"

namespace scq::qasm {

std::string SourceError::to_string() const {
  return "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message;
}

namespace {

struct Token {
  std::string_view text;
  int column = 1;
};

enum class StatementKind { Qubits, Scan, Gate };

/// A line that parsed on its own; cross-line rules are checked afterwards.
struct Statement {
  StatementKind kind = StatementKind::Gate;
  int line = 0;
  int column = 1;
  std::vector<Token> tokens;
  int qubit_count = 0;
  ScanSpec scan;
  Gate gate;
};

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f';
}

std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_space(line[i])) ++i;
    if (i >= line.size()) break;
    const std::size_t start = i;
    while (i < line.size() && !is_space(line[i])) ++i;
    out.push_back({line.substr(start, i - start), static_cast<int>(start) + 1});
  }
  return out;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

bool parse_int(std::string_view s, long long& out) {
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

std::string quoted(std::string_view s) {
  constexpr std::size_t kMax = 32;
  std::string out = "'";
  out += s.size() > kMax ? std::string(s.substr(0, kMax)) + "..." : std::string(s);
  out += "'";
  return out;
}

struct Mnemonic {
  std::string_view name;
  GateKind kind;
};

constexpr std::array<Mnemonic, 10> kGates{{
    {"h", GateKind::H},
    {"x", GateKind::X},
    {"y", GateKind::Y},
    {"z", GateKind::Z},
    {"rx", GateKind::RX},
    {"ry", GateKind::RY},
    {"rz", GateKind::RZ},
    {"cnot", GateKind::CNOT},
    {"cz", GateKind::CZ},
    {"measure", GateKind::Measure},
}};

class LineParser {
public:
  LineParser(int line, std::vector<Token> tokens) : line_(line), tokens_(std::move(tokens)) {}

  /// Returns the statement or records exactly one error.
  std::optional<Statement> run(std::vector<SourceError>& errors) {
    try_parse();
    if (error_) {
      errors.push_back(*error_);
      return std::nullopt;
    }
    return stmt_;
  }

private:
  void fail(const Token& at, std::string message) {
    if (!error_) error_ = SourceError{line_, at.column, std::move(message)};
  }

  bool qubit_operand(const Token& t, int& out) {
    long long v = 0;
    if (!parse_int(t.text, v) || v < 0 || v > 1'000'000) {
      fail(t, "expected a qubit index, got " + quoted(t.text));
      return false;
    }
    out = static_cast<int>(v);
    return true;
  }

  bool expect_operands(std::string_view name, std::size_t n) {
    const std::size_t got = tokens_.size() - 1;
    if (got == n) return true;
    const Token& at = got > n ? tokens_[n + 1] : tokens_.front();
    fail(at, std::string(name) + " expects " + std::to_string(n) + " operand" +
                 (n == 1 ? "" : "s") + ", got " + std::to_string(got));
    return false;
  }

  void try_parse() {
    const Token& head = tokens_.front();
    const std::string name = lower(head.text);
    stmt_.line = line_;
    stmt_.column = head.column;
    stmt_.tokens = tokens_;

    if (name == "qubits") {
      stmt_.kind = StatementKind::Qubits;
      if (!expect_operands(name, 1)) return;
      long long v = 0;
      if (!parse_int(tokens_[1].text, v) || v < 1 || v > 1'000'000) {
        fail(tokens_[1], "qubit count must be a positive integer, got " + quoted(tokens_[1].text));
        return;
      }
      stmt_.qubit_count = static_cast<int>(v);
      return;
    }

    if (name == "scan") {
      stmt_.kind = StatementKind::Scan;
      if (tokens_.size() < 2 || lower(tokens_[1].text) != "linspace") {
        fail(tokens_.size() < 2 ? head : tokens_[1], "expected 'scan linspace START STOP COUNT'");
        return;
      }
      if (tokens_.size() != 5) {
        fail(tokens_.size() > 5 ? tokens_[5] : head,
             "scan linspace expects 3 operands, got " + std::to_string(tokens_.size() - 2));
        return;
      }
      double start = 0;
      double stop = 0;
      long long count = 0;
      if (!parse_double(tokens_[2].text, start)) {
        fail(tokens_[2], "expected a decimal angle, got " + quoted(tokens_[2].text));
        return;
      }
      if (!parse_double(tokens_[3].text, stop)) {
        fail(tokens_[3], "expected a decimal angle, got " + quoted(tokens_[3].text));
        return;
      }
      if (!parse_int(tokens_[4].text, count) || count < 1 || count > 1'000'000) {
        fail(tokens_[4], "scan count must be a positive integer, got " + quoted(tokens_[4].text));
        return;
      }
      if (start > stop) {
        fail(tokens_[2], "scan start must not exceed stop");
        return;
      }
      stmt_.scan = {start, stop, static_cast<int>(count)};
      return;
    }

    auto it = std::find_if(kGates.begin(), kGates.end(),
                           [&](const Mnemonic& m) { return m.name == name; });
    if (it == kGates.end()) {
      fail(head, "unknown mnemonic " + quoted(head.text));
      return;
    }
    stmt_.kind = StatementKind::Gate;
    Gate& g = stmt_.gate;
    g.kind = it->kind;

    if (g.kind == GateKind::Measure) {
      if (tokens_.size() < 2) {
        fail(head, "measure expects at least 1 operand, got 0");
        return;
      }
      for (std::size_t i = 1; i < tokens_.size(); ++i) {
        int q = 0;
        if (!qubit_operand(tokens_[i], q)) return;
        if (std::find(g.qubits.begin(), g.qubits.end(), q) != g.qubits.end()) {
          fail(tokens_[i], "qubit " + std::to_string(q) + " measured twice");
          return;
        }
        g.qubits.push_back(q);
      }
      return;
    }

    if (is_two_qubit(g.kind)) {
      if (!expect_operands(name, 2)) return;
      int c = 0;
      int t = 0;
      if (!qubit_operand(tokens_[1], c) || !qubit_operand(tokens_[2], t)) return;
      if (c == t) {
        fail(tokens_[2], name + " operands must differ");
        return;
      }
      g.qubits = {c, t};
      return;
    }

    if (is_rotation(g.kind)) {
      if (!expect_operands(name, 2)) return;
      int q = 0;
      if (!qubit_operand(tokens_[1], q)) return;
      g.qubits = {q};
      const Token& p = tokens_[2];
      if (p.text.size() >= 2 && (p.text[0] == 's' || p.text[0] == 'S') && p.text[1] == '*') {
        double m = 0;
        if (!parse_double(p.text.substr(2), m) || m == 0.0) {
          fail(p, "scan multiplier must be a finite nonzero decimal, got " + quoted(p.text));
          return;
        }
        g.param = Scanned{m};
      } else {
        double a = 0;
        if (!parse_double(p.text, a)) {
          fail(p, "expected a decimal angle or s*MULT, got " + quoted(p.text));
          return;
        }
        g.param = Literal{a};
      }
      return;
    }

    if (!expect_operands(name, 1)) return;
    int q = 0;
    if (!qubit_operand(tokens_[1], q)) return;
    g.qubits = {q};
  }

  int line_;
  std::vector<Token> tokens_;
  Statement stmt_;
  std::optional<SourceError> error_;
};

}  // namespace

ParseResult parse(std::string_view text) {
  ParseResult result;
  auto& errors = result.errors;

  std::vector<Statement> statements;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    ++line_no;
    pos = end + 1;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    auto tokens = tokenize(line);
    if (tokens.empty()) continue;
    if (auto stmt = LineParser(line_no, std::move(tokens)).run(errors)) {
      statements.push_back(std::move(*stmt));
    }
  }

  // Cross-line rules over the statements that parsed.
  const Statement* header = nullptr;
  const Statement* scan = nullptr;
  const Statement* measure = nullptr;
  auto error_at = [&](const Statement& s, int column, std::string msg) {
    errors.push_back({s.line, column, std::move(msg)});
  };

  for (std::size_t i = 0; i < statements.size(); ++i) {
    const Statement& s = statements[i];
    if (s.kind == StatementKind::Qubits) {
      if (header) {
        error_at(s, s.column, "duplicate qubits declaration");
      } else if (i != 0) {
        error_at(s, s.column, "qubits must be the first statement");
        header = &s;
      } else {
        header = &s;
      }
    }
  }
  if (!header) {
    const int line = statements.empty() ? 1 : statements.front().line;
    const int column = statements.empty() ? 1 : statements.front().column;
    errors.push_back({line, column, "missing qubits header"});
  }
  const int n = header ? header->qubit_count : 0;

  Circuit circuit(n);
  bool uses_scan = false;
  const Statement* first_scanned = nullptr;
  for (const Statement& s : statements) {
    switch (s.kind) {
      case StatementKind::Qubits:
        break;
      case StatementKind::Scan:
        if (scan) {
          error_at(s, s.column, "duplicate scan declaration");
        } else {
          scan = &s;
          circuit.set_scan(s.scan);
        }
        break;
      case StatementKind::Gate: {
        if (measure) {
          error_at(s, s.column,
                   s.gate.kind == GateKind::Measure ? "measure must be the last statement"
                                                    : "statement after measure");
          break;
        }
        bool in_range = true;
        if (header) {
          for (std::size_t k = 0; k < s.gate.qubits.size(); ++k) {
            const int q = s.gate.qubits[k];
            if (q >= n) {
              error_at(s, s.tokens[k + 1].column,
                       "qubit index " + std::to_string(q) + " out of range");
              in_range = false;
              break;
            }
          }
        }
        if (!in_range) break;
        if (s.gate.is_scanned()) {
          uses_scan = true;
          if (!first_scanned) first_scanned = &s;
        }
        if (s.gate.kind == GateKind::Measure) measure = &s;
        circuit.push(s.gate);
        result.gate_positions.push_back({s.line, s.column});
        break;
      }
    }
  }
  if (uses_scan && !scan) {
    error_at(*first_scanned, first_scanned->tokens[2].column,
             "s* used without a scan declaration");
  }

  if (errors.empty()) {
    result.circuit = std::move(circuit);
  } else {
    std::stable_sort(errors.begin(), errors.end(), [](const SourceError& a, const SourceError& b) {
      return a.line != b.line ? a.line < b.line : a.column < b.column;
    });
  }
  return result;
}

std::vector<SourceError> check_device(const ParseResult& parsed, const DeviceSpec& device) {
  std::vector<SourceError> out;
  if (!parsed.circuit) return out;
  for (const Violation& v : validate(*parsed.circuit, device).violations) {
    SourcePos at;
    if (v.gate_index && *v.gate_index < parsed.gate_positions.size()) at = parsed.gate_positions[*v.gate_index];
    out.push_back({at.line, at.column, v.message});
  }
  return out;
}

std::string serialize(const Circuit& circuit) {
  std::ostringstream os;
  os << "qubits " << circuit.num_qubits();
  if (const auto& scan = circuit.scan()) {
    os << "\nscan linspace " << shortest_repr(scan->start) << ' ' << shortest_repr(scan->stop)
       << ' ' << scan->count;
  }
  for (const Gate& g : circuit.gates()) {
    os << '\n' << mnemonic(g.kind);
    for (int q : g.qubits) os << ' ' << q;
    if (g.param) {
      if (const auto* lit = std::get_if<Literal>(&*g.param)) {
        os << ' ' << shortest_repr(lit->radians);
      } else {
        os << " s*" << shortest_repr(std::get<Scanned>(*g.param).multiplier);
      }
    }
  }
  return os.str();
}

}  // namespace scq::qasm
