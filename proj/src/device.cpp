#include "scq/device.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace scq {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

std::string join(const std::string& base, const std::string& key) {
  return base.empty() ? key : base + "." + key;
}

std::string index_path(const std::string& base, std::size_t i) {
  return base + "[" + std::to_string(i) + "]";
}

const json& require(const json& obj, const std::string& key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) throw DeviceSpecError(join(path, key), "missing field");
  return *it;
}

Decimal to_decimal(const json& v, const std::string& path) {
  try {
    if (v.is_string()) return Decimal(v.get<std::string>());
    if (v.is_number()) return Decimal(v.dump());
  } catch (const std::invalid_argument& e) {
    throw DeviceSpecError(path, e.what());
  }
  throw DeviceSpecError(path, "expected a decimal string");
}

Decimal decimal_field(const json& obj, const std::string& key, const std::string& path) {
  return to_decimal(require(obj, key, path), join(path, key));
}

std::optional<Decimal> optional_decimal(const json& obj, const std::string& key,
                                        const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (it->is_string() && (it->get<std::string>() == "-" || it->get<std::string>().empty()))
    return std::nullopt;
  return to_decimal(*it, join(path, key));
}

int int_field(const json& obj, const std::string& key, const std::string& path) {
  const json& v = require(obj, key, path);
  if (!v.is_number_integer()) throw DeviceSpecError(join(path, key), "expected an integer");
  return v.get<int>();
}

void check(bool ok, const std::string& path, const std::string& message) {
  if (!ok) throw DeviceSpecError(path, message);
}

void check_probability(double p, const std::string& path) {
  check(p > 0.0 && p <= 1.0, path, "fidelity must lie in (0, 1]");
}

QubitSpec parse_qubit(const json& q, const std::string& path) {
  check(q.is_object(), path, "expected an object");
  QubitSpec s;
  s.index = int_field(q, "index", path);
  s.omega_sweet = decimal_field(q, "omega_sweet_ghz", path);
  s.omega_idle = decimal_field(q, "omega_idle_ghz", path);
  s.omega_readout = decimal_field(q, "omega_readout_ghz", path);
  s.anharmonicity = decimal_field(q, "anharmonicity_ghz", path);
  s.t1 = decimal_field(q, "t1_us", path);
  s.t2_star = decimal_field(q, "t2_star_us", path);
  s.f0 = decimal_field(q, "f0", path);
  s.f1 = decimal_field(q, "f1", path);
  s.x_gate_fidelity = decimal_field(q, "x_gate_fidelity", path);
  s.x_half_gate_fidelity = decimal_field(q, "x_half_gate_fidelity", path);

  check(s.t1 > 0.0, join(path, "t1_us"), "must be positive");
  check(s.t2_star > 0.0, join(path, "t2_star_us"), "must be positive");
  for (auto [key, f] : {std::pair{"f0", s.f0.value()}, std::pair{"f1", s.f1.value()}}) {
    check(f > 0.5 && f <= 1.0, join(path, key),
          "confusion matrix not invertible/sensible (readout fidelity must lie in (0.5, 1])");
  }
  check_probability(s.x_gate_fidelity, join(path, "x_gate_fidelity"));
  check_probability(s.x_half_gate_fidelity, join(path, "x_half_gate_fidelity"));
  return s;
}

CouplerSpec parse_coupler(const json& c, const std::string& path) {
  check(c.is_object(), path, "expected an object");
  CouplerSpec s;
  const json& pair = require(c, "pair", path);
  check(pair.is_array() && pair.size() == 2 && pair[0].is_number_integer() &&
            pair[1].is_number_integer(),
        join(path, "pair"), "expected two integer qubit indices");
  s.pair = {pair[0].get<int>(), pair[1].get<int>()};
  check(std::abs(s.pair.first - s.pair.second) == 1, join(path, "pair"),
        "coupler must join chain neighbours");
  if (s.pair.first > s.pair.second) std::swap(s.pair.first, s.pair.second);
  s.g = decimal_field(c, "g_mhz", path);
  s.omega_interact_fwd = decimal_field(c, "omega_interact_fwd_ghz", path);
  s.omega_interact_rev = decimal_field(c, "omega_interact_rev_ghz", path);
  s.cz_duration = decimal_field(c, "cz_duration_ns", path);
  s.qpt_initial_state_fidelity = optional_decimal(c, "qpt_initial_state_fidelity", path);
  s.qpt_final_state_fidelity = optional_decimal(c, "qpt_final_state_fidelity", path);
  s.cz_process_fidelity = decimal_field(c, "cz_process_fidelity", path);

  check(s.g >= 5.0 && s.g <= 20.0, join(path, "g_mhz"),
        "coupling outside the plausible band [5, 20] MHz");
  check(s.cz_duration > 0.0, join(path, "cz_duration_ns"), "must be positive");
  check_probability(s.cz_process_fidelity, join(path, "cz_process_fidelity"));
  return s;
}

CrosstalkMatrix parse_crosstalk(const json& rows, int n, const std::string& path) {
  check(rows.is_array() && static_cast<int>(rows.size()) == n, path,
        "expected " + std::to_string(n) + " rows");
  CrosstalkMatrix ct;
  ct.m.resize(n, n);
  ct.records.reserve(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    const auto row_path = index_path(path, i);
    const json& row = rows[i];
    check(row.is_array() && static_cast<int>(row.size()) == n, row_path,
          "expected " + std::to_string(n) + " columns");
    for (int j = 0; j < n; ++j) {
      const auto cell_path = index_path(row_path, j);
      Decimal d = to_decimal(row[j], cell_path);
      if (i == j) check(d.value() == 1.0, cell_path, "diagonal entries must equal 1");
      ct.m(i, j) = d.value();
      ct.records.push_back(d.text());
    }
  }
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(ct.m);
  check(std::isfinite(lu.rcond()) && lu.rcond() > 1e-12, path, "matrix is singular");
  return ct;
}

}  // namespace

const CouplerSpec* DeviceSpec::coupler(int a, int b) const noexcept {
  if (std::abs(a - b) != 1) return nullptr;
  const int lo = std::min(a, b);
  if (lo < 0 || lo >= static_cast<int>(couplers.size())) return nullptr;
  return &couplers[static_cast<std::size_t>(lo)];
}

DeviceSpec load_device_spec(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    throw DeviceSpecError("", std::string("malformed document: ") + e.what());
  }
  check(doc.is_object(), "", "document root must be an object");

  DeviceSpec d;
  if (auto it = doc.find("name"); it != doc.end() && it->is_string()) d.name = *it;
  if (auto it = doc.find("description"); it != doc.end() && it->is_string())
    d.description = *it;
  d.single_gate_duration = decimal_field(doc, "single_gate_duration_ns", "");
  d.avg_single_gate_fidelity = decimal_field(doc, "avg_single_gate_fidelity", "");
  d.avg_cz_fidelity = decimal_field(doc, "avg_cz_fidelity", "");
  check_probability(d.avg_single_gate_fidelity, "avg_single_gate_fidelity");
  check_probability(d.avg_cz_fidelity, "avg_cz_fidelity");

  const json& qubits = require(doc, "qubits", "");
  check(qubits.is_array() && !qubits.empty(), "qubits", "expected a non-empty list");
  for (std::size_t i = 0; i < qubits.size(); ++i) {
    const auto path = index_path("qubits", i);
    d.qubits.push_back(parse_qubit(qubits[i], path));
    check(d.qubits.back().index == static_cast<int>(i), join(path, "index"),
          "qubit indices must be contiguous from 0");
  }
  const int n = d.num_qubits();

  const json& couplers = require(doc, "couplers", "");
  check(couplers.is_array() && static_cast<int>(couplers.size()) == n - 1, "couplers",
        "expected exactly " + std::to_string(n - 1) + " couplers");
  for (std::size_t i = 0; i < couplers.size(); ++i) {
    const auto path = index_path("couplers", i);
    d.couplers.push_back(parse_coupler(couplers[i], path));
    check(d.couplers.back().pair.first == static_cast<int>(i), join(path, "pair"),
          "couplers must be listed in chain order (" + std::to_string(i) + ", " +
              std::to_string(i + 1) + ")");
  }

  d.crosstalk = parse_crosstalk(require(doc, "crosstalk", ""), n, "crosstalk");
  return d;
}

DeviceSpec load_device_spec_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DeviceSpecError("", "cannot open device document " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_device_spec(ss.str());
}

const DeviceSpec& default_device() {
  static const DeviceSpec device = load_device_spec(default_device_document());
  return device;
}

std::string serialize_device_spec(const DeviceSpec& d) {
  ordered_json doc;
  doc["name"] = d.name;
  if (!d.description.empty()) doc["description"] = d.description;
  doc["single_gate_duration_ns"] = d.single_gate_duration.text();
  doc["avg_single_gate_fidelity"] = d.avg_single_gate_fidelity.text();
  doc["avg_cz_fidelity"] = d.avg_cz_fidelity.text();
  doc["qubits"] = ordered_json::array();
  for (const auto& q : d.qubits) {
    doc["qubits"].push_back({
        {"index", q.index},
        {"omega_sweet_ghz", q.omega_sweet.text()},
        {"omega_idle_ghz", q.omega_idle.text()},
        {"omega_readout_ghz", q.omega_readout.text()},
        {"anharmonicity_ghz", q.anharmonicity.text()},
        {"t1_us", q.t1.text()},
        {"t2_star_us", q.t2_star.text()},
        {"f0", q.f0.text()},
        {"f1", q.f1.text()},
        {"x_gate_fidelity", q.x_gate_fidelity.text()},
        {"x_half_gate_fidelity", q.x_half_gate_fidelity.text()},
    });
  }
  doc["couplers"] = ordered_json::array();
  for (const auto& c : d.couplers) {
    ordered_json o;
    o["pair"] = {c.pair.first, c.pair.second};
    o["g_mhz"] = c.g.text();
    o["omega_interact_fwd_ghz"] = c.omega_interact_fwd.text();
    o["omega_interact_rev_ghz"] = c.omega_interact_rev.text();
    o["cz_duration_ns"] = c.cz_duration.text();
    if (c.qpt_initial_state_fidelity)
      o["qpt_initial_state_fidelity"] = c.qpt_initial_state_fidelity->text();
    if (c.qpt_final_state_fidelity)
      o["qpt_final_state_fidelity"] = c.qpt_final_state_fidelity->text();
    o["cz_process_fidelity"] = c.cz_process_fidelity.text();
    doc["couplers"].push_back(std::move(o));
  }
  const int n = d.crosstalk.size();
  doc["crosstalk"] = ordered_json::array();
  for (int i = 0; i < n; ++i) {
    ordered_json row = ordered_json::array();
    for (int j = 0; j < n; ++j) row.push_back(d.crosstalk.records[static_cast<std::size_t>(i * n + j)]);
    doc["crosstalk"].push_back(std::move(row));
  }
  return doc.dump(2) + "\n";
}

Eigen::VectorXd crosstalk_compensate(const CrosstalkMatrix& ct,
                                     const Eigen::Ref<const Eigen::VectorXd>& z_actual) {
  if (z_actual.size() != ct.m.rows()) {
    throw std::invalid_argument("crosstalk_compensate: vector length " +
                                std::to_string(z_actual.size()) + " does not match matrix size " +
                                std::to_string(ct.m.rows()));
  }
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(ct.m);
  const double rcond = lu.rcond();
  if (!(rcond > 1e-12)) {
    throw std::domain_error("crosstalk_compensate: matrix is singular (rcond = " +
                            shortest_repr(rcond) + ")");
  }
  return lu.solve(z_actual);
}

}  // namespace scq
