#include "scq/service/result_document.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>
#include <utility>

namespace scq::service {

namespace {

std::string fixed8(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.8f", v);
  std::string s = buf;
  // Tiny negative corrections would otherwise print as "-0.00000000".
  if (s.find_first_not_of("-0.") == std::string::npos && s.front() == '-') s.erase(0, 1);
  return s;
}

void check_table(const ProbabilityTable& t, const std::vector<int>& measured, const char* what,
                 int k) {
  const std::string where = "point " + std::to_string(k) + " " + what;
  if (t.qubits != measured) throw std::invalid_argument(where + ": qubits differ from measured");
  if (std::abs(t.sum() - 1.0) > 1e-6) throw std::invalid_argument(where + ": does not sum to 1");
}

nlohmann::json sparse(const std::vector<std::uint64_t>& counts, const Eigen::VectorXd& values,
                      int width, bool as_counts) {
  nlohmann::json out = nlohmann::json::object();
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] == 0) continue;
    if (as_counts) {
      out[bitstring(i, width)] = counts[i];
    } else {
      out[bitstring(i, width)] = values(static_cast<Eigen::Index>(i));
    }
  }
  return out;
}

}  // namespace

void ResultDocument::check() const {
  const std::size_t expected = scan ? static_cast<std::size_t>(scan->count) : 1;
  if (points.size() != expected) {
    throw std::invalid_argument("result has " + std::to_string(points.size()) +
                                " points, scan declares " + std::to_string(expected));
  }
  const std::size_t dim = std::size_t{1} << measured.size();
  for (std::size_t k = 0; k < points.size(); ++k) {
    const ResultPoint& p = points[k];
    const int ki = static_cast<int>(k);
    if (p.index != ki) throw std::invalid_argument("point indices must run 0..count-1");
    if (p.counts.size() != dim) throw std::invalid_argument("point " + std::to_string(k) + ": counts size");
    const std::uint64_t total = std::accumulate(p.counts.begin(), p.counts.end(), std::uint64_t{0});
    if (total != shots) throw std::invalid_argument("point " + std::to_string(k) + ": counts do not sum to shots");
    check_table(p.probs_raw, measured, "probs_raw", ki);
    if (p.probs_corrected) check_table(*p.probs_corrected, measured, "probs_corrected", ki);
  }
}

nlohmann::json to_json(const ResultDocument& doc) {
  const int width = static_cast<int>(doc.measured.size());
  nlohmann::json points = nlohmann::json::array();
  for (const ResultPoint& p : doc.points) {
    nlohmann::json corrected = nullptr;
    if (p.probs_corrected) {
      corrected = nlohmann::json::object();
      for (std::size_t i = 0; i < p.probs_corrected->size(); ++i)
        corrected[bitstring(i, width)] = (*p.probs_corrected)[i];
    }
    points.push_back({{"index", p.index},
                      {"gamma", p.gamma},
                      {"counts", sparse(p.counts, p.probs_raw.probs, width, true)},
                      {"probs_raw", sparse(p.counts, p.probs_raw.probs, width, false)},
                      {"probs_corrected", corrected}});
  }
  nlohmann::json scan = nullptr;
  if (doc.scan) scan = {{"start", doc.scan->start}, {"stop", doc.scan->stop}, {"count", doc.scan->count}};
  return {{"task_id", doc.task_id},
          {"device", doc.device},
          {"backend", to_string(doc.backend)},
          {"shots", doc.shots},
          {"seed", doc.seed},
          {"measured", doc.measured},
          {"scan", scan},
          {"points", points}};
}

ResultDocument result_from_json(const nlohmann::json& j) {
  try {
    ResultDocument doc;
    doc.task_id = j.at("task_id").get<std::string>();
    doc.device = j.at("device").get<std::string>();
    const auto backend = parse_backend(j.at("backend").get<std::string>());
    if (!backend) throw std::invalid_argument("unknown backend");
    doc.backend = *backend;
    doc.shots = j.at("shots").get<std::uint64_t>();
    doc.seed = j.at("seed").get<std::uint64_t>();
    doc.measured = j.at("measured").get<std::vector<int>>();
    if (doc.measured.size() > 24) throw std::invalid_argument("too many measured qubits");
    if (const auto& s = j.at("scan"); !s.is_null()) {
      doc.scan = ScanSpec{s.at("start").get<double>(), s.at("stop").get<double>(), s.at("count").get<int>()};
    }
    const std::size_t dim = std::size_t{1} << doc.measured.size();
    for (const auto& jp : j.at("points")) {
      ResultPoint p;
      p.index = jp.at("index").get<int>();
      p.gamma = jp.at("gamma").get<double>();
      p.counts.assign(dim, 0);
      Eigen::VectorXd raw = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim));
      for (const auto& [bits, n] : jp.at("counts").items()) {
        if (bits.size() != doc.measured.size()) throw std::invalid_argument("bitstring width");
        p.counts[bitstring_index(bits)] = n.get<std::uint64_t>();
      }
      for (const auto& [bits, v] : jp.at("probs_raw").items()) {
        if (bits.size() != doc.measured.size()) throw std::invalid_argument("bitstring width");
        raw(static_cast<Eigen::Index>(bitstring_index(bits))) = v.get<double>();
      }
      p.probs_raw = ProbabilityTable(doc.measured, std::move(raw));
      if (const auto& jc = jp.at("probs_corrected"); !jc.is_null()) {
        Eigen::VectorXd c = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim));
        for (const auto& [bits, v] : jc.items()) {
          if (bits.size() != doc.measured.size()) throw std::invalid_argument("bitstring width");
          c(static_cast<Eigen::Index>(bitstring_index(bits))) = v.get<double>();
        }
        p.probs_corrected = ProbabilityTable(doc.measured, std::move(c));
      }
      doc.points.push_back(std::move(p));
    }
    return doc;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("bad result document: ") + e.what());
  }
}

std::string to_csv(const ResultDocument& doc) {
  const int width = static_cast<int>(doc.measured.size());
  std::string out = "scan_index,gamma,bitstring,count,prob_raw,prob_corrected\n";
  std::vector<std::pair<std::string, std::size_t>> rows;
  for (const ResultPoint& p : doc.points) {
    rows.clear();
    for (std::size_t i = 0; i < p.counts.size(); ++i)
      if (p.counts[i] > 0) rows.emplace_back(bitstring(i, width), i);
    std::sort(rows.begin(), rows.end());
    const std::string prefix = std::to_string(p.index) + "," + fixed8(p.gamma) + ",";
    for (const auto& [bits, i] : rows) {
      out += prefix;
      out += bits;
      out += ',';
      out += std::to_string(p.counts[i]);
      out += ',';
      out += fixed8(p.probs_raw[i]);
      out += ',';
      if (p.probs_corrected) out += fixed8((*p.probs_corrected)[i]);
      out += '\n';
    }
  }
  return out;
}

}  // namespace scq::service
