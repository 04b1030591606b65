// Acceptance gate: one PASS/FAIL line per criterion, non-zero exit on any
// failure. Tolerances and shot counts are pinned below.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <fstream>
#include <map>
#include <mutex>
#include <numbers>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "../generators.hpp"
#include "../live_service.hpp"
#include "../oracles.hpp"
#include "scq/bench.hpp"
#include "scq/ghz.hpp"
#include "scq/qasm.hpp"
#include "scq/readout.hpp"
#include "scq/service/worker.hpp"
#include "scq/simulator.hpp"
#include "scq/tomography.hpp"

using namespace scq;
using namespace scq::service;

namespace {

constexpr double kIdealProbTol = 1e-12;
constexpr std::uint64_t kIdealShots = 100'000;
constexpr double kIdealMinFidelity = 0.995;
constexpr double kIdealSeconds = 30.0;
constexpr double kParityCoherenceTol = 1e-6;
constexpr double kWrongPeriodRatio = 10.0;
constexpr double kReadoutInverseTol = 1e-10;
constexpr std::uint64_t kReadoutShots = 1'000'000;
constexpr double kReadoutFidelityTol = 0.01;
constexpr double kQptIdealTol = 1e-9;
constexpr double kQptDepolarizedTol = 1e-6;
constexpr double kQptSeconds = 10.0;
constexpr std::uint64_t kTrajectoryShots = 1'000'000;
constexpr double kTrajectoryTv = 0.005;
constexpr double kCrosstalkTol = 1e-10;
constexpr double kBandLow = 0.60;
constexpr double kBandHigh = 0.95;
constexpr std::uint64_t kBandShots = 3000;
constexpr double kQptBand = 0.04;
constexpr int kParserCases = 10'000;

const std::filesystem::path kGolden = SCQ_GOLDEN_DIR;

struct Verdict {
  bool pass = false;
  std::string detail;
};

using Steady = std::chrono::steady_clock;

double seconds_since(Steady::time_point t0) {
  return std::chrono::duration<double>(Steady::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Verdict ideal_ghz() {
  const auto t0 = Steady::now();
  double worst_prob = 0.0;
  for (int n = 2; n <= 10; ++n) {
    for (int offset = 0; offset + n <= 10; ++offset) {
      const ProbabilityTable p = run_exact(build_ghz(n, offset, 10));
      const std::size_t ones = (std::size_t{1} << n) - 1;
      worst_prob = std::max({worst_prob, std::abs(p[0] - 0.5), std::abs(p[ones] - 0.5)});
    }
  }
  LocalRunner runner(default_device());
  BenchOptions o;
  o.n_min = 2;
  o.n_max = 10;
  o.shots = kIdealShots;
  o.backend = Backend::Ideal;
  o.resamples = 0;
  double worst_f = 1.0;
  std::size_t blocks = 0;
  for (const BenchBlock& b : ghz_bench(runner, default_device(), o)) {
    worst_f = std::min(worst_f, b.report.fidelity);
    ++blocks;
  }
  const double elapsed = seconds_since(t0);
  return {worst_prob <= kIdealProbTol && worst_f >= kIdealMinFidelity && blocks == 45 && elapsed < kIdealSeconds,
          std::to_string(blocks) + " blocks, max |p-0.5| " + fmt("%.2e", worst_prob) + ", min F " +
              fmt("%.5f", worst_f) + ", " + fmt("%.1f s", elapsed)};
}

Verdict parity_law() {
  const ScanSpec scan = default_parity_scan();
  double min_c = 1.0;
  double min_ratio = std::numeric_limits<double>::infinity();
  for (int n = 2; n <= 10; ++n) {
    const Circuit c = append_parity_stage(build_ghz(n), scan);
    ParityCurve curve{scan.points(), {}, n};
    for (int k = 0; k < scan.count; ++k) curve.parities.push_back(parity(run_exact(instantiate(c, k))));
    const ParityFit right = fit_parity(curve);
    min_c = std::min(min_c, right.coherence);
    for (int wrong : {n - 1, n + 1}) {
      const ParityFit bad = fit_parity(curve, wrong);
      // Exact curves fit with rmse near machine epsilon; floor it so the ratio
      // stays meaningful.
      min_ratio = std::min(min_ratio, bad.rmse / std::max(right.rmse, 1e-15));
    }
  }
  return {min_c >= 1 - kParityCoherenceTol && min_ratio >= kWrongPeriodRatio,
          "min C " + fmt("%.9f", min_c) + ", min wrong/right rmse " + fmt("%.3g", min_ratio)};
}

Verdict readout_inverse() {
  const DeviceSpec& dev = default_device();
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const int m = 1 + static_cast<int>(rng() % 6);
    std::vector<int> qubits(10);
    std::iota(qubits.begin(), qubits.end(), 0);
    std::shuffle(qubits.begin(), qubits.end(), rng);
    qubits.resize(static_cast<std::size_t>(m));
    std::sort(qubits.begin(), qubits.end());
    Eigen::VectorXd actual(Eigen::Index{1} << m);
    for (auto& x : actual) x = u(rng);
    actual /= actual.sum();
    std::vector<Eigen::Matrix2d> factors;
    std::vector<Confusion> conf;
    for (int q : qubits) {
      const auto& spec = dev.qubits[static_cast<std::size_t>(q)];
      factors.push_back(oracle::confusion(spec.f0, spec.f1));
      conf.push_back({spec.f0, spec.f1});
    }
    const Eigen::VectorXd observed = oracle::kron_lsb(factors) * actual;
    const ProbabilityTable back = readout_correct(ProbabilityTable(qubits, observed), conf);
    worst = std::max(worst, (back.probs - actual).cwiseAbs().maxCoeff());
  }

  // Readout-only GHZ(6): corrected fidelity should come back to 1.
  const std::vector<int> block = {0, 1, 2, 3, 4, 5};
  const NoiseModel noise = NoiseModel::readout_only(dev);
  const std::vector<Confusion> conf = noise.confusions(block);
  const Circuit pop = build_ghz(6, 0, 10);
  const ProbabilityTable p = readout_correct(run_shots(pop, kReadoutShots, noise, 5).points[0].probs_raw, conf);
  const ScanSpec scan = default_parity_scan();
  const RunResult scanned = run_shots(append_parity_stage(pop, scan), kReadoutShots, noise, 6);
  ParityCurve curve{scan.points(), {}, 6};
  for (const ScanPoint& pt : scanned.points) curve.parities.push_back(parity(readout_correct(pt.probs_raw, conf)));
  const GhzReport r = ghz_report({0, 6}, p, curve);
  return {worst <= kReadoutInverseTol && std::abs(r.fidelity - 1.0) <= kReadoutFidelityTol,
          "max inverse error " + fmt("%.2e", worst) + ", GHZ(6) corrected F " + fmt("%.5f", r.fidelity)};
}

CircuitExecutor density_executor(const NoiseModel& noise) {
  return [noise](const Circuit& c) {
    const auto raw = run_density_exact(c, noise);
    return readout_correct(raw, noise.confusions(raw.qubits));
  };
}

Verdict qpt_oracle() {
  const auto t0 = Steady::now();
  const ProcessMatrix ideal_chi = chi_from_unitary(gates::cz<double>());
  double worst_ideal = 0.0;
  for (int low = 0; low < 9; ++low)
    worst_ideal = std::max(worst_ideal, std::abs(qpt_exact(default_device(), low, Backend::Ideal).fidelity - 1.0));
  double worst_dep = 0.0;
  for (double p : {0.02, 0.05, 0.1}) {
    NoiseModel noise = NoiseModel::ideal(2);
    noise.p2[0] = 15.0 * p / 16.0;  // non-identity share of the depolarizing channel
    const auto chi = qpt_two_qubit(density_executor(noise), QptDesign{2, {0, 1}, GateKind::CZ});
    worst_dep = std::max(worst_dep, std::abs(process_fidelity(chi, ideal_chi) - ((1 - p) + p / 16)));
  }
  const double elapsed = seconds_since(t0);
  return {worst_ideal <= kQptIdealTol && worst_dep <= kQptDepolarizedTol && elapsed < kQptSeconds,
          "ideal |F-1| " + fmt("%.2e", worst_ideal) + ", depolarized err " + fmt("%.2e", worst_dep) + ", " +
              fmt("%.2f s", elapsed)};
}

Verdict trajectory_vs_density() {
  std::mt19937_64 rng(570);
  const NoiseModel full = NoiseModel::calibrated(default_device());
  double worst = 0.0;
  for (int t = 0; t < 10; ++t) {
    const Circuit c = decompose_cnot(gen::random_circuit(rng, 5, 30, false));
    std::vector<int> labels(static_cast<std::size_t>(c.num_qubits()));
    std::iota(labels.begin(), labels.end(), 0);
    const NoiseModel noise = full.restrict(labels);
    const ProbabilityTable want = run_density_exact(c, noise);
    const ProbabilityTable got = run_shots(c, kTrajectoryShots, noise, 9000 + static_cast<std::uint64_t>(t)).points[0].probs_raw;
    worst = std::max(worst, 0.5 * (got.probs - want.probs).cwiseAbs().sum());
  }
  return {worst <= kTrajectoryTv, "max TV " + fmt("%.5f", worst) + " over 10 circuits"};
}

Verdict crosstalk_round_trip() {
  const CrosstalkMatrix& ct = default_device().crosstalk;
  std::mt19937_64 rng(571);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    Eigen::VectorXd z(ct.size());
    for (auto& x : z) x = u(rng);
    worst = std::max(worst, (ct.m * crosstalk_compensate(ct, z) - z).cwiseAbs().maxCoeff());
  }
  return {worst <= kCrosstalkTol, "max residual " + fmt("%.2e", worst)};
}

Verdict calibrated_band() {
  LocalRunner runner(default_device());
  BenchOptions o;
  o.shots = kBandShots;
  o.resamples = 0;
  std::map<int, std::vector<double>> by_n;
  for (const BenchBlock& b : ghz_bench(runner, default_device(), o)) by_n[b.report.block.n].push_back(b.report.fidelity);
  std::vector<double> means;
  std::string detail = "mean F";
  for (const auto& [n, fs] : by_n) {
    double s = 0.0;
    for (double f : fs) s += f;
    means.push_back(s / static_cast<double>(fs.size()));
    detail += " N" + std::to_string(n) + "=" + fmt("%.3f", means.back());
  }
  bool monotone = means.size() == 5;
  for (std::size_t i = 1; i < means.size(); ++i) monotone = monotone && means[i] < means[i - 1];
  const bool in_band = !means.empty() && means.back() >= kBandLow && means.back() <= kBandHigh;

  double worst_qpt = 0.0;
  for (int low = 0; low < 9; ++low) {
    const double f = qpt_exact(default_device(), low, Backend::Calibrated).fidelity;
    worst_qpt = std::max(worst_qpt, std::abs(f - default_device().couplers[static_cast<std::size_t>(low)].cz_process_fidelity));
  }
  detail += "; max |F_chi - table| " + fmt("%.4f", worst_qpt);
  return {monotone && in_band && worst_qpt <= kQptBand, detail};
}

TaskRequest ghz_request(int n, std::uint64_t shots, std::uint64_t seed, bool scan) {
  Circuit c = build_ghz(n);
  if (scan) c = append_parity_stage(c, default_parity_scan());
  TaskRequest r;
  r.source = qasm::serialize(c);
  r.shots = shots;
  r.seed = seed;
  return r;
}

Verdict service_lifecycle() {
  using testing_support::LiveService;
  using testing_support::TempDir;
  std::vector<std::string> notes;
  bool ok = true;

  {  // submit, agent, result for a GHZ(6) scan; same numbers as in process
    TempDir dir;
    LiveService live(dir.path() / "e2e.db", 1);
    RemoteRunner remote(live.client());
    LocalRunner local(default_device());
    const auto request = ghz_request(6, 3000, 73, true);
    const ResultDocument doc = remote.run(request);
    const bool same = to_csv(doc) == to_csv(local.run(request)) && doc.points.size() == 51;
    ok = ok && same;
    notes.push_back(same ? "e2e ok" : "e2e mismatch");
  }
  {  // 2 agents, 50 tasks, each delivered once
    TempDir dir;
    LiveService live(dir.path() / "stress.db");
    const ServiceClient user = live.client();
    std::set<std::string> ids;
    for (int i = 0; i < 50; ++i) ids.insert(user.submit(ghz_request(2 + i % 5, 100, static_cast<std::uint64_t>(i), false)));
    std::mutex mutex;
    std::multiset<std::string> delivered;
    std::atomic<bool> stop{false};
    std::vector<std::thread> agents;
    for (int a = 0; a < 2; ++a) {
      agents.emplace_back([&, a] {
        const ServiceClient me = live.client("stress-" + std::to_string(a));
        while (!stop) {
          const auto task = me.next(1);
          if (!task) continue;
          {
            std::lock_guard lock(mutex);
            delivered.insert(task->id);
          }
          me.report_result(task->id, execute_task(*task, default_device()));
        }
      });
    }
    const auto deadline = Steady::now() + std::chrono::seconds(120);
    while (live.store().count(TaskStatus::Done) < 50 && Steady::now() < deadline)
      std::this_thread::sleep_for(std::chrono::milliseconds(20));
    stop = true;
    for (auto& t : agents) t.join();
    bool once = delivered.size() == 50 && live.store().count(TaskStatus::Done) == 50;
    for (const auto& id : ids) once = once && delivered.count(id) == 1;
    ok = ok && once;
    notes.push_back(once ? "stress 50/50 exactly once" : "stress delivery broken");
  }
  {  // restart with queued and leased tasks
    TempDir dir;
    const auto db = dir.path() / "restart.db";
    std::vector<std::string> ids;
    {
      LiveService live(db, 0, std::chrono::milliseconds(200));
      const ServiceClient c = live.client("w");
      for (int i = 0; i < 10; ++i) ids.push_back(c.submit(ghz_request(3, 100, static_cast<std::uint64_t>(i), false)));
      const auto t = c.next(1);
      c.report_result(t->id, execute_task(*t, default_device()));
      (void)c.next(1);  // left running across the restart
    }
    LiveService live(db, 0, std::chrono::milliseconds(200));
    std::this_thread::sleep_for(std::chrono::milliseconds(300));  // let the old lease expire
    live.start_agent("after-restart");
    const ServiceClient c = live.client();
    bool kept = true;
    for (const auto& id : ids) {
      const auto deadline = Steady::now() + std::chrono::seconds(30);
      while (c.task(id)["status"] != "done" && Steady::now() < deadline)
        std::this_thread::sleep_for(std::chrono::milliseconds(20));
      kept = kept && c.task(id)["status"] == "done";
    }
    ok = ok && kept;
    notes.push_back(kept ? "restart kept 10/10" : "restart lost tasks");
  }
  {  // fixed-seed CSV against the golden file
    TempDir dir;
    LiveService live(dir.path() / "golden.db", 1);
    TaskRequest r;
    r.source = slurp(kGolden / "ghz3_scan.qasm");
    r.shots = 2000;
    r.seed = 20240917;
    RemoteRunner remote(live.client());
    const std::string csv = live.client().result_csv(remote.run(r).task_id);
    const bool golden = csv == slurp(kGolden / "ghz3_scan_seed20240917.csv");
    ok = ok && golden;
    notes.push_back(golden ? "golden CSV identical" : "golden CSV differs");
  }
  std::string detail;
  for (const auto& n : notes) detail += (detail.empty() ? "" : ", ") + n;
  return {ok, detail};
}

Verdict parser_property() {
  std::mt19937_64 rng(574);
  int failures = 0;
  for (int i = 0; i < kParserCases; ++i) {
    const Circuit c = gen::random_circuit(rng);
    const std::string text = qasm::serialize(c);
    const auto r = qasm::parse(text);
    if (!r.ok() || !(*r.circuit == c) || qasm::serialize(*r.circuit) != text) ++failures;
  }
  for (int i = 0; i < kParserCases; ++i) {
    try {
      const auto r = qasm::parse(gen::random_text(rng));
      if (r.ok() != r.circuit.has_value()) ++failures;
      for (const auto& e : r.errors)
        if (e.line < 1 || e.column < 1 || e.message.empty()) ++failures;
    } catch (...) {
      ++failures;
    }
  }
  return {failures == 0, std::to_string(2 * kParserCases) + " cases, " + std::to_string(failures) + " failures"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"ideal-ghz-correctness", ideal_ghz},
      {"parity-oscillation-law", parity_law},
      {"readout-correction-inverse", readout_inverse},
      {"qpt-oracle-equivalence", qpt_oracle},
      {"trajectory-vs-density", trajectory_vs_density},
      {"crosstalk-round-trip", crosstalk_round_trip},
      {"calibrated-band-plausibility", calibrated_band},
      {"service-lifecycle", service_lifecycle},
      {"parser-totality-round-trip", parser_property},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Verdict v;
    const auto t0 = Steady::now();
    try {
      v = check();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s %-30s %s [%.1f s]\n", v.pass ? "PASS" : "FAIL", name.c_str(), v.detail.c_str(), seconds_since(t0));
    std::fflush(stdout);
    if (!v.pass) ++failed;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
