// Drives the scq binary as a subprocess against an in-process service.

#include <sys/wait.h>

#include <array>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include <gtest/gtest.h>

#include "live_service.hpp"

using testing_support::LiveService;
using testing_support::TempDir;

namespace {

const std::filesystem::path kGolden = SCQ_GOLDEN_DIR;
const std::string kScq = SCQ_BINARY;

struct Outcome {
  int code = -1;
  std::string out;  ///< stdout only
};

Outcome cli(const std::string& args) {
  Outcome o;
  FILE* pipe = ::popen((kScq + " " + args + " 2>/dev/null").c_str(), "r");
  if (!pipe) return o;
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) o.out.append(buf.data(), n);
  const int status = ::pclose(pipe);
  o.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return o;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string trim(std::string s) {
  while (!s.empty() && (s.back() == '\n' || s.back() == ' ')) s.pop_back();
  return s;
}

const std::string kGoldenRun = (kGolden / "ghz3_scan.qasm").string() + " --shots 2000 --seed 20240917";

}  // namespace

TEST(Cli, LocalRunReproducesGoldenCsv) {
  const Outcome o = cli("run --local " + kGoldenRun);
  EXPECT_EQ(o.code, 0);
  EXPECT_EQ(o.out, slurp(kGolden / "ghz3_scan_seed20240917.csv"));
}

TEST(Cli, RemoteRunMatchesLocalRun) {
  TempDir dir;
  LiveService live(dir.path() / "t.db", 1);
  const Outcome o = cli("--server " + live.url() + " run " + kGoldenRun);
  EXPECT_EQ(o.code, 0);
  EXPECT_EQ(o.out, slurp(kGolden / "ghz3_scan_seed20240917.csv"));
}

TEST(Cli, SubmitStatusResultLifecycle) {
  TempDir dir;
  LiveService live(dir.path() / "t.db");
  const std::string server = "--server " + live.url() + " ";
  const Outcome submitted = cli(server + "submit " + kGoldenRun);
  ASSERT_EQ(submitted.code, 0);
  const std::string id = trim(submitted.out);
  ASSERT_EQ(id.size(), 32u);

  EXPECT_EQ(cli(server + "result " + id).code, 4);  // still queued
  const Outcome status = cli(server + "status " + id);
  EXPECT_EQ(status.code, 0);
  EXPECT_NE(status.out.find("\"queued\""), std::string::npos);

  EXPECT_EQ(cli(server + "agent --once --wait 2 --name cli").code, 0);
  const Outcome result = cli(server + "result " + id + " --csv -");
  EXPECT_EQ(result.code, 0);
  EXPECT_EQ(result.out, slurp(kGolden / "ghz3_scan_seed20240917.csv"));
}

TEST(Cli, ExitCodes) {
  TempDir dir;
  const auto bad = dir.path() / "bad.qasm";
  std::ofstream(bad) << "qubits 10\ncnot 0 2\nmeasure 0\n";
  EXPECT_EQ(cli("run --local " + bad.string()).code, 2);
  EXPECT_EQ(cli("run --local " + bad.string() + " --shots 0").code, 2);
  EXPECT_EQ(cli("frobnicate").code, 2);
  EXPECT_EQ(cli("qpt --pair 1,3 --exact").code, 2);

  LiveService live(dir.path() / "t.db");
  EXPECT_EQ(cli("--server " + live.url() + " submit " + bad.string()).code, 2);
  EXPECT_EQ(cli("--server " + live.url() + " status 0123456789abcdef0123456789abcdef").code, 5);
  EXPECT_EQ(cli("--server http://127.0.0.1:1 status abc").code, 3);
}

TEST(Cli, ExactQptOnIdealBackend) {
  const Outcome o = cli("qpt --pair Q6Q7 --exact --backend ideal");
  EXPECT_EQ(o.code, 0);
  EXPECT_EQ(o.out, "pair Q6Q7 F_chi = 1.000000\n");
}

TEST(Cli, BenchWritesTables) {
  TempDir dir;
  const Outcome o = cli("ghz-bench --local --backend ideal --n-min 9 --n-max 10 --shots 400 --resamples 0 --out-dir " +
                        dir.path().string());
  EXPECT_EQ(o.code, 0);
  const std::string table = slurp(dir.path() / "fidelity.csv");
  EXPECT_EQ(std::count(table.begin(), table.end(), '\n'), 4);
  EXPECT_TRUE(std::filesystem::exists(dir.path() / "parity_n10_offset0.csv"));
  EXPECT_TRUE(std::filesystem::exists(dir.path() / "parity_n9_offset1.csv"));
}
