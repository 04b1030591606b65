// scq: command-line client, benchmark driver, server and agent launcher.
//
// Exit codes: 0 ok, 2 rejected input or usage, 3 network, 4 pending,
// 5 not found, 1 anything else.

#include <atomic>
#include <csignal>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "scq/bench.hpp"
#include "scq/device.hpp"
#include "scq/service/agent.hpp"
#include "scq/service/config.hpp"
#include "scq/service/server.hpp"
#include "scq/service/task_store.hpp"

namespace {

using namespace scq;
using namespace scq::service;

enum Exit { kOk = 0, kOther = 1, kRejected = 2, kNetwork = 3, kPending = 4, kNotFound = 5 };

/// Flags shared by several subcommands.
struct Common {
  std::string server;
  std::string user_token;
  std::string agent_token;
  std::string device_path;
};

struct RunFlags {
  std::uint64_t shots = kDefaultShots;
  std::string backend = "calibrated";
  bool no_correction = false;
  std::optional<std::uint64_t> seed;
  bool local = false;
};

std::string env_or(const char* a, const char* b, std::string fallback) {
  if (auto v = process_env(a)) return *v;
  if (b)
    if (auto v = process_env(b)) return *v;
  return fallback;
}

Backend backend_of(const std::string& name) { return *parse_backend(name); }

DeviceSpec load_device(const Common& c) {
  return c.device_path.empty() ? default_device() : load_device_spec_file(c.device_path);
}

ServiceClient client_of(const Common& c, std::string agent_name = "agent") {
  return ServiceClient(c.server, {c.user_token, c.agent_token, std::move(agent_name)});
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

void print_errors(const std::string& file, const std::string& message, const std::vector<qasm::SourceError>& errors) {
  std::cerr << "rejected: " << message << "\n";
  for (const auto& e : errors) std::cerr << file << ":" << e.line << ":" << e.column << ": " << e.message << "\n";
}

/// Maps the exceptions of the client and the runners onto exit codes.
int guarded(const std::string& file, const std::function<int()>& body) {
  try {
    return body();
  } catch (const NetworkError& e) {
    std::cerr << "network error: " << e.what() << "\n";
    return kNetwork;
  } catch (const SubmissionRejected& e) {
    print_errors(file, e.what(), e.rejection().errors);
    return kRejected;
  } catch (const ApiError& e) {
    if (e.status() == 404) {
      std::cerr << "not found: " << e.what() << "\n";
      return kNotFound;
    }
    if (e.status() == 409 && (e.task_status() == "queued" || e.task_status() == "running")) {
      std::cerr << "pending: task is " << e.task_status() << "\n";
      return kPending;
    }
    if (e.status() == 400 || e.status() == 413 || e.status() == 422) {
      print_errors(file, e.what(), e.errors());
      return kRejected;
    }
    std::cerr << "error: " << e.what() << "\n";
    return kOther;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRejected;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kOther;
  }
}

void add_run_flags(CLI::App* cmd, RunFlags& f, bool with_local) {
  cmd->add_option("--shots", f.shots, "Shots per scan point")->check(CLI::Range(std::uint64_t{1}, kMaxShots));
  cmd->add_option("--backend", f.backend, "ideal or calibrated")->check(CLI::IsMember({"ideal", "calibrated"}));
  cmd->add_flag("--no-correction", f.no_correction, "Skip readout correction");
  cmd->add_option("--seed", f.seed, "Sampler seed");
  if (with_local) cmd->add_flag("--local", f.local, "Run in this process instead of the service");
}

TaskRequest request_of(const RunFlags& f, std::string source) {
  TaskRequest r;
  r.source = std::move(source);
  r.shots = f.shots;
  r.backend = backend_of(f.backend);
  r.apply_correction = !f.no_correction;
  r.seed = f.seed;
  return r;
}

std::unique_ptr<TaskRunner> runner_of(const Common& c, bool local) {
  if (local) return std::make_unique<LocalRunner>(load_device(c));
  return std::make_unique<RemoteRunner>(client_of(c));
}

/// "5" or "5,6" (0-based) or "Q6Q7" (1-based) → lower index of the pair.
int parse_pair(const std::string& text) {
  std::smatch m;
  if (std::regex_match(text, m, std::regex(R"([Qq](\d+)[-_ ]?[Qq](\d+))"))) {
    const int a = std::stoi(m[1]) - 1, b = std::stoi(m[2]) - 1;
    if (b != a + 1) throw std::invalid_argument("pair " + text + " is not adjacent");
    return a;
  }
  if (std::regex_match(text, m, std::regex(R"((\d+),(\d+))"))) {
    const int a = std::stoi(m[1]), b = std::stoi(m[2]);
    if (b != a + 1) throw std::invalid_argument("pair " + text + " is not adjacent");
    return a;
  }
  if (std::regex_match(text, m, std::regex(R"(\d+)"))) return std::stoi(text);
  throw std::invalid_argument("cannot read pair '" + text + "'");
}

std::atomic<bool> g_stop{false};

void on_signal(int) { g_stop = true; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ScQ cloud platform client, benchmark driver and service"};
  app.require_subcommand(1);
  Common common;
  common.server = env_or("SCQ_SERVER_URL", "SERVER_URL", "http://127.0.0.1:8080");
  common.user_token = env_or("SCQ_USER_TOKEN", "SCQ_TOKEN", "");
  common.agent_token = env_or("SCQ_AGENT_TOKEN", nullptr, "");
  common.device_path = env_or("SCQ_DEVICE", nullptr, "");
  app.add_option("--server", common.server, "Service base URL");
  app.add_option("--token", common.user_token, "User bearer token");
  app.add_option("--agent-token", common.agent_token, "Agent bearer token");
  app.add_option("--device", common.device_path, "Device document (default: bundled scq10)");

  // submit
  auto* submit = app.add_subcommand("submit", "Submit an assembly file, print the task id");
  std::string submit_file;
  RunFlags submit_flags;
  submit->add_option("file", submit_file, "Assembly source")->required();
  add_run_flags(submit, submit_flags, false);

  // status
  auto* status = app.add_subcommand("status", "Print a task as JSON");
  std::string status_id;
  status->add_option("id", status_id)->required();

  // result
  auto* result = app.add_subcommand("result", "Fetch a finished task's result");
  std::string result_id, result_csv, result_json;
  result->add_option("id", result_id)->required();
  result->add_option("--csv", result_csv, "Write the CSV here ('-' for stdout)");
  result->add_option("--json", result_json, "Write the JSON document here ('-' for stdout)");

  // run
  auto* run = app.add_subcommand("run", "Run an assembly file and print its CSV");
  std::string run_file, run_csv = "-", run_json;
  RunFlags run_flags;
  run->add_option("file", run_file, "Assembly source")->required();
  run->add_option("--csv", run_csv, "Write the CSV here ('-' for stdout)");
  run->add_option("--json", run_json, "Also write the JSON document here");
  add_run_flags(run, run_flags, true);

  // ghz-bench
  auto* bench = app.add_subcommand("ghz-bench", "GHZ fidelity campaign over all chain blocks");
  BenchOptions bench_opts;
  RunFlags bench_flags;
  bench_flags.seed = bench_opts.seed;
  std::string bench_dir;
  bench->add_option("--n-min", bench_opts.n_min)->check(CLI::Range(1, 14));
  bench->add_option("--n-max", bench_opts.n_max)->check(CLI::Range(1, 14));
  bench->add_option("--resamples", bench_opts.resamples, "Bootstrap resamples (0 disables)")->check(CLI::Range(0, 100000));
  bench->add_option("--scan-start", bench_opts.scan.start);
  bench->add_option("--scan-stop", bench_opts.scan.stop);
  bench->add_option("--scan-count", bench_opts.scan.count)->check(CLI::Range(3, 10000));
  bench->add_option("--out-dir", bench_dir, "Write fidelity.csv and per-block parity CSVs here");
  add_run_flags(bench, bench_flags, true);

  // qpt
  auto* qpt = app.add_subcommand("qpt", "Process tomography of a CZ gate");
  std::string qpt_pair, qpt_out;
  RunFlags qpt_flags;
  qpt_flags.seed = 7;
  bool qpt_exact_mode = false;
  qpt->add_option("--pair", qpt_pair, "Chain neighbours: 5, 5,6 or Q6Q7")->required();
  qpt->add_flag("--exact", qpt_exact_mode, "Exact density-matrix sub-mode (in process)");
  qpt->add_option("--out", qpt_out, "Write chi as CSV here");
  add_run_flags(qpt, qpt_flags, true);

  // serve
  auto* serve = app.add_subcommand("serve", "Run the task service");
  std::string serve_config;
  std::optional<int> serve_port;
  std::optional<std::string> serve_db, serve_static;
  int serve_agents = 0;
  serve->add_option("--config", serve_config, "JSON config file");
  serve->add_option("--port", serve_port);
  serve->add_option("--db", serve_db, "Task store file");
  serve->add_option("--static", serve_static, "Directory served at /");
  serve->add_option("--agents", serve_agents, "Also start this many in-process agents")->check(CLI::Range(0, 64));

  // agent
  auto* agent = app.add_subcommand("agent", "Pull and execute tasks from the service");
  std::string agent_name = "agent";
  int agent_wait = 20;
  bool agent_once = false;
  agent->add_option("--name", agent_name);
  agent->add_option("--wait", agent_wait, "Long-poll seconds")->check(CLI::Range(0, 60));
  agent->add_flag("--once", agent_once, "Handle at most one task");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kRejected;
  }

  if (*submit) {
    return guarded(submit_file, [&] {
      const std::string id = client_of(common).submit(request_of(submit_flags, read_file(submit_file)));
      std::cout << id << "\n";
      return kOk;
    });
  }

  if (*status) {
    return guarded("", [&] {
      std::cout << client_of(common).task(status_id).dump(2) << "\n";
      return kOk;
    });
  }

  if (*result) {
    return guarded("", [&] {
      const ServiceClient client = client_of(common);
      if (!result_json.empty()) write_output(result_json, client.result_json(result_id));
      if (!result_csv.empty() || result_json.empty()) write_output(result_csv, client.result_csv(result_id));
      return kOk;
    });
  }

  if (*run) {
    return guarded(run_file, [&] {
      auto runner = runner_of(common, run_flags.local);
      const ResultDocument doc = runner->run(request_of(run_flags, read_file(run_file)));
      if (!run_json.empty()) write_output(run_json, to_json(doc).dump(2) + "\n");
      write_output(run_csv, to_csv(doc));
      return kOk;
    });
  }

  if (*bench) {
    return guarded("", [&] {
      bench_opts.shots = bench_flags.shots;
      bench_opts.backend = backend_of(bench_flags.backend);
      if (bench_flags.seed) bench_opts.seed = *bench_flags.seed;
      auto runner = runner_of(common, bench_flags.local);
      const auto blocks = ghz_bench(*runner, load_device(common), bench_opts);
      const std::string table = fidelity_table_csv(blocks);
      if (bench_dir.empty()) {
        std::cout << table;
      } else {
        std::filesystem::create_directories(bench_dir);
        write_output(bench_dir + "/fidelity.csv", table);
        for (const auto& b : blocks) {
          write_output(bench_dir + "/parity_n" + std::to_string(b.report.block.n) + "_offset" +
                           std::to_string(b.report.block.offset) + ".csv",
                       parity_curve_csv(b));
        }
        std::cerr << "wrote " << blocks.size() << " blocks to " << bench_dir << "\n";
      }
      if (bench_opts.backend == Backend::Ideal) {
        for (const auto& b : blocks) {
          if (b.report.fidelity < 0.99) {
            std::cerr << "ideal block n=" << b.report.block.n << " offset=" << b.report.block.offset
                      << " has F=" << b.report.fidelity << " < 0.99\n";
            return kOther;
          }
        }
      }
      return kOk;
    });
  }

  if (*qpt) {
    return guarded("", [&] {
      const DeviceSpec device = load_device(common);
      const int low = parse_pair(qpt_pair);
      const Backend backend = backend_of(qpt_flags.backend);
      QptOutcome outcome;
      if (qpt_exact_mode) {
        outcome = qpt_exact(device, low, backend);
      } else {
        auto runner = runner_of(common, qpt_flags.local);
        outcome = qpt_sampled(*runner, device, low, qpt_flags.shots, backend, qpt_flags.seed.value_or(7));
      }
      std::printf("pair Q%dQ%d F_chi = %.6f\n", low + 1, low + 2, outcome.fidelity);
      if (!qpt_out.empty()) write_output(qpt_out, chi_csv(outcome.chi));
      return kOk;
    });
  }

  if (*serve) {
    return guarded("", [&] {
      ServiceConfig config = load_config(serve_config.empty() ? std::nullopt
                                                              : std::optional<std::filesystem::path>(serve_config));
      if (serve_port) config.port = *serve_port;
      if (serve_db) config.db_path = *serve_db;
      if (serve_static) config.static_dir = *serve_static;
      const DeviceSpec device =
          config.device_path ? load_device_spec_file(*config.device_path) : default_device();
      TaskStore store(config.db_path);
      TaskService svc(store, device, {std::chrono::seconds(config.lease_seconds)});
      HttpServer server(svc, {config.agent_token, config.user_token, config.static_dir});
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      const int port = server.start(config.host, config.port);
      std::cerr << "scq: serving on " << config.host << ":" << port << " (store " << config.db_path.string()
                << ")\n";
      std::vector<std::thread> agents;
      for (int i = 0; i < serve_agents; ++i) {
        agents.emplace_back([&, i] {
          Common local = common;
          local.server = "http://127.0.0.1:" + std::to_string(port);
          local.agent_token = config.agent_token;
          Agent worker(client_of(local, "local-agent-" + std::to_string(i)), device,
                       [](const std::string& line) { std::cerr << line << "\n"; });
          worker.run(g_stop, 1);
        });
      }
      while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(200));
      server.stop();
      for (auto& t : agents) t.join();
      return kOk;
    });
  }

  if (*agent) {
    return guarded("", [&] {
      Agent worker(client_of(common, agent_name), load_device(common),
                   [](const std::string& line) { std::cerr << line << "\n"; });
      if (agent_once) {
        worker.poll_once(agent_wait);
        return kOk;
      }
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      worker.run(g_stop, agent_wait);
      return kOk;
    });
  }
  return kOther;
}
