#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>

namespace scq::service {

/// Server settings. Precedence: defaults, then the JSON config file, then
/// environment variables:
///
///     SCQ_HOST  SCQ_PORT  SCQ_DB  SCQ_DEVICE  SCQ_AGENT_TOKEN
///     SCQ_USER_TOKEN  SCQ_LEASE_SECONDS  SCQ_STATIC_DIR
struct ServiceConfig {
  std::string host = "0.0.0.0";
  int port = 8080;  ///< 0 picks a free port
  std::filesystem::path db_path = "scq-tasks.db";
  std::optional<std::filesystem::path> device_path;  ///< bundled scq10 when absent
  std::string agent_token;                           ///< empty disables agent auth
  std::string user_token;                            ///< empty disables user auth
  int lease_seconds = 300;
  std::optional<std::filesystem::path> static_dir;   ///< composer bundle
};

using EnvLookup = std::function<std::optional<std::string>(const char*)>;

/// Reads the process environment.
std::optional<std::string> process_env(const char* name);

/// Throws std::invalid_argument naming the bad key or variable.
ServiceConfig load_config(const std::optional<std::filesystem::path>& file,
                          const EnvLookup& env = process_env);

}  // namespace scq::service
