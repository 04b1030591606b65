#include "scq/service/config.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace scq::service {

namespace {

int parse_int(const std::string& text, const char* what, int lo, int hi) {
  int v = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || end != text.data() + text.size() || v < lo || v > hi) {
    throw std::invalid_argument(std::string(what) + ": expected an integer in [" + std::to_string(lo) +
                                ", " + std::to_string(hi) + "], got '" + text + "'");
  }
  return v;
}

void apply_file(ServiceConfig& c, const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::invalid_argument("cannot read config file " + file.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(file.string() + ": " + e.what());
  }
  for (const auto& [key, value] : j.items()) {
    try {
      if (key == "host") c.host = value.get<std::string>();
      else if (key == "port") c.port = parse_int(std::to_string(value.get<long long>()), "port", 0, 65535);
      else if (key == "db") c.db_path = value.get<std::string>();
      else if (key == "device") c.device_path = value.get<std::string>();
      else if (key == "agent_token") c.agent_token = value.get<std::string>();
      else if (key == "user_token") c.user_token = value.get<std::string>();
      else if (key == "lease_seconds")
        c.lease_seconds = parse_int(std::to_string(value.get<long long>()), "lease_seconds", 1, 86400);
      else if (key == "static_dir") c.static_dir = value.get<std::string>();
      else throw std::invalid_argument("unknown key");
    } catch (const nlohmann::json::exception& e) {
      throw std::invalid_argument(file.string() + ": " + key + ": " + e.what());
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument(file.string() + ": " + key + ": " + e.what());
    }
  }
}

}  // namespace

std::optional<std::string> process_env(const char* name) {
  if (const char* v = std::getenv(name)) return std::string(v);
  return std::nullopt;
}

ServiceConfig load_config(const std::optional<std::filesystem::path>& file, const EnvLookup& env) {
  ServiceConfig c;
  if (file) apply_file(c, *file);
  if (auto v = env("SCQ_HOST")) c.host = *v;
  if (auto v = env("SCQ_PORT")) c.port = parse_int(*v, "SCQ_PORT", 0, 65535);
  if (auto v = env("SCQ_DB")) c.db_path = *v;
  if (auto v = env("SCQ_DEVICE")) c.device_path = *v;
  if (auto v = env("SCQ_AGENT_TOKEN")) c.agent_token = *v;
  if (auto v = env("SCQ_USER_TOKEN")) c.user_token = *v;
  if (auto v = env("SCQ_LEASE_SECONDS")) c.lease_seconds = parse_int(*v, "SCQ_LEASE_SECONDS", 1, 86400);
  if (auto v = env("SCQ_STATIC_DIR")) c.static_dir = *v;
  return c;
}

}  // namespace scq::service
