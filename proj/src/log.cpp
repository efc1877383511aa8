#include "dls/log.hpp"

#include <spdlog/sinks/stdout_sinks.h>

#include <cstdlib>
#include <string>

namespace dls {

spdlog::logger& log() {
  static std::shared_ptr<spdlog::logger> logger = [] {
    auto l = std::make_shared<spdlog::logger>("dls", std::make_shared<spdlog::sinks::stderr_sink_mt>());
    const char* env = std::getenv("DLS_LOG");
    const std::string lvl = env ? env : "warn";
    if (lvl == "debug")
      l->set_level(spdlog::level::debug);
    else if (lvl == "info")
      l->set_level(spdlog::level::info);
    else
      l->set_level(spdlog::level::warn);
    l->set_pattern("[%l] %v");
    return l;
  }();
  return *logger;
}

}  // namespace dls
