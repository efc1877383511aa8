#pragma once

#include <spdlog/spdlog.h>

namespace dls {

// Logger writing to stderr; level from DLS_LOG (debug|info|warn), default warn.
spdlog::logger& log();

}  // namespace dls
