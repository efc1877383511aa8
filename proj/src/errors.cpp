#include "dls/errors.hpp"

namespace dls {

const char* error_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::ok: return "ok";
    case ErrorCode::domain: return "domain";
    case ErrorCode::below_threshold: return "below_threshold";
    case ErrorCode::no_lasing_solution: return "no_lasing_solution";
    case ErrorCode::singular: return "singular";
    case ErrorCode::no_convergence: return "no_convergence";
    case ErrorCode::config: return "config";
    case ErrorCode::io: return "io";
    case ErrorCode::unreachable_target: return "unreachable_target";
    case ErrorCode::numerical: return "numerical";
  }
  return "unknown";
}

}  // namespace dls
