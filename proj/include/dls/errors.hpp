#pragma once

#include <stdexcept>
#include <string>

namespace dls {

enum class ErrorCode {
  ok = 0,
  domain = 1,
  below_threshold = 2,
  no_lasing_solution = 3,
  singular = 4,
  no_convergence = 5,
  config = 6,
  io = 7,
  unreachable_target = 8,
  numerical = 9,
};

const char* error_name(ErrorCode c);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

struct DomainError : Error {
  explicit DomainError(const std::string& w) : Error(ErrorCode::domain, w) {}
};

struct NumericalError : Error {
  explicit NumericalError(const std::string& w) : Error(ErrorCode::numerical, w) {}
};

// margin < 0 is the amount by which the lasing condition is missed (V^2/m^2)
struct BelowThreshold : Error {
  BelowThreshold(const std::string& w, double margin) : Error(ErrorCode::below_threshold, w), margin(margin) {}
  double margin;
};

struct NoLasingSolution : Error {
  explicit NoLasingSolution(const std::string& w) : Error(ErrorCode::no_lasing_solution, w) {}
};

struct SingularSystem : Error {
  SingularSystem(const std::string& w, double cond) : Error(ErrorCode::singular, w), condition(cond) {}
  double condition;
};

struct NoConvergence : Error {
  NoConvergence(const std::string& w, double rf, double re)
      : Error(ErrorCode::no_convergence, w), residual_freq(rf), residual_field(re) {}
  double residual_freq;
  double residual_field;
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& w) : Error(ErrorCode::config, w) {}
};

struct UnreachableTarget : Error {
  explicit UnreachableTarget(const std::string& w) : Error(ErrorCode::unreachable_target, w) {}
};

}  // namespace dls
