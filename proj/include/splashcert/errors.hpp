#pragma once

#include <stdexcept>
#include <string>

namespace splashcert {

/// Error taxonomy shared by the library and the CLI. Each class maps to a
/// process exit code so scripted runs can distinguish configuration mistakes,
/// detected splashes, failed certifications and I/O trouble.
enum class ErrorCode {
  config = 2,
  splash = 3,
  certification = 4,
  io = 5,
  numerical = 6,
};

inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::config: return "config";
    case ErrorCode::splash: return "splash";
    case ErrorCode::certification: return "certification";
    case ErrorCode::io: return "io";
    case ErrorCode::numerical: return "numerical";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& what) : Error(ErrorCode::config, what) {}
};

/// Phases touch (f <= g somewhere) or a contour meets itself at sample
/// resolution. Terminates a run with exit code 3.
struct SplashError : Error {
  explicit SplashError(const std::string& what) : Error(ErrorCode::splash, what) {}
};

struct IoError : Error {
  explicit IoError(const std::string& what) : Error(ErrorCode::io, what) {}
};

/// Any other numerical failure: singular kernel evaluation away from a
/// splash, non-finite integrand values, rejected time steps, degenerate
/// parametrizations, malformed series files.
struct NumericalError : Error {
  explicit NumericalError(const std::string& what) : Error(ErrorCode::numerical, what) {}
};

struct GridMismatchError : ConfigError {
  explicit GridMismatchError(const std::string& what) : ConfigError(what) {}
};

struct StepRejectedError : NumericalError {
  explicit StepRejectedError(const std::string& what) : NumericalError(what) {}
};

struct ChartError : NumericalError {
  explicit ChartError(const std::string& what) : NumericalError(what) {}
};

struct MalformedSeriesError : NumericalError {
  explicit MalformedSeriesError(const std::string& what) : NumericalError(what) {}
};

}  // namespace splashcert
