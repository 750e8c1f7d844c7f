#pragma once

#include <stdexcept>
#include <string>

namespace gmqdt {

// Base class for every error raised by the library. kind() is a stable
// machine-readable tag used by the CLI error lines.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

struct DomainError : Error {
  explicit DomainError(const std::string& w) : Error("domain", w) {}
};
struct PoleError : Error {
  explicit PoleError(const std::string& w) : Error("pole", w) {}
};
struct NoRootError : Error {
  explicit NoRootError(const std::string& w) : Error("no_root", w) {}
};
struct ConvergenceError : Error {
  explicit ConvergenceError(const std::string& w) : Error("convergence", w) {}
};
struct StepSizeError : Error {
  explicit StepSizeError(const std::string& w) : Error("step_size", w) {}
};
struct ZoneError : Error {
  explicit ZoneError(const std::string& w) : Error("zone", w) {}
};
struct SingularMatrixError : Error {
  explicit SingularMatrixError(const std::string& w) : Error("singular", w) {}
};
struct UndersamplingError : Error {
  explicit UndersamplingError(const std::string& w) : Error("undersampled", w) {}
};
struct BinError : Error {
  explicit BinError(const std::string& w) : Error("bin", w) {}
};
struct NormalizationError : Error {
  explicit NormalizationError(const std::string& w) : Error("normalization", w) {}
};
struct ConfigError : Error {
  explicit ConfigError(const std::string& w) : Error("config", w) {}
};

}  // namespace gmqdt
