#ifndef MOYALSPIN_ERROR_HPP
#define MOYALSPIN_ERROR_HPP

#include <stdexcept>
#include <string>

namespace moyalspin {

enum class ErrorCode {
  InvalidArgument,
  DimensionParity,
  KernelZero,
  InvalidState,
  DimensionMismatch,
  GridMismatch,
  ResonantDenominator,
  StepTooLarge,
};

const char* to_string(ErrorCode code) noexcept;

// All library failures are reported with this exception; the C API maps
// the code onto ms_status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace moyalspin

#endif
