#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mammo {

enum class ErrorCode {
  MalformedHeader,
  UnsupportedMaxval,
  TruncatedData,
  IoFailure,
  NotDivisible,
  EmptyHistogram,
  RegionTooSmall,
  DegenerateFit,
  DegenerateRegion,
  ImageTooSmall,
  InvalidArgument,
  ConfigError,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries one of the codes above so
// callers (tests, the batch runner) can branch on the kind of failure.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail),
        code_(code),
        detail_(detail) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace mammo
