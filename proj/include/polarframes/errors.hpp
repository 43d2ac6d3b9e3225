#pragma once

#include <stdexcept>
#include <string>

namespace polarframes {

enum class ErrorCode {
  DegenerateImmersion,
  ZeroSecondFundamentalForm,
  ChartBoundary,
  InconsistentMinimality,
  NotMinimal,
  PoleExcluded,
  SingularMetric,
  WrongSpectrum,
  StencilOutOfDomain,
  NonpositiveLambda,
  UnknownSurface,
  InvalidConfig,
};

const char* to_string(ErrorCode code);

/// Base class of every error raised by the toolkit. Each failure mode has its
/// own subclass so callers can catch precisely; `code()` is there for
/// reporting.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

#define POLARFRAMES_DEFINE_ERROR(Name)                                    \
  class Name : public Error {                                             \
   public:                                                                \
    explicit Name(const std::string& what) : Error(ErrorCode::Name, what) {} \
  }

POLARFRAMES_DEFINE_ERROR(DegenerateImmersion);
POLARFRAMES_DEFINE_ERROR(ZeroSecondFundamentalForm);
POLARFRAMES_DEFINE_ERROR(ChartBoundary);
POLARFRAMES_DEFINE_ERROR(InconsistentMinimality);
POLARFRAMES_DEFINE_ERROR(NotMinimal);
POLARFRAMES_DEFINE_ERROR(PoleExcluded);
POLARFRAMES_DEFINE_ERROR(SingularMetric);
POLARFRAMES_DEFINE_ERROR(WrongSpectrum);
POLARFRAMES_DEFINE_ERROR(StencilOutOfDomain);
POLARFRAMES_DEFINE_ERROR(NonpositiveLambda);
POLARFRAMES_DEFINE_ERROR(UnknownSurface);
POLARFRAMES_DEFINE_ERROR(InvalidConfig);

#undef POLARFRAMES_DEFINE_ERROR

}  // namespace polarframes
