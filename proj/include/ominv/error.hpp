#pragma once

#include <stdexcept>
#include <string>

namespace ominv {

enum class ErrorCode {
    DegreeCapExceeded,
    DivisionByZero,
    NotSquare,
    ShapeMismatch,
    UnboundVariable,
    BackendUnavailable,
    BackendDisagreement,
    NoCertificate,
    NotOnTorus,
    ParseError,
    PrecisionUnreachable,
    BelowThreshold,
    SearchExhausted,
    InvalidInput,
    Internal,
};

const char *error_code_name(ErrorCode c);

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string &what)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + what),
          code_(code) {}
    ErrorCode code() const { return code_; }

  private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode c, const std::string &msg) {
    throw Error(c, msg);
}

inline void require(bool cond, ErrorCode c, const std::string &msg) {
    if (!cond)
        fail(c, msg);
}

} // namespace ominv
