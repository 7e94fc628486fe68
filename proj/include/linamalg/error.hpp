#pragma once

#include <stdexcept>
#include <string>

namespace linamalg {

enum class ErrorKind {
  parse,
  signature_mismatch,
  linearity,
  overlap_mismatch,
  subalgebra_failure,
  constant_clash,
  not_a_model,
  jep_unsupported,
  policy_partial,
  precondition,
  budget_exceeded,
  invariant_violation,
};

const char* to_string(ErrorKind kind);

/// Every failure raised by the library carries a kind so the command line can
/// map it onto a stable exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace linamalg
