#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hydeep {

enum class ErrorKind {
  invalid_argument,
  undefined_effectiveness,
  missing_factor,
  invalid_rank,
  empty_input,
  missing_quantification,
  missing_level,
  no_usable_history,
  no_effectiveness_history,
  zero_actual,
  all_zero_differences,
  insufficient_history,
  unwritable_path,
};

std::string_view to_string(ErrorKind kind) noexcept;

// Every failure raised by the library carries a kind so callers (the CLI in
// particular) can map it without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace hydeep
