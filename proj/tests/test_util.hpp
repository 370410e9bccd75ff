#pragma once

#include <functional>
#include <optional>

#include "davenport/error.hpp"

namespace davenport::testutil {

// Runs fn and reports the ErrorCode it threw, or nullopt if it returned
// normally.  Lets tests assert on the code instead of matching messages.
inline std::optional<ErrorCode> error_code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

}  // namespace davenport::testutil
