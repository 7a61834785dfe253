#pragma once

#include <ostream>

namespace genmetrics::cli {

// Exit statuses.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitInvalidInput = 2;

/// Entry point shared by the executable and the tests. Validation failures
/// print {"error": <code>, "message": ...} on `err` and return 2.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace genmetrics::cli
