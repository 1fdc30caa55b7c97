#pragma once

#include <iosfwd>

namespace aeex {

/// Entry point of the `aeex` tool. Exit codes: 0 success, 1 validation or
/// usage error, 2 numerical failure. Errors print one line
/// "error <CODE>: <message>" to `err`.
int parse_and_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace aeex
