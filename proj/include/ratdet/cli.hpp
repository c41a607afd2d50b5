#pragma once

#include <iosfwd>

namespace ratdet {

/// Entry point of the `ratdet` tool. Results go to `out`, statistics and
/// error messages to `err`. Returns the process exit code.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ratdet
