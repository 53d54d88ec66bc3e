#pragma once

#include <ostream>

namespace syncarena {

/// Entry point of the `syncarena` tool. Returns 0 when the examined case is
/// stable, 2 when it is not, 1 on any error (diagnostic written to err).
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace syncarena
