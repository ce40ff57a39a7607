#pragma once

#include <ostream>

namespace gkb::cli {

// Runs the self-verification suite, printing one "name: PASS/FAIL" line per
// check. The oracle-agreement tolerance defaults to the library tolerance
// scaled by (reference mu / mu); pass tolerance_override > 0 to pin it.
// Returns true when every check passes.
bool run_verify(double mu, double tolerance_override, std::ostream& os);

}  // namespace gkb::cli
