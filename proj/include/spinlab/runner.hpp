#pragma once
// Suite dispatch for the CLI.  Exit codes: 0 all verdicts hold, 1 a verdict
// failed, 2 config error, 3 numerical failure.

#include "spinlab/config.hpp"

namespace spinlab {

int run(const RunConfig& cfg);

}  // namespace spinlab
