#pragma once

#include <iosfwd>

#include "mtem/config.hpp"

namespace mtem {

/// Exit codes shared by all commands: 0 all verdicts passed, 1 at least one
/// verdict failed. Hard errors (bad config, overflow) propagate as
/// exceptions for the CLI driver to turn into exit code 2 plus a JSON error
/// record on stderr.
int command_simulate(const RunConfig& config, std::ostream& log);
int command_certify(const RunConfig& config, std::ostream& log);
int command_reproduce(const RunConfig& config, std::ostream& log);
int command_check(const RunConfig& config, std::ostream& log);

} // namespace mtem
