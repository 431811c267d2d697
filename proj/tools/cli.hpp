#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "mixinv/matrix.hpp"
#include "mixinv/mixed_block.hpp"

namespace mixinv::cli {

/// Exit statuses shared by every command.
enum Status : int { kOk = 0, kFailure = 1, kUsage = 2 };

/// Parses "3:mp,3:uc,3:mp". Throws InputError on malformed text.
BlockSpec parse_blocks(const std::string& text);

/// Parses dual | explicit | recursive | fold. Throws InputError otherwise.
MixedMethod parse_method(const std::string& text);

/// Runs one command line (args[0] is the program name) and returns its exit
/// status. Normal output goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mixinv::cli
