#pragma once

#include <iosfwd>
#include <map>
#include <string>

#include "wavedof/config.hpp"

namespace wavedof::cli {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,     // bad flags, unreadable or unwritable files
  kExitConfig = 2,    // configuration invariant violated
  kExitCap = 3,       // mode count above the cap
  kExitResolution = 4 // quadrature grid too coarse
};

/// `key = value` lines; '#' starts a comment. Throws ConfigError on malformed lines.
std::map<std::string, std::string> parse_config_text(const std::string& text);

/// Entry point for `wavedof <subcommand> ...`.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace wavedof::cli
