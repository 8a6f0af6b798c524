#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "primesim/types.hpp"

namespace primesim::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kConfig = 2, kData = 3, kNumerical = 4 };

// Subcommands: simulate, analyze (impact|decay|acf), tune-dar, replay.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// "5s", "1h", "250ms", "30m", "100us", "7ns"; a bare number is seconds.
std::optional<SimTime> parse_duration(const std::string& text);

}  // namespace primesim::cli
