#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "sumtag/config.h"

namespace sumtag {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitRuntime = 2;

// Runs one subcommand. args excludes the program name.
int dispatch(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err, const EnvLookup& env = process_env());

}  // namespace sumtag
