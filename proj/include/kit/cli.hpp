#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace kit {

// Exit codes: 0 pass, 1 usage or validation failure, 2 numeric failure.
// args excludes the program name. Reports go to `out` unless a report path is given.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace kit
