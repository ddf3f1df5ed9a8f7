#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pir2::cli {

// Exit codes: 0 success (and verification passed), 1 verification or
// operational failure, 2 usage / parameter errors.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

int run(int argc, char** argv);

}  // namespace pir2::cli
