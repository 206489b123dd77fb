#pragma once

#include <iosfwd>

#include "qthermo/error.hpp"

namespace qthermo::cli {

enum ExitCode : int {
    kOk         = 0,
    kParse      = 2,
    kValidation = 3,
    kSingular   = 4,
    kNumeric    = 5,
};

[[nodiscard]] int exit_code_for(ErrorCode code) noexcept;

/// Entry point of the `qthermo` tool. Reports go to `out`, warnings and errors to `err`.
int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

} // namespace qthermo::cli
