#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qthermo {

enum class ErrorCode {
    NotHermitian,
    NonFinite,
    NoConvergence,
    SingularMatrix,
    TraceNotOne,
    NotPositive,
    BlochOutOfBall,
    WrongDimension,
    DimensionMismatch,
    SingularM,
    ZeroW,
    DegenerateSpectrum,
    ZeroPopulation,
    NoSolution,
    LatticeTooSmall,
    BoundaryOverflow,
    OutOfPhysicalRange,
    InfiniteT,
    InvalidArgument,
    ParseError,
};

std::string_view to_string(ErrorCode code) noexcept;

// Every failure raised by the library carries a code so the CLI can map it to
// an exit status; the message names the violated invariant.
class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string &what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

  private:
    ErrorCode code_;
};

} // namespace qthermo
