#pragma once

#include <stdexcept>
#include <string>

namespace gridforge {

enum class ErrorCode {
    DimensionTooSmall,
    DimensionMismatch,
    WrongDomain,
    ChannelMismatch,
    SizeTooSmall,
    InfeasibleConstraints,
    BudgetExhausted,
    InvalidEnvironment,
    TooManyAgents,
    NoCandidateGoal,
    DegenerateGraph,
    EmptySelection,
    NumericalFailure,
    ConfigInvalid,
    Io,
};

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const { return code_; }

  private:
    ErrorCode code_;
};

}  // namespace gridforge
