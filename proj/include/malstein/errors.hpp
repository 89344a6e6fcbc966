#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace malstein {

// Every failure carries a stable machine-readable code next to the human message.
// Codes in use: EmptySupport, ProbSumNotOne, BadDistribution, SpaceTooLarge,
// SpaceTooLargeForFullDecomposition, SubsetOutOfRange, CoordinateOutOfRange,
// SpaceMismatch, NotCentered, NotDegenerate, NotNormalized, NotTwoPoint,
// BadColors, ParseError, SelfLoop, DuplicateEdge, DegenerateN, TooFewSamples,
// OutOfRange, BadInput.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

[[noreturn]] inline void fail(const char* code, const std::string& message) {
    throw Error(code, message);
}

} // namespace malstein
