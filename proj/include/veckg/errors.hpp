#pragma once

#include <stdexcept>
#include <string>

namespace veckg {

enum class ErrorCode {
    DuplicateName,
    ReservedCharacter,
    ReservedName,
    ReservedLabel,
    CycleDetected,
    KindViolation,
    SelfConstraint,
    UnknownPredicate,
    UnknownEventType,
    UnknownViewpoint,
    UnknownNode,
    UnknownEvent,
    UnreachableNode,
    WeightMismatch,
    InvalidConfig,
    InvalidLiteral,
    InvalidPattern,
    NonEventSubject,
    TypeMismatch,
    NotFound,
    AmbiguousType,
    SyntaxError,
    DanglingSingleton,
    UnknownVocabulary,
    InconsistentGraph,
};

const char* to_string(ErrorCode code);

/// Engine-wide exception; carries a stable code so callers can branch
/// without parsing messages.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

} // namespace veckg
