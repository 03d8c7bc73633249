#include "veckg/errors.hpp"

namespace veckg {

const char* to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::DuplicateName: return "DuplicateName";
    case ErrorCode::ReservedCharacter: return "ReservedCharacter";
    case ErrorCode::ReservedName: return "ReservedName";
    case ErrorCode::ReservedLabel: return "ReservedLabel";
    case ErrorCode::CycleDetected: return "CycleDetected";
    case ErrorCode::KindViolation: return "KindViolation";
    case ErrorCode::SelfConstraint: return "SelfConstraint";
    case ErrorCode::UnknownPredicate: return "UnknownPredicate";
    case ErrorCode::UnknownEventType: return "UnknownEventType";
    case ErrorCode::UnknownViewpoint: return "UnknownViewpoint";
    case ErrorCode::UnknownNode: return "UnknownNode";
    case ErrorCode::UnknownEvent: return "UnknownEvent";
    case ErrorCode::UnreachableNode: return "UnreachableNode";
    case ErrorCode::WeightMismatch: return "WeightMismatch";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::InvalidLiteral: return "InvalidLiteral";
    case ErrorCode::InvalidPattern: return "InvalidPattern";
    case ErrorCode::NonEventSubject: return "NonEventSubject";
    case ErrorCode::TypeMismatch: return "TypeMismatch";
    case ErrorCode::NotFound: return "NotFound";
    case ErrorCode::AmbiguousType: return "AmbiguousType";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::DanglingSingleton: return "DanglingSingleton";
    case ErrorCode::UnknownVocabulary: return "UnknownVocabulary";
    case ErrorCode::InconsistentGraph: return "InconsistentGraph";
    }
    return "UnknownError";
}

} // namespace veckg
