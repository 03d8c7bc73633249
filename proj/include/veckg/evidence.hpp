#pragma once

#include <optional>
#include <string>
#include <vector>

namespace veckg {

/// Why a pair of claims (or a single claim, for validity complaints) cannot
/// stand together. `viewpoints` lists the hierarchy nodes where the conflict
/// shows.
struct IncompatibilityEvidence {
    enum class Kind {
        MutualExclusion,
        InverseRole,
        Negation,
        Rule,
        EventTypeClash,
        NotValidHere,
    };

    Kind kind = Kind::MutualExclusion;
    std::string claim_a;               // display form, e.g. "RUvsUKR defender_RU Russia"
    std::string claim_b;               // empty for single-claim evidence
    std::string constraint_id;         // XOR pair, rule id, or builtin tag
    std::vector<std::string> viewpoints;
    std::string explanation;
};

const char* to_string(IncompatibilityEvidence::Kind kind);

} // namespace veckg
