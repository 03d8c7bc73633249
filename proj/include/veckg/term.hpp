#pragma once

#include <compare>
#include <string>
#include <string_view>

#include "veckg/errors.hpp"

namespace veckg {

enum class LiteralKind { Plain, TimeInstant, TimeInterval };

/// A triple object: an entity reference, an event reference, or a literal.
/// Literal datatypes are inferred from the lexical form so that the wire
/// format round-trips without datatype annotations: ISO-8601 instants become
/// time instants, `t1/t2` pairs of instants become time intervals (t1 < t2
/// enforced), everything else stays plain.
struct Term {
    enum class Kind { Entity, Event, Literal };

    Kind kind = Kind::Entity;
    std::string lexical;
    LiteralKind literal_kind = LiteralKind::Plain;

    static Term entity(std::string_view token);
    static Term event(std::string_view token);
    static Term literal(std::string_view text);

    bool is_literal() const { return kind == Kind::Literal; }

    friend bool operator==(const Term&, const Term&) = default;
    friend auto operator<=>(const Term&, const Term&) = default;
};

/// Tokens name entities, events, predicates, viewpoints and event types.
/// No whitespace or quotes; `#` is reserved for singleton-property
/// instance names on the wire.
bool valid_token(std::string_view token);
void require_token(std::string_view token, const char* what);

bool looks_like_instant(std::string_view text);
bool looks_like_interval(std::string_view text);

std::string to_display(const Term& t);

} // namespace veckg
