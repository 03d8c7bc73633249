#include "veckg/term.hpp"

#include <cctype>

namespace veckg {

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

int two_digits(std::string_view s) { return (s[0] - '0') * 10 + (s[1] - '0'); }

// YYYY-MM-DD with an optional Thh:mm:ss[Z] tail. Field ranges are checked
// but not calendar rules (no month lengths, no leap years): the engine never
// does date math, it only needs a stable datatype guess that survives a
// round-trip.
bool is_instant(std::string_view s) {
    if (s.size() < 10) return false;
    if (!all_digits(s.substr(0, 4)) || s[4] != '-' || !all_digits(s.substr(5, 2)) ||
        s[7] != '-' || !all_digits(s.substr(8, 2)))
        return false;
    int month = two_digits(s.substr(5, 2));
    int day = two_digits(s.substr(8, 2));
    if (month < 1 || month > 12 || day < 1 || day > 31) return false;
    if (s.size() == 10) return true;
    std::string_view t = s.substr(10);
    if (t.size() < 9 || t[0] != 'T') return false;
    if (!all_digits(t.substr(1, 2)) || t[3] != ':' || !all_digits(t.substr(4, 2)) ||
        t[6] != ':' || !all_digits(t.substr(7, 2)))
        return false;
    if (two_digits(t.substr(1, 2)) > 23 || two_digits(t.substr(4, 2)) > 59 ||
        two_digits(t.substr(7, 2)) > 59)
        return false;
    t = t.substr(9);
    return t.empty() || t == "Z";
}

} // namespace

bool looks_like_instant(std::string_view text) { return is_instant(text); }

bool looks_like_interval(std::string_view text) {
    auto slash = text.find('/');
    if (slash == std::string_view::npos) return false;
    return is_instant(text.substr(0, slash)) && is_instant(text.substr(slash + 1));
}

bool valid_token(std::string_view token) {
    if (token.empty()) return false;
    for (char c : token) {
        if (std::isspace(static_cast<unsigned char>(c))) return false;
        if (c == '"' || c == '#') return false;
    }
    return true;
}

void require_token(std::string_view token, const char* what) {
    if (token.empty())
        fail(ErrorCode::ReservedCharacter, std::string(what) + " must be a non-empty token");
    for (char c : token) {
        if (std::isspace(static_cast<unsigned char>(c)) || c == '"')
            fail(ErrorCode::ReservedCharacter,
                 std::string(what) + " '" + std::string(token) + "' contains whitespace or quotes");
        if (c == '#')
            fail(ErrorCode::ReservedCharacter,
                 std::string(what) + " '" + std::string(token) +
                     "' uses '#', reserved for singleton-property instances");
    }
}

Term Term::entity(std::string_view token) {
    require_token(token, "entity");
    return Term{Kind::Entity, std::string(token), LiteralKind::Plain};
}

Term Term::event(std::string_view token) {
    require_token(token, "event");
    return Term{Kind::Event, std::string(token), LiteralKind::Plain};
}

Term Term::literal(std::string_view text) {
    Term t{Kind::Literal, std::string(text), LiteralKind::Plain};
    if (is_instant(text)) {
        t.literal_kind = LiteralKind::TimeInstant;
    } else if (looks_like_interval(text)) {
        auto slash = text.find('/');
        // ISO-8601 instants order lexicographically, so string comparison
        // decides t1 < t2.
        if (text.substr(0, slash) >= text.substr(slash + 1))
            fail(ErrorCode::InvalidLiteral,
                 "interval '" + std::string(text) + "' needs start strictly before end");
        t.literal_kind = LiteralKind::TimeInterval;
    }
    return t;
}

std::string to_display(const Term& t) {
    if (!t.is_literal()) return t.lexical;
    std::string out;
    out.reserve(t.lexical.size() + 2);
    out += '"';
    for (char c : t.lexical) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    out += '"';
    return out;
}

} // namespace veckg
