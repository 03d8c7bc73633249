#include "veckg/fusion.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "json.hpp"

#include "veckg/consistency.hpp"

namespace veckg {

const char* to_string(Verdict v) {
    return v == Verdict::Consistent ? "CONSISTENT" : "INCOMPATIBLE";
}

bool can_skip_check(ViewpointId a, ViewpointId b, const ViewpointHierarchy& h) {
    if (h.variant() != Variant::WTAH) return false;
    if (a == b) return false; // same viewpoint: the pair still needs its check
    return h.is_ancestor(a, b) || h.is_ancestor(b, a);
}

bool can_skip_check(const Triple& c1, const Triple& c2, const ViewpointHierarchy& h) {
    if (!c1.is_claim() || !c2.is_claim()) return false;
    return can_skip_check(*c1.viewpoint, *c2.viewpoint, h);
}

FusionResult fuse(const Graph& g, const std::vector<Triple>& claims, ViewpointId v,
                  bool use_shortcut) {
    if (v.index >= g.hierarchy().size())
        fail(ErrorCode::UnknownViewpoint, "viewpoint id out of range");
    FusionResult result;
    result.viewpoint = g.hierarchy().label(v);
    result.matches = claims;
    std::sort(result.matches.begin(), result.matches.end());
    result.matches.erase(std::unique(result.matches.begin(), result.matches.end()),
                         result.matches.end());

    for (const Triple& c : result.matches) {
        if (!c.is_claim()) continue;
        if (g.valid_at(c, v)) {
            result.fused_claims.push_back(c);
        } else {
            IncompatibilityEvidence ev;
            ev.kind = IncompatibilityEvidence::Kind::NotValidHere;
            ev.claim_a = g.display(c);
            ev.constraint_id = "validity";
            ev.viewpoints = {result.viewpoint};
            ev.explanation = "claim is not valid at viewpoint '" + result.viewpoint + "'";
            result.evidence.push_back(std::move(ev));
        }
    }

    for (std::size_t i = 0; i < result.fused_claims.size(); ++i) {
        for (std::size_t j = i + 1; j < result.fused_claims.size(); ++j) {
            const Triple& a = result.fused_claims[i];
            const Triple& b = result.fused_claims[j];
            if (use_shortcut && can_skip_check(a, b, g.hierarchy())) continue;
            if (auto ev = contradicts(a, b, g)) {
                ev->viewpoints = {result.viewpoint};
                result.evidence.push_back(std::move(*ev));
            }
        }
    }
    result.verdict = result.evidence.empty() ? Verdict::Consistent : Verdict::Incompatible;
    return result;
}

QueryPattern parse_pattern(const std::string& text) {
    // Tokens are whitespace-separated; a double-quoted literal counts as one
    // token with backslash escapes.
    std::vector<std::pair<std::string, bool>> tokens; // text, quoted
    std::size_t i = 0;
    while (i < text.size()) {
        if (std::isspace(static_cast<unsigned char>(text[i]))) {
            ++i;
            continue;
        }
        if (text[i] == '"') {
            std::string lit;
            ++i;
            bool closed = false;
            while (i < text.size()) {
                char c = text[i++];
                if (c == '\\' && i < text.size()) {
                    lit += text[i++];
                } else if (c == '"') {
                    closed = true;
                    break;
                } else {
                    lit += c;
                }
            }
            if (!closed) fail(ErrorCode::InvalidPattern, "unterminated literal in pattern");
            tokens.emplace_back(std::move(lit), true);
        } else {
            std::size_t start = i;
            while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
            tokens.emplace_back(text.substr(start, i - start), false);
        }
    }

    QueryPattern q;
    std::size_t n = tokens.size();
    if (n >= 1 && !tokens.back().second && tokens.back().first == "no-refine") {
        q.refine = false;
        --n;
    }
    if (n != 5 || tokens[3].second || tokens[3].first != "@")
        fail(ErrorCode::InvalidPattern,
             "expected '<s> <p> <o> @ <viewpoint>' with optional trailing 'no-refine'");
    if (tokens[4].second) fail(ErrorCode::InvalidPattern, "viewpoint must be a token");

    auto position = [&](std::size_t idx) -> std::optional<std::string> {
        if (!tokens[idx].second && tokens[idx].first.starts_with('?')) return std::nullopt;
        return tokens[idx].first;
    };
    if (tokens[0].second || tokens[1].second)
        fail(ErrorCode::InvalidPattern, "subject and predicate must be tokens or ?variables");
    q.subject = position(0);
    q.predicate = position(1);
    if (tokens[2].second) {
        q.object = Term::literal(tokens[2].first);
    } else if (!tokens[2].first.starts_with('?')) {
        q.object = Term::entity(tokens[2].first);
    }
    q.viewpoint = tokens[4].first;
    return q;
}

FusionResult query(const Graph& g, const QueryPattern& q, bool use_shortcut) {
    const Taxonomy& tax = g.taxonomy();
    ViewpointId v = g.hierarchy().require(q.viewpoint);
    std::optional<PredicateId> pattern_pred;
    if (q.predicate) pattern_pred = tax.require(*q.predicate);

    auto predicate_matches = [&](PredicateId actual) {
        if (!pattern_pred) return true;
        if (!q.refine) return *pattern_pred == actual;
        if (tax.subsumes(*pattern_pred, actual)) return true;
        // A regular predicate also reaches its attribution image: asking for
        // the plain relation surfaces the viewpoint-scoped claims about it.
        if (auto image = tax.transform_image(*pattern_pred))
            return tax.subsumes(*image, actual);
        return false;
    };
    auto object_matches = [&](const Term& actual) {
        if (!q.object) return true;
        if (q.object->is_literal())
            return actual.is_literal() && actual.lexical == q.object->lexical;
        return !actual.is_literal() && actual.lexical == q.object->lexical;
    };

    std::vector<Triple> matches;
    for (const Triple& t : g.triples_for(v)) {
        if (q.subject && t.subject != *q.subject) continue;
        if (!predicate_matches(t.predicate)) continue;
        if (!object_matches(t.object)) continue;
        matches.push_back(t);
    }

    std::vector<Triple> claim_subset;
    for (const Triple& t : matches)
        if (t.is_claim()) claim_subset.push_back(t);

    FusionResult result = fuse(g, claim_subset, v, use_shortcut);
    result.matches = std::move(matches);
    return result;
}

// --- rendering ----------------------------------------------------------

std::string FusionResult::to_text(const Graph& g, bool color) const {
    std::ostringstream out;
    out << matches.size() << " match(es) at " << viewpoint << "\n";
    for (const Triple& t : matches) out << "  " << g.display(t) << "\n";
    const char* verdict_str = to_string(verdict);
    if (color)
        out << "verdict: " << (verdict == Verdict::Consistent ? "\033[32m" : "\033[31m")
            << verdict_str << "\033[0m\n";
    else
        out << "verdict: " << verdict_str << "\n";
    for (const auto& ev : evidence) {
        out << "  [" << to_string(ev.kind) << "] " << ev.claim_a;
        if (!ev.claim_b.empty()) out << "  vs  " << ev.claim_b;
        out << "\n    " << ev.explanation << "\n";
    }
    return out.str();
}

std::string FusionResult::to_json(const Graph& g) const {
    nlohmann::ordered_json j;
    j["schema"] = "veckg.query/1";
    j["viewpoint"] = viewpoint;
    j["matches"] = nlohmann::ordered_json::array();
    for (const Triple& t : matches) {
        nlohmann::ordered_json m;
        m["subject"] = t.subject;
        m["predicate"] = g.taxonomy().name(t.predicate);
        m["object"] = to_display(t.object);
        if (t.is_claim())
            m["viewpoint"] = g.hierarchy().label(*t.viewpoint);
        else
            m["viewpoint"] = nullptr;
        j["matches"].push_back(std::move(m));
    }
    j["verdict"] = verdict == Verdict::Consistent ? "consistent" : "incompatible";
    j["evidence"] = nlohmann::ordered_json::array();
    for (const auto& ev : evidence) {
        nlohmann::ordered_json e;
        e["kind"] = to_string(ev.kind);
        e["claim_a"] = ev.claim_a;
        e["claim_b"] = ev.claim_b;
        e["constraint"] = ev.constraint_id;
        e["explanation"] = ev.explanation;
        j["evidence"].push_back(std::move(e));
    }
    return j.dump(2);
}

} // namespace veckg
