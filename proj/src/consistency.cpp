#include "veckg/consistency.hpp"

#include <algorithm>

#include "json.hpp"

namespace veckg {

const char* to_string(IncompatibilityEvidence::Kind kind) {
    using K = IncompatibilityEvidence::Kind;
    switch (kind) {
    case K::MutualExclusion: return "mutual_exclusion";
    case K::InverseRole: return "inverse_role";
    case K::Negation: return "negation";
    case K::Rule: return "rule";
    case K::EventTypeClash: return "event_type_clash";
    case K::NotValidHere: return "not_valid_here";
    }
    return "?";
}

namespace {

// Scoped constraints and rules select on the claim's own viewpoint-resolved
// event type. Total: an ambiguous typing matches when any candidate does.
bool scope_matches(const Graph& g, const Triple& claim, const std::optional<EventTypeId>& scope) {
    if (!scope) return true;
    auto types = g.event_types_in(claim.subject, *claim.viewpoint);
    return std::find(types.begin(), types.end(), *scope) != types.end();
}

std::string object_key(const Term& t) { return to_display(t); }

bool bind_var(std::map<std::string, std::string>& bindings, const std::string& var,
          const std::string& value) {
    auto [it, inserted] = bindings.try_emplace(var, value);
    return inserted || it->second == value;
}

bool unify(const Triple& c1, const RulePattern& p1, const Triple& c2, const RulePattern& p2) {
    if (c1.predicate != p1.predicate || c2.predicate != p2.predicate) return false;
    std::map<std::string, std::string> bindings;
    return bind_var(bindings, p1.subject_var, c1.subject) &&
           bind_var(bindings, p1.object_var, object_key(c1.object)) &&
           bind_var(bindings, p2.subject_var, c2.subject) &&
           bind_var(bindings, p2.object_var, object_key(c2.object));
}

std::vector<std::string> common_validity(const Graph& g, const Triple& a, const Triple& b) {
    std::vector<std::string> out;
    for (ViewpointId v : g.hierarchy().all_nodes())
        if (g.valid_at(a, v) && g.valid_at(b, v)) out.push_back(g.hierarchy().label(v));
    return out;
}

std::string scope_suffix(const Graph& g, const std::optional<EventTypeId>& scope) {
    return scope ? "@" + g.taxonomy().event_type_name(*scope) : std::string{};
}

} // namespace

std::optional<IncompatibilityEvidence> contradicts(const Triple& c1, const Triple& c2,
                                                   const Graph& g) {
    if (!c1.is_claim() || !c2.is_claim()) return std::nullopt;
    if (c1 == c2) return std::nullopt;
    const Taxonomy& tax = g.taxonomy();

    auto finish = [&](IncompatibilityEvidence ev) {
        ev.claim_a = g.display(c1);
        ev.claim_b = g.display(c2);
        ev.viewpoints = common_validity(g, c1, c2);
        return ev;
    };

    // Two event typings of one event disagree.
    if (tax.is_event_typing(c1.predicate) && tax.is_event_typing(c2.predicate) &&
        c1.subject == c2.subject && !(c1.object == c2.object)) {
        IncompatibilityEvidence ev;
        ev.kind = IncompatibilityEvidence::Kind::EventTypeClash;
        ev.constraint_id = "event_type";
        ev.explanation = "competing event typings " + to_display(c1.object) + " vs " +
                         to_display(c2.object) + " for " + c1.subject;
        return finish(std::move(ev));
    }

    if (c1.subject == c2.subject && c1.object == c2.object) {
        PredicateKind k1 = tax.kind(c1.predicate);
        PredicateKind k2 = tax.kind(c2.predicate);

        // p against not_p.
        if (k1 != k2 && tax.positive_base(c1.predicate) == tax.positive_base(c2.predicate)) {
            IncompatibilityEvidence ev;
            ev.kind = IncompatibilityEvidence::Kind::Negation;
            ev.constraint_id = "negation(" + tax.name(tax.positive_base(c1.predicate)) + ")";
            ev.explanation = "'" + tax.name(tax.positive_base(c1.predicate)) +
                             "' is both asserted and denied for " + c1.subject + "/" +
                             to_display(c1.object);
            return finish(std::move(ev));
        }

        // Declared attribution constraints bind positive attributions only;
        // denying one of two exclusive roles conflicts with nothing.
        if (k1 == PredicateKind::Attribution && k2 == PredicateKind::Attribution) {
            if (auto c = tax.constraint_between(c1.predicate, c2.predicate)) {
                if (scope_matches(g, c1, c->scope) && scope_matches(g, c2, c->scope)) {
                    IncompatibilityEvidence ev;
                    bool exclusion = c->kind == ConstraintKind::MutualExclusion;
                    ev.kind = exclusion ? IncompatibilityEvidence::Kind::MutualExclusion
                                        : IncompatibilityEvidence::Kind::InverseRole;
                    ev.constraint_id = std::string(exclusion ? "XOR(" : "INV(") +
                                       tax.name(c->left) + "," + tax.name(c->right) + ")" +
                                       scope_suffix(g, c->scope);
                    ev.explanation = std::string(exclusion ? "mutually exclusive attributions '"
                                                           : "inverse roles '") +
                                     tax.name(c1.predicate) + "' and '" + tax.name(c2.predicate) +
                                     "' applied to the same participant " + to_display(c1.object) +
                                     " of " + c1.subject;
                    return finish(std::move(ev));
                }
            }
        }
    }

    for (const ConsistencyRule& r : tax.rules()) {
        if (!scope_matches(g, c1, r.scope) || !scope_matches(g, c2, r.scope)) continue;
        if (unify(c1, r.a, c2, r.b) || unify(c1, r.b, c2, r.a)) {
            IncompatibilityEvidence ev;
            ev.kind = IncompatibilityEvidence::Kind::Rule;
            ev.constraint_id = r.id + scope_suffix(g, r.scope);
            ev.explanation = "consistency rule " + r.id + " declares this pair incompatible";
            return finish(std::move(ev));
        }
    }
    return std::nullopt;
}

bool compatible(const Triple& c1, const Triple& c2, ViewpointId v, const Graph& g) {
    if (v.index >= g.hierarchy().size())
        fail(ErrorCode::UnknownViewpoint, "viewpoint id out of range");
    if (!g.valid_at(c1, v) || !g.valid_at(c2, v)) return true;
    return !contradicts(c1, c2, g).has_value();
}

ViewpointVerdict check_viewpoint(const Graph& g, ViewpointId v) {
    if (v.index >= g.hierarchy().size())
        fail(ErrorCode::UnknownViewpoint, "viewpoint id out of range");
    ViewpointVerdict out;
    out.viewpoint = g.hierarchy().label(v);

    std::vector<const Triple*> valid;
    for (const Triple& c : g.claims())
        if (g.valid_at(c, v)) valid.push_back(&c);

    for (std::size_t i = 0; i < valid.size(); ++i) {
        for (std::size_t j = i + 1; j < valid.size(); ++j) {
            if (auto ev = contradicts(*valid[i], *valid[j], g)) {
                ev->viewpoints = {out.viewpoint};
                out.evidence.push_back(std::move(*ev));
            }
        }
    }
    out.consistent = out.evidence.empty();
    return out;
}

ConsistencyReport check_graph(const Graph& g) {
    ConsistencyReport report;
    for (ViewpointId v : g.hierarchy().all_nodes()) {
        report.per_viewpoint.push_back(check_viewpoint(g, v));
        report.overall = report.overall && report.per_viewpoint.back().consistent;
    }
    return report;
}

AdmitDecision admit_insertion(const Graph& g, const Triple& claim, CascadePolicy policy) {
    AdmitDecision decision;
    if (!claim.is_claim()) return decision;
    const ViewpointHierarchy& h = g.hierarchy();

    bool rejected = false;
    for (const Triple& other : g.claims()) {
        if (other == claim) continue;
        auto ev = contradicts(claim, other, g);
        if (!ev) continue;
        std::vector<std::string> where;
        for (ViewpointId v : h.all_nodes())
            if (g.valid_at(claim, v) && g.valid_at(other, v)) where.push_back(h.label(v));
        if (where.empty()) continue; // never co-valid, e.g. incompatible siblings
        ev->viewpoints = std::move(where);
        if (h.is_ancestor(*claim.viewpoint, *other.viewpoint)) {
            decision.victims.push_back(other);
        } else {
            rejected = true;
        }
        decision.evidence.push_back(std::move(*ev));
    }

    if (rejected) {
        decision.status = MutationStatus::Incompatible;
        return decision;
    }
    if (!decision.victims.empty() && policy == CascadePolicy::None) {
        decision.status = MutationStatus::CascadeRequired;
        return decision;
    }

    // Final gate: simulate the commit. Catches second-order effects the
    // pairwise pass cannot see, e.g. an event-typing claim re-activating a
    // latent conflict between two bystander claims.
    Graph candidate = g;
    for (const Triple& victim : decision.victims) candidate.remove_unchecked(victim);
    candidate.insert_unchecked(claim);
    ConsistencyReport report = check_graph(candidate);
    if (!report.overall) {
        decision.status = MutationStatus::Incompatible;
        for (const auto& verdict : report.per_viewpoint)
            for (const auto& ev : verdict.evidence) decision.evidence.push_back(ev);
    }
    return decision;
}

std::vector<IncompatibilityEvidence> fact_claim_lint(const Graph& g) {
    std::vector<IncompatibilityEvidence> out;
    const Taxonomy& tax = g.taxonomy();
    for (const Triple& c : g.claims()) {
        if (tax.kind(c.predicate) != PredicateKind::NegatedAttribution) continue;
        PredicateId base = tax.positive_base(c.predicate);
        auto source = tax.transform_source(base);
        if (!source) continue;
        for (const Triple& f : g.facts()) {
            if (f.predicate != *source || f.subject != c.subject || !(f.object == c.object))
                continue;
            IncompatibilityEvidence ev;
            ev.kind = IncompatibilityEvidence::Kind::Negation;
            ev.claim_a = g.display(c);
            ev.claim_b = g.display(f);
            ev.constraint_id = "fact_claim_lint";
            ev.explanation = "claim denies what the fact '" + g.display(f) +
                             "' states; facts and single claims are compatible by definition, "
                             "so this is advisory";
            out.push_back(std::move(ev));
        }
    }
    return out;
}

// --- report rendering --------------------------------------------------

namespace {

const char* kGreen = "\033[32m";
const char* kRed = "\033[31m";
const char* kReset = "\033[0m";

nlohmann::ordered_json evidence_json(const IncompatibilityEvidence& ev) {
    nlohmann::ordered_json j;
    j["kind"] = to_string(ev.kind);
    j["claim_a"] = ev.claim_a;
    j["claim_b"] = ev.claim_b;
    j["constraint"] = ev.constraint_id;
    j["viewpoints"] = ev.viewpoints;
    j["explanation"] = ev.explanation;
    return j;
}

} // namespace

std::string ConsistencyReport::to_text(bool color) const {
    std::string out = "viewpoint-consistent: ";
    if (overall)
        out += color ? std::string(kGreen) + "yes" + kReset : "yes";
    else
        out += color ? std::string(kRed) + "NO" + kReset : "NO";
    out += "\n";
    for (const auto& verdict : per_viewpoint) {
        out += "  " + verdict.viewpoint + ": ";
        if (verdict.consistent)
            out += color ? std::string(kGreen) + "consistent" + kReset : "consistent";
        else
            out += color ? std::string(kRed) + "INCONSISTENT" + kReset : "INCONSISTENT";
        out += "\n";
        for (const auto& ev : verdict.evidence) {
            out += "    [" + std::string(to_string(ev.kind)) + "] " + ev.claim_a;
            if (!ev.claim_b.empty()) out += "  vs  " + ev.claim_b;
            if (!ev.constraint_id.empty()) out += "  (" + ev.constraint_id + ")";
            out += "\n      " + ev.explanation + "\n";
        }
    }
    return out;
}

std::string ConsistencyReport::to_json() const {
    nlohmann::ordered_json j;
    j["schema"] = "veckg.report/1";
    j["consistent"] = overall;
    j["viewpoints"] = nlohmann::ordered_json::array();
    for (const auto& verdict : per_viewpoint) {
        nlohmann::ordered_json v;
        v["viewpoint"] = verdict.viewpoint;
        v["consistent"] = verdict.consistent;
        v["evidence"] = nlohmann::ordered_json::array();
        for (const auto& ev : verdict.evidence) v["evidence"].push_back(evidence_json(ev));
        j["viewpoints"].push_back(std::move(v));
    }
    return j.dump(2);
}

} // namespace veckg
