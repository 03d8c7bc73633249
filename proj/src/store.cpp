#include "veckg/store.hpp"

#include <algorithm>

#include "veckg/consistency.hpp"

namespace veckg {

const char* to_string(MutationStatus s) {
    switch (s) {
    case MutationStatus::Ok: return "ok";
    case MutationStatus::NotPermissible: return "not permissible";
    case MutationStatus::Incompatible: return "incompatible";
    case MutationStatus::CascadeRequired: return "cascade required";
    case MutationStatus::DanglingInverseRole: return "dangling inverse role";
    case MutationStatus::NotFound: return "not found";
    }
    return "?";
}

std::string MutationResult::message() const {
    std::string out = to_string(status);
    for (const auto& ev : evidence) {
        out += "\n  ";
        out += ev.explanation;
        if (!ev.claim_a.empty() && !ev.claim_b.empty())
            out += "\n    between: " + ev.claim_a + "  |  " + ev.claim_b;
    }
    if (!victims.empty()) {
        out += "\n  affected descendant claim(s): " + std::to_string(victims.size());
    }
    return out;
}

Graph::Graph(std::shared_ptr<const Taxonomy> taxonomy,
             std::shared_ptr<const ViewpointHierarchy> hierarchy)
    : taxonomy_(std::move(taxonomy)), hierarchy_(std::move(hierarchy)) {
    if (!taxonomy_ || !hierarchy_)
        fail(ErrorCode::InvalidConfig, "graph needs a taxonomy and a hierarchy");
}

// --- events ----------------------------------------------------------------

void Graph::add_event(std::string_view id, std::string_view base_type) {
    require_token(id, "event id");
    EventTypeId type = taxonomy_->require_event_type(base_type);
    auto it = events_.find(id);
    if (it != events_.end()) {
        if (it->second.base_type != type)
            fail(ErrorCode::DuplicateName,
                 "event '" + std::string(id) + "' is already registered as '" +
                     taxonomy_->event_type_name(it->second.base_type) + "'");
        return;
    }
    EventRecord rec;
    rec.id = std::string(id);
    rec.base_type = type;
    events_.emplace(rec.id, std::move(rec));
}

bool Graph::has_event(std::string_view id) const { return events_.count(id) > 0; }

const EventRecord& Graph::event(std::string_view id) const {
    auto it = events_.find(id);
    if (it == events_.end())
        fail(ErrorCode::UnknownEvent, "no event named '" + std::string(id) + "'");
    return it->second;
}

std::vector<EventTypeId> Graph::event_types_in(std::string_view ev, ViewpointId v) const {
    const EventRecord& rec = event(ev);
    auto typing = taxonomy_->event_typing_attribution();
    std::vector<EventTypeId> out;
    if (typing) {
        for (const Triple& c : claims_) {
            if (c.predicate != *typing || c.subject != ev) continue;
            if (!hierarchy_->in_validity_set(*c.viewpoint, v)) continue;
            out.push_back(taxonomy_->require_event_type(c.object.lexical));
        }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
    }
    if (out.empty()) out.push_back(rec.base_type);
    return out;
}

EventTypeId Graph::event_type_in(std::string_view ev, ViewpointId v) const {
    auto types = event_types_in(ev, v);
    if (types.size() > 1) {
        std::string names;
        for (EventTypeId t : types) {
            if (!names.empty()) names += ", ";
            names += taxonomy_->event_type_name(t);
        }
        fail(ErrorCode::AmbiguousType, "event '" + std::string(ev) + "' has competing typings at '" +
                                           hierarchy_->label(v) + "': " + names);
    }
    return types.front();
}

// --- validation ------------------------------------------------------------

void Graph::validate_fact(const Triple& t) const {
    if (t.viewpoint)
        fail(ErrorCode::KindViolation, "facts carry no attribution viewpoint; use insert_claim");
    if (!has_event(t.subject))
        fail(ErrorCode::NonEventSubject, "'" + t.subject + "' is not a registered event");
    PredicateKind k = taxonomy_->kind(t.predicate);
    if (t.predicate == taxonomy_->event_type_predicate())
        fail(ErrorCode::ReservedName, "base event typing is set when the event is registered");
    if (k != PredicateKind::Regular && k != PredicateKind::Parameterized)
        fail(ErrorCode::KindViolation, "'" + taxonomy_->name(t.predicate) +
                                           "' is an attribution; facts take regular or "
                                           "parameterized predicates");
    if (!taxonomy_->defined_for(t.predicate, event(t.subject).base_type))
        fail(ErrorCode::TypeMismatch, "'" + taxonomy_->name(t.predicate) +
                                          "' is not defined for events of type '" +
                                          taxonomy_->event_type_name(event(t.subject).base_type) +
                                          "'");
}

void Graph::validate_claim_shape(const Triple& t) const {
    if (!t.viewpoint)
        fail(ErrorCode::KindViolation, "claims need an attribution viewpoint");
    if (t.viewpoint->index >= hierarchy_->size())
        fail(ErrorCode::UnknownViewpoint, "claim viewpoint id out of range");
    if (!has_event(t.subject))
        fail(ErrorCode::NonEventSubject, "'" + t.subject + "' is not a registered event");
    PredicateKind k = taxonomy_->kind(t.predicate);
    if (k != PredicateKind::Attribution && k != PredicateKind::NegatedAttribution)
        fail(ErrorCode::KindViolation, "'" + taxonomy_->name(t.predicate) +
                                           "' is not an attribution; use insert_fact");
    if (taxonomy_->is_event_typing(t.predicate)) {
        if (t.object.is_literal() || !taxonomy_->find_event_type(t.object.lexical))
            fail(ErrorCode::UnknownEventType,
                 "event-typing claim needs a registered event type, got " + to_display(t.object));
    }
}

// --- bookkeeping -----------------------------------------------------------

void Graph::note_attribute(const Triple& t) {
    auto it = events_.find(t.subject);
    if (it == events_.end()) return;
    EventRecord& rec = it->second;
    if (t.object.is_literal() && t.object.literal_kind != LiteralKind::Plain)
        rec.has_time = true;
    if (taxonomy_->name(t.predicate) == "location") rec.has_location = true;
    if (!t.object.is_literal()) rec.has_participant = true;
}

void Graph::refresh_event_flags() {
    for (auto& [id, rec] : events_) {
        rec.has_time = false;
        rec.has_location = false;
        rec.has_participant = false;
    }
    for (const Triple& t : facts_) note_attribute(t);
    for (const Triple& t : claims_) note_attribute(t);
}

// --- reads -----------------------------------------------------------------

bool Graph::contains(const Triple& t) const {
    return facts_.count(t) > 0 || claims_.count(t) > 0;
}

std::vector<Triple> Graph::claims_at(ViewpointId v) const {
    std::vector<Triple> out;
    for (const Triple& c : claims_)
        if (c.viewpoint == v) out.push_back(c);
    return out;
}

bool Graph::valid_at(const Triple& claim, ViewpointId v) const {
    if (v.index >= hierarchy_->size())
        fail(ErrorCode::UnknownViewpoint, "viewpoint id out of range");
    if (!claim.is_claim()) return true; // facts hold everywhere
    if (!hierarchy_->in_validity_set(*claim.viewpoint, v)) return false;
    if (taxonomy_->is_event_typing(claim.predicate)) return true;
    auto types = event_types_in(claim.subject, v);
    return std::any_of(types.begin(), types.end(), [&](EventTypeId t) {
        return taxonomy_->defined_for(claim.predicate, t);
    });
}

std::vector<Triple> Graph::triples_for(ViewpointId v) const {
    if (v.index >= hierarchy_->size())
        fail(ErrorCode::UnknownViewpoint, "viewpoint id out of range");
    std::vector<Triple> out(facts_.begin(), facts_.end());
    for (const Triple& c : claims_)
        if (valid_at(c, v)) out.push_back(c);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::string> Graph::incomplete_events() const {
    std::vector<std::string> out;
    for (const auto& [id, rec] : events_)
        if (!rec.has_time || !rec.has_location) out.push_back(id);
    return out;
}

std::string Graph::display(const Triple& t) const {
    std::string pred = taxonomy_->name(t.predicate);
    if (t.is_claim()) pred += "_" + hierarchy_->label(*t.viewpoint);
    return t.subject + " " + pred + " " + to_display(t.object);
}

bool operator==(const Graph& a, const Graph& b) {
    if (a.facts_ != b.facts_ || a.claims_ != b.claims_) return false;
    if (a.events_.size() != b.events_.size()) return false;
    for (const auto& [id, rec] : a.events_) {
        auto it = b.events_.find(id);
        if (it == b.events_.end() || it->second.base_type != rec.base_type) return false;
    }
    return true;
}

// --- mutations ---------------------------------------------------------

namespace {

// Does a claim attributed to `broad` hold everywhere one attributed to
// `narrow` does? Exactly the validity-set subset test, in O(descendants).
bool covers(const ViewpointHierarchy& h, ViewpointId broad, ViewpointId narrow) {
    return h.in_validity_set(broad, narrow);
}

} // namespace

std::optional<IncompatibilityEvidence> Graph::missing_inverse_partner(const Triple& claim) const {
    if (!claim.is_claim()) return std::nullopt;
    if (taxonomy_->kind(claim.predicate) != PredicateKind::Attribution) return std::nullopt;
    for (const auto& c : taxonomy_->constraints()) {
        if (c.kind != ConstraintKind::InverseRole) continue;
        PredicateId partner;
        if (c.left == claim.predicate)
            partner = c.right;
        else if (c.right == claim.predicate)
            partner = c.left;
        else
            continue;
        if (c.scope) {
            auto types = event_types_in(claim.subject, *claim.viewpoint);
            if (std::find(types.begin(), types.end(), *c.scope) == types.end()) continue;
        }
        bool found = std::any_of(claims_.begin(), claims_.end(), [&](const Triple& other) {
            return other.predicate == partner && other.subject == claim.subject &&
                   other.viewpoint == claim.viewpoint && !(other.object == claim.object);
        });
        if (!found) {
            IncompatibilityEvidence ev;
            ev.kind = IncompatibilityEvidence::Kind::InverseRole;
            ev.claim_a = display(claim);
            ev.constraint_id =
                "INV(" + taxonomy_->name(c.left) + "," + taxonomy_->name(c.right) + ")";
            ev.viewpoints = {hierarchy_->label(*claim.viewpoint)};
            ev.explanation = "'" + taxonomy_->name(claim.predicate) + "' must co-occur with a '" +
                             taxonomy_->name(partner) + "' claim on another participant of " +
                             claim.subject + " at " + hierarchy_->label(*claim.viewpoint);
            return ev;
        }
    }
    return std::nullopt;
}

MutationResult Graph::commit_checkpoint(const Graph& candidate) const {
    MutationResult out;
    for (const Triple& c : candidate.claims_) {
        if (auto missing = candidate.missing_inverse_partner(c)) {
            out.status = MutationStatus::DanglingInverseRole;
            out.evidence.push_back(*missing);
            return out;
        }
    }
    return out;
}

void Graph::insert_fact(const Triple& t) {
    validate_fact(t);
    facts_.insert(t);
    note_attribute(t);
}

void Graph::insert_unchecked(const Triple& t) {
    taxonomy_->kind(t.predicate); // bounds
    if (!has_event(t.subject))
        fail(ErrorCode::UnknownEvent, "'" + t.subject + "' is not a registered event");
    if (!t.is_claim()) {
        facts_.insert(t);
        note_attribute(t);
        return;
    }
    if (t.viewpoint->index >= hierarchy_->size())
        fail(ErrorCode::UnknownViewpoint, "claim viewpoint id out of range");
    if (*t.viewpoint == kAll) {
        auto src = taxonomy_->transform_source(t.predicate);
        if (src && *src != taxonomy_->event_type_predicate()) {
            Triple fact{t.subject, *src, t.object, std::nullopt};
            facts_.insert(fact);
            note_attribute(fact);
            return;
        }
    }
    claims_.insert(t);
    note_attribute(t);
}

void Graph::remove_unchecked(const Triple& t) {
    facts_.erase(t);
    claims_.erase(t);
    refresh_event_flags();
}

MutationResult Graph::insert_claim(const Triple& t, CascadePolicy policy) {
    return apply({TxOp{TxOp::Kind::Insert, t}}, policy);
}

MutationResult Graph::remove(const Triple& t) {
    return apply({TxOp{TxOp::Kind::Remove, t}}, CascadePolicy::None);
}

MutationResult Graph::update(const Triple& old_triple, const Triple& new_triple,
                             CascadePolicy policy) {
    return apply({TxOp{TxOp::Kind::Remove, old_triple}, TxOp{TxOp::Kind::Insert, new_triple}},
                 policy);
}

MutationResult Graph::apply(const Transaction& tx, CascadePolicy policy) {
    MutationResult out;
    Graph cand = *this;

    for (const TxOp& op : tx) {
        const Triple& t = op.triple;
        if (op.kind == TxOp::Kind::Remove) {
            if (cand.facts_.erase(t) == 0 && cand.claims_.erase(t) == 0) {
                out.status = MutationStatus::NotFound;
                IncompatibilityEvidence ev;
                ev.kind = IncompatibilityEvidence::Kind::NotValidHere;
                ev.claim_a = display(t);
                ev.explanation = "no such triple in the graph: " + display(t);
                out.evidence.push_back(ev);
                return out;
            }
            continue;
        }

        if (!t.is_claim()) {
            cand.insert_fact(t);
            continue;
        }
        cand.validate_claim_shape(t);

        // Universal agreement folds into a fact where the vocabulary allows.
        if (*t.viewpoint == kAll) {
            auto src = taxonomy_->transform_source(t.predicate);
            if (src && *src != taxonomy_->event_type_predicate()) {
                Triple fact{t.subject, *src, t.object, std::nullopt};
                cand.insert_fact(fact);
                continue;
            }
        }

        // Permissibility against the claim's own viewpoint-resolved type.
        auto types = cand.event_types_in(t.subject, *t.viewpoint);
        const std::string& vp_label = hierarchy_->label(*t.viewpoint);
        bool allowed = std::any_of(types.begin(), types.end(), [&](EventTypeId type) {
            return taxonomy_->permissible(type, t.predicate, vp_label);
        });
        if (!allowed) {
            out.status = MutationStatus::NotPermissible;
            IncompatibilityEvidence ev;
            ev.kind = IncompatibilityEvidence::Kind::NotValidHere;
            ev.claim_a = display(t);
            ev.viewpoints = {vp_label};
            ev.explanation = "'" + taxonomy_->name(t.predicate) +
                             "' is not permissible for events of type '" +
                             taxonomy_->event_type_name(types.front()) + "' at viewpoint '" +
                             vp_label + "'";
            out.evidence.push_back(ev);
            return out;
        }

        // A claim already holding everywhere the new one would is a no-op.
        bool redundant = std::any_of(cand.claims_.begin(), cand.claims_.end(), [&](const Triple& c) {
            return c.subject == t.subject && c.predicate == t.predicate && c.object == t.object &&
                   covers(*hierarchy_, *c.viewpoint, *t.viewpoint);
        });
        if (redundant) continue;

        AdmitDecision decision = admit_insertion(cand, t, policy);
        if (!decision.accepted()) {
            out.status = decision.status;
            out.evidence = std::move(decision.evidence);
            out.victims = std::move(decision.victims);
            return out;
        }
        for (const Triple& victim : decision.victims) {
            cand.claims_.erase(victim);
            out.victims.push_back(victim);
        }

        // The new claim supersedes identical content attributed further down.
        for (auto it = cand.claims_.begin(); it != cand.claims_.end();) {
            if (it->subject == t.subject && it->predicate == t.predicate &&
                it->object == t.object && it->viewpoint != t.viewpoint &&
                covers(*hierarchy_, *t.viewpoint, *it->viewpoint)) {
                out.absorbed.push_back(*it);
                it = cand.claims_.erase(it);
            } else {
                ++it;
            }
        }
        cand.claims_.insert(t);
    }

    MutationResult checkpoint = commit_checkpoint(cand);
    if (!checkpoint.ok()) return checkpoint;

    cand.refresh_event_flags();
    *this = std::move(cand);
    return out;
}

} // namespace veckg
