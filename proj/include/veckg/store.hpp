#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "veckg/evidence.hpp"
#include "veckg/hierarchy.hpp"
#include "veckg/taxonomy.hpp"
#include "veckg/term.hpp"

namespace veckg {

/// Subject-predicate-object statement. A triple carrying an attribution
/// viewpoint is a claim; without one it is a fact. Subjects are always
/// events.
struct Triple {
    std::string subject;
    PredicateId predicate;
    Term object;
    std::optional<ViewpointId> viewpoint;

    bool is_claim() const { return viewpoint.has_value(); }

    friend bool operator==(const Triple&, const Triple&) = default;
    friend auto operator<=>(const Triple&, const Triple&) = default;
};

struct EventRecord {
    std::string id;
    EventTypeId base_type;
    bool has_time = false;
    bool has_location = false;
    bool has_participant = false;
};

enum class CascadePolicy { None, DeleteConflicting };

enum class MutationStatus {
    Ok,
    NotPermissible,
    Incompatible,
    CascadeRequired,
    DanglingInverseRole,
    NotFound,
};

const char* to_string(MutationStatus s);

struct MutationResult {
    MutationStatus status = MutationStatus::Ok;
    std::vector<IncompatibilityEvidence> evidence;
    std::vector<Triple> victims;   // descendants removed (or requiring removal) by a cascade
    std::vector<Triple> absorbed;  // same-content claims superseded by a broader one

    bool ok() const { return status == MutationStatus::Ok; }
    std::string message() const;
};

struct TxOp {
    enum class Kind { Insert, Remove };
    Kind kind;
    Triple triple;
};

using Transaction = std::vector<TxOp>;

/// The viewpoint-enabled ECKG: events, facts, viewpoint-keyed claims, bound
/// to one taxonomy and one hierarchy. Mutations go through admission so that
/// every committed state is viewpoint-consistent; transactions are
/// all-or-nothing and form the inverse-role enforcement boundary.
///
/// Single writer, snapshot readers: the graph is a value type, so a copy is
/// a consistent snapshot.
class Graph {
public:
    Graph(std::shared_ptr<const Taxonomy> taxonomy,
          std::shared_ptr<const ViewpointHierarchy> hierarchy);

    const Taxonomy& taxonomy() const { return *taxonomy_; }
    const ViewpointHierarchy& hierarchy() const { return *hierarchy_; }
    std::shared_ptr<const Taxonomy> taxonomy_ptr() const { return taxonomy_; }
    std::shared_ptr<const ViewpointHierarchy> hierarchy_ptr() const { return hierarchy_; }

    // -- events ------------------------------------------------------------
    void add_event(std::string_view id, std::string_view base_type);
    bool has_event(std::string_view id) const;
    const EventRecord& event(std::string_view id) const;
    const std::map<std::string, EventRecord, std::less<>>& events() const { return events_; }

    /// Resolved event type at a viewpoint: an event-typing claim valid at v
    /// wins over the base type. Two distinct valid typings raise
    /// AmbiguousType.
    EventTypeId event_type_in(std::string_view ev, ViewpointId v) const;

    /// Every typing in force at v (distinct objects of valid event-typing
    /// claims, else the base type). More than one entry means the graph is
    /// type-ambiguous at v; callers that must stay total use this form.
    std::vector<EventTypeId> event_types_in(std::string_view ev, ViewpointId v) const;

    // -- mutations ---------------------------------------------------------
    void insert_fact(const Triple& t);
    MutationResult insert_claim(const Triple& t, CascadePolicy policy = CascadePolicy::None);
    MutationResult remove(const Triple& t);
    MutationResult update(const Triple& old_triple, const Triple& new_triple,
                          CascadePolicy policy = CascadePolicy::None);
    MutationResult apply(const Transaction& tx, CascadePolicy policy = CascadePolicy::None);

    /// Raw insertion without admission or commit checks; used by the wire
    /// parser and by tests that need to force inconsistent states. Claims at
    /// ALL still fold into facts where a reverse transformation exists (a
    /// normalization, not a check).
    void insert_unchecked(const Triple& t);
    void remove_unchecked(const Triple& t);

    // -- reads ---------------------------------------------------------
    const std::set<Triple>& facts() const { return facts_; }
    const std::set<Triple>& claims() const { return claims_; }
    std::vector<Triple> claims_at(ViewpointId v) const; // attributed to v exactly
    bool contains(const Triple& t) const;

    /// True when the claim is part of T_v: v lies in the attribution's
    /// validity set and the attribution is defined for the event's type as
    /// resolved at v. Event-typing claims skip the vocabulary filter.
    bool valid_at(const Triple& claim, ViewpointId v) const;

    /// T_v = F union C_v (hierarchy-variant aware).
    std::vector<Triple> triples_for(ViewpointId v) const;

    /// Events missing a time or a location attribute. Completeness is a
    /// lint, not an admission gate.
    std::vector<std::string> incomplete_events() const;

    std::string display(const Triple& t) const;

    friend bool operator==(const Graph& a, const Graph& b);

private:
    friend class GraphMutator;

    void validate_fact(const Triple& t) const;
    void validate_claim_shape(const Triple& t) const;
    void refresh_event_flags();
    void note_attribute(const Triple& t);
    MutationResult commit_checkpoint(const Graph& candidate) const;
    std::optional<IncompatibilityEvidence> missing_inverse_partner(const Triple& claim) const;

    std::shared_ptr<const Taxonomy> taxonomy_;
    std::shared_ptr<const ViewpointHierarchy> hierarchy_;
    std::map<std::string, EventRecord, std::less<>> events_;
    std::set<Triple> facts_;
    std::set<Triple> claims_;
};

} // namespace veckg
