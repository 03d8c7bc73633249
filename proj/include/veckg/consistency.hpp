#pragma once

#include <optional>
#include <string>
#include <vector>

#include "veckg/evidence.hpp"
#include "veckg/store.hpp"

namespace veckg {

struct ViewpointVerdict {
    std::string viewpoint;
    bool consistent = true;
    std::vector<IncompatibilityEvidence> evidence;
};

struct ConsistencyReport {
    std::vector<ViewpointVerdict> per_viewpoint;
    bool overall = true;

    std::string to_text(bool color = false) const;
    std::string to_json() const; // stable key order, schema-versioned
};

/// Viewpoint-independent contradiction test: mutual exclusion / inverse-role
/// operands on the same subject and object, p against not_p, two distinct
/// event typings of one event, or a consistency rule unifying against the
/// pair. Symmetric and total over claims.
std::optional<IncompatibilityEvidence> contradicts(const Triple& c1, const Triple& c2,
                                                   const Graph& g);

/// The compatibility decision at a viewpoint: vacuously true unless both
/// claims are valid at v and contradict each other.
bool compatible(const Triple& c1, const Triple& c2, ViewpointId v, const Graph& g);

/// Pairwise check over the claims valid at v (variant-aware). Ambiguous
/// event typings are reported as evidence instead of thrown.
ViewpointVerdict check_viewpoint(const Graph& g, ViewpointId v);

/// Verdict over every node of the hierarchy, ALL included.
ConsistencyReport check_graph(const Graph& g);

struct AdmitDecision {
    MutationStatus status = MutationStatus::Ok;
    std::vector<IncompatibilityEvidence> evidence;
    std::vector<Triple> victims;

    bool accepted() const { return status == MutationStatus::Ok; }
};

/// Admission test for inserting `claim`, pure over the graph snapshot.
/// Conflicts with claims attributed strictly below the insertion viewpoint
/// are cascade victims (rejected under None, removable under
/// DeleteConflicting); any other conflict rejects the insertion outright.
AdmitDecision admit_insertion(const Graph& g, const Triple& claim, CascadePolicy policy);

/// Advisory only, never part of check_graph: claims that deny what a fact
/// states (a negated attribution over a fact's transformed predicate, same
/// subject and object). Facts and single claims are compatible by
/// definition, so these pairs merely deserve a second look.
std::vector<IncompatibilityEvidence> fact_claim_lint(const Graph& g);

} // namespace veckg
