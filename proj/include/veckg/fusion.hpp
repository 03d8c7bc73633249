#pragma once

#include <optional>
#include <string>
#include <vector>

#include "veckg/evidence.hpp"
#include "veckg/hierarchy.hpp"
#include "veckg/store.hpp"

namespace veckg {

enum class Verdict { Consistent, Incompatible };

const char* to_string(Verdict v);

/// Outcome of fusing triples at a viewpoint: the matched triples, the claim
/// subset that was fused, and whether the fusion is non-contradictory.
/// Incompatible results keep every match and explain themselves instead of
/// silently dropping claims.
struct FusionResult {
    std::string viewpoint;
    std::vector<Triple> matches;
    std::vector<Triple> fused_claims;
    Verdict verdict = Verdict::Consistent;
    std::vector<IncompatibilityEvidence> evidence;

    std::string to_text(const Graph& g, bool color = false) const;
    std::string to_json(const Graph& g) const;
};

/// Fuse a claim set at v. Claims not valid at v surface as NotValidHere
/// evidence; pairs valid at v are contradiction-tested unless the WTAH
/// shortcut applies. `use_shortcut` exists for differential testing.
FusionResult fuse(const Graph& g, const std::vector<Triple>& claims, ViewpointId v,
                  bool use_shortcut = true);

/// The fusion shortcut: under WTAH two claims at distinct, strictly
/// path-related viewpoints can never contradict in a consistent graph, so
/// their pairwise check may be skipped. Same-viewpoint pairs still need the
/// check; VPH never skips.
bool can_skip_check(ViewpointId a, ViewpointId b, const ViewpointHierarchy& h);
bool can_skip_check(const Triple& c1, const Triple& c2, const ViewpointHierarchy& h);

struct QueryPattern {
    std::optional<std::string> subject;   // nullopt = variable
    std::optional<std::string> predicate; // predicate name, nullopt = variable
    std::optional<Term> object;
    std::string viewpoint;                // label, required
    bool refine = true;                   // widen predicate over refinement edges
};

/// Parse `<s> <p> <o> @ <viewpoint> [no-refine]` with `?x` variables,
/// tokens for resources and double-quoted literals.
QueryPattern parse_pattern(const std::string& text);

/// Evaluate a pattern against T_v = facts ∪ {claims valid at v}. With
/// refinement matching a predicate also matches everything it subsumes plus
/// its attribution image, so coarse roles surface their specialisations.
/// The verdict equals fuse() over the claim subset of the matches.
FusionResult query(const Graph& g, const QueryPattern& q, bool use_shortcut = true);

} // namespace veckg
