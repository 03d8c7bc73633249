#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "veckg/store.hpp"

namespace veckg {

// Wire-format vocabulary. These names are reserved: no user predicate may
// shadow them and `#` never appears in user tokens.
inline constexpr std::string_view kSingletonPropertyOf = "singleton_property_of";
inline constexpr std::string_view kAccToVp = "acc_to_vp";

struct MaterializeOptions {
    std::string base_iri; // emitted as a BASE line when non-empty
};

/// Canonical serialization. Claims become singleton-property triples
/// (`pred#n`, `singleton_property_of`, `acc_to_vp`); ALL-scoped claims and
/// facts stay plain; events appear as `event_type` triples. Requires a
/// consistent graph and is deterministic byte-for-byte.
std::string materialize(const Graph& g, const MaterializeOptions& opts = {});
void materialize(const Graph& g, std::ostream& out, const MaterializeOptions& opts = {});

/// Stable claim labels (`pred#n`) from the same numbering materialize uses.
/// Facts are not labelled.
std::map<std::string, Triple> claim_labels(const Graph& g);

/// Inverse of materialize. Performs structural validation only (vocabulary,
/// token syntax, singleton completeness) and loads triples unchecked, so a
/// file describing an inconsistent graph still parses; run check_graph after.
Graph parse(const std::string& text,
            std::shared_ptr<const Taxonomy> taxonomy,
            std::shared_ptr<const ViewpointHierarchy> hierarchy);
Graph parse_stream(std::istream& in,
                   std::shared_ptr<const Taxonomy> taxonomy,
                   std::shared_ptr<const ViewpointHierarchy> hierarchy);

struct DiffEntry {
    enum class Side { Left, Right };
    Side side;
    std::string line;
};

/// Symmetric difference of the two graphs' canonical serializations.
std::vector<DiffEntry> diff(const Graph& a, const Graph& b);

} // namespace veckg
