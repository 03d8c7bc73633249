#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "veckg/errors.hpp"

namespace veckg {

/// Index into a hierarchy's node table. ALL is always node 0.
struct ViewpointId {
    std::uint32_t index = 0;
    friend bool operator==(ViewpointId, ViewpointId) = default;
    friend auto operator<=>(ViewpointId, ViewpointId) = default;
};

inline constexpr ViewpointId kAll{0};
inline constexpr std::string_view kAllLabel = "ALL";

enum class Variant { WTAH, VPH };

const char* to_string(Variant v);

enum class Stance { Valid, Invalid };
enum class RawStance { Valid, Invalid, Neutral };

const char* to_string(Stance s);
std::optional<RawStance> parse_raw_stance(std::string_view token);

/// Weighted consensus configuration. Empty weights mean uniform weighting
/// over whatever members are presented; weights are normalized at
/// evaluation time, so raw counts are fine.
struct ConsensusConfig {
    std::map<std::string, double> weights;
    double theta = 0.5;

    void validate() const;
};

/// Raw per-member stances toward one fact.
struct Ballot {
    std::string fact;
    std::map<std::string, RawStance> stances;
};

/// VALID iff the normalized weight of members voting `valid` reaches the
/// threshold. Neutral and invalid stances contribute nothing; weighted
/// members missing from the ballot count as neutral.
Stance group_stance(const Ballot& ballot, const ConsensusConfig& config);

/// The consensus measure itself, exposed for reports.
double consensus_measure(const Ballot& ballot, const ConsensusConfig& config);

/// The viewpoint hierarchy H(N, A): a DAG rooted at the virtual top ALL,
/// arcs stored aggregate -> part. Immutable after build.
class ViewpointHierarchy {
public:
    /// Validates and builds. ALL is inserted and connected above every
    /// source node when absent from `nodes`; when ALL is given explicitly
    /// the arcs are taken as-is and unreachable nodes are rejected.
    static ViewpointHierarchy build(const std::vector<std::string>& nodes,
                                    const std::vector<std::pair<std::string, std::string>>& arcs,
                                    Variant variant,
                                    ConsensusConfig global_config = {},
                                    std::map<std::string, ConsensusConfig> overrides = {});

    Variant variant() const { return variant_; }
    std::size_t size() const { return labels_.size(); }

    std::optional<ViewpointId> find(std::string_view label) const;
    ViewpointId require(std::string_view label) const;
    const std::string& label(ViewpointId v) const;

    const std::vector<ViewpointId>& children(ViewpointId v) const;
    const std::vector<ViewpointId>& parents(ViewpointId v) const;
    std::vector<ViewpointId> all_nodes() const;

    bool is_ancestor(ViewpointId ancestor, ViewpointId node) const; // strict
    bool path_related(ViewpointId a, ViewpointId b) const;          // reflexive

    /// Viewpoints in which a claim attributed to `v` is valid:
    /// WTAH -> v plus all descendants; VPH -> {v}; ALL -> every node.
    std::vector<ViewpointId> validity_set(ViewpointId v) const;
    bool in_validity_set(ViewpointId claim_viewpoint, ViewpointId v) const;

    const ConsensusConfig& config_for(ViewpointId v) const;
    const ConsensusConfig& global_config() const { return global_; }

private:
    ViewpointHierarchy() = default;

    Variant variant_ = Variant::WTAH;
    std::vector<std::string> labels_;
    std::vector<std::vector<ViewpointId>> children_;
    std::vector<std::vector<ViewpointId>> parents_;
    std::map<std::string, ViewpointId, std::less<>> by_label_;
    ConsensusConfig global_;
    std::map<std::uint32_t, ConsensusConfig> overrides_;
};

/// Aggregates child stances into the node's stance using the node's
/// consensus configuration, children acting as the weighted members.
/// Under WTAH the caller pushes a VALID result down the subtree; under
/// VPH dissenting children keep their own stance.
Stance aggregate_stances(const std::map<ViewpointId, Stance>& child_stances,
                         ViewpointId node, const ViewpointHierarchy& h);

} // namespace veckg
