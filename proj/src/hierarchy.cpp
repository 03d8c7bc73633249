#include "veckg/hierarchy.hpp"

#include <algorithm>
#include <cctype>
#include <deque>

#include "veckg/term.hpp"

namespace veckg {

namespace {
// Comparison slack for the threshold test. Grid-spaced weights keep genuine
// gaps around 1e-4, so this only forgives float noise at exact boundaries
// (phi == theta must count as VALID).
constexpr double kBoundaryEps = 1e-9;
} // namespace

const char* to_string(Variant v) { return v == Variant::WTAH ? "WTAH" : "VPH"; }

const char* to_string(Stance s) { return s == Stance::Valid ? "VALID" : "INVALID"; }

std::optional<RawStance> parse_raw_stance(std::string_view token) {
    std::string lower;
    lower.reserve(token.size());
    for (char c : token) lower += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (lower == "valid") return RawStance::Valid;
    if (lower == "invalid") return RawStance::Invalid;
    if (lower == "neutral") return RawStance::Neutral;
    return std::nullopt;
}

void ConsensusConfig::validate() const {
    if (!(theta > 0.0) || theta > 1.0)
        fail(ErrorCode::InvalidConfig, "theta must lie in (0, 1]");
    bool any_positive = weights.empty();
    for (const auto& [member, w] : weights) {
        if (w < 0.0)
            fail(ErrorCode::InvalidConfig, "negative weight for member '" + member + "'");
        if (w > 0.0) any_positive = true;
    }
    if (!any_positive)
        fail(ErrorCode::InvalidConfig, "at least one member needs a positive weight");
}

double consensus_measure(const Ballot& ballot, const ConsensusConfig& config) {
    config.validate();
    double total = 0.0;
    double valid = 0.0;
    if (config.weights.empty()) {
        // Uniform over whoever voted.
        for (const auto& [member, stance] : ballot.stances) {
            total += 1.0;
            if (stance == RawStance::Valid) valid += 1.0;
        }
    } else {
        for (const auto& [member, stance] : ballot.stances)
            if (!config.weights.count(member))
                fail(ErrorCode::WeightMismatch, "no weight configured for member '" + member + "'");
        // Members configured but silent count as neutral: they stay in the
        // denominator and contribute nothing.
        for (const auto& [member, w] : config.weights) {
            total += w;
            auto it = ballot.stances.find(member);
            if (it != ballot.stances.end() && it->second == RawStance::Valid) valid += w;
        }
    }
    if (total <= 0.0) return 0.0;
    return valid / total;
}

Stance group_stance(const Ballot& ballot, const ConsensusConfig& config) {
    config.validate();
    double total = 0.0;
    double valid = 0.0;
    if (config.weights.empty()) {
        for (const auto& [member, stance] : ballot.stances) {
            total += 1.0;
            if (stance == RawStance::Valid) valid += 1.0;
        }
    } else {
        for (const auto& [member, stance] : ballot.stances)
            if (!config.weights.count(member))
                fail(ErrorCode::WeightMismatch, "no weight configured for member '" + member + "'");
        for (const auto& [member, w] : config.weights) {
            total += w;
            auto it = ballot.stances.find(member);
            if (it != ballot.stances.end() && it->second == RawStance::Valid) valid += w;
        }
    }
    if (total <= 0.0) return Stance::Invalid;
    // Single division avoided: compare valid >= theta * total with slack so
    // exact boundaries land on VALID.
    return valid + kBoundaryEps * total >= config.theta * total ? Stance::Valid : Stance::Invalid;
}

// --- ViewpointHierarchy ----------------------------------------------------

ViewpointHierarchy ViewpointHierarchy::build(
    const std::vector<std::string>& nodes,
    const std::vector<std::pair<std::string, std::string>>& arcs, Variant variant,
    ConsensusConfig global_config, std::map<std::string, ConsensusConfig> overrides) {
    ViewpointHierarchy h;
    h.variant_ = variant;
    global_config.validate();
    h.global_ = std::move(global_config);

    bool all_given = std::find(nodes.begin(), nodes.end(), std::string(kAllLabel)) != nodes.end();

    h.labels_.emplace_back(kAllLabel);
    h.by_label_.emplace(std::string(kAllLabel), kAll);
    for (const auto& label : nodes) {
        if (label == kAllLabel) continue;
        require_token(label, "viewpoint label");
        ViewpointId id{static_cast<std::uint32_t>(h.labels_.size())};
        if (!h.by_label_.emplace(label, id).second)
            fail(ErrorCode::DuplicateName, "viewpoint '" + label + "' listed twice");
        h.labels_.push_back(label);
    }
    h.children_.resize(h.labels_.size());
    h.parents_.resize(h.labels_.size());

    auto resolve = [&](const std::string& label) {
        auto it = h.by_label_.find(label);
        if (it == h.by_label_.end())
            fail(ErrorCode::UnknownNode, "arc references unknown viewpoint '" + label + "'");
        return it->second;
    };

    for (const auto& [parent_label, child_label] : arcs) {
        ViewpointId parent = resolve(parent_label);
        ViewpointId child = resolve(child_label);
        if (child == kAll)
            fail(ErrorCode::ReservedLabel, "ALL is the virtual top and cannot be aggregated");
        h.children_[parent.index].push_back(child);
        h.parents_[child.index].push_back(parent);
    }

    if (!all_given) {
        // Hang every source under the virtual top.
        for (std::uint32_t i = 1; i < h.labels_.size(); ++i) {
            if (h.parents_[i].empty()) {
                h.children_[kAll.index].push_back(ViewpointId{i});
                h.parents_[i].push_back(kAll);
            }
        }
    }

    // Cycle check: Kahn's algorithm over the child arcs.
    {
        std::vector<std::size_t> indegree(h.labels_.size(), 0);
        for (const auto& kids : h.children_)
            for (ViewpointId c : kids) ++indegree[c.index];
        std::deque<std::uint32_t> ready;
        for (std::uint32_t i = 0; i < indegree.size(); ++i)
            if (indegree[i] == 0) ready.push_back(i);
        std::size_t visited = 0;
        while (!ready.empty()) {
            std::uint32_t cur = ready.front();
            ready.pop_front();
            ++visited;
            for (ViewpointId c : h.children_[cur])
                if (--indegree[c.index] == 0) ready.push_back(c.index);
        }
        if (visited != h.labels_.size())
            fail(ErrorCode::CycleDetected, "viewpoint hierarchy contains a cycle");
    }

    // Reachability from ALL.
    {
        std::vector<bool> seen(h.labels_.size(), false);
        std::deque<ViewpointId> queue{kAll};
        seen[kAll.index] = true;
        while (!queue.empty()) {
            ViewpointId cur = queue.front();
            queue.pop_front();
            for (ViewpointId c : h.children_[cur.index])
                if (!seen[c.index]) {
                    seen[c.index] = true;
                    queue.push_back(c);
                }
        }
        for (std::uint32_t i = 0; i < seen.size(); ++i)
            if (!seen[i])
                fail(ErrorCode::UnreachableNode,
                     "viewpoint '" + h.labels_[i] + "' is not reachable from ALL");
    }

    for (auto& [label, config] : overrides) {
        auto it = h.by_label_.find(label);
        if (it == h.by_label_.end())
            fail(ErrorCode::UnknownNode, "consensus override for unknown viewpoint '" + label + "'");
        config.validate();
        h.overrides_.emplace(it->second.index, std::move(config));
    }
    return h;
}

std::optional<ViewpointId> ViewpointHierarchy::find(std::string_view label) const {
    auto it = by_label_.find(label);
    if (it == by_label_.end()) return std::nullopt;
    return it->second;
}

ViewpointId ViewpointHierarchy::require(std::string_view label) const {
    auto id = find(label);
    if (!id) fail(ErrorCode::UnknownViewpoint, "no viewpoint named '" + std::string(label) + "'");
    return *id;
}

const std::string& ViewpointHierarchy::label(ViewpointId v) const {
    if (v.index >= labels_.size()) fail(ErrorCode::UnknownNode, "viewpoint id out of range");
    return labels_[v.index];
}

const std::vector<ViewpointId>& ViewpointHierarchy::children(ViewpointId v) const {
    if (v.index >= labels_.size()) fail(ErrorCode::UnknownNode, "viewpoint id out of range");
    return children_[v.index];
}

const std::vector<ViewpointId>& ViewpointHierarchy::parents(ViewpointId v) const {
    if (v.index >= labels_.size()) fail(ErrorCode::UnknownNode, "viewpoint id out of range");
    return parents_[v.index];
}

std::vector<ViewpointId> ViewpointHierarchy::all_nodes() const {
    std::vector<ViewpointId> out;
    out.reserve(labels_.size());
    for (std::uint32_t i = 0; i < labels_.size(); ++i) out.push_back(ViewpointId{i});
    return out;
}

bool ViewpointHierarchy::is_ancestor(ViewpointId ancestor, ViewpointId node) const {
    label(ancestor); // bounds
    label(node);
    if (ancestor == node) return false;
    std::deque<ViewpointId> queue{ancestor};
    std::vector<bool> seen(labels_.size(), false);
    seen[ancestor.index] = true;
    while (!queue.empty()) {
        ViewpointId cur = queue.front();
        queue.pop_front();
        for (ViewpointId c : children_[cur.index]) {
            if (c == node) return true;
            if (!seen[c.index]) {
                seen[c.index] = true;
                queue.push_back(c);
            }
        }
    }
    return false;
}

bool ViewpointHierarchy::path_related(ViewpointId a, ViewpointId b) const {
    return a == b || is_ancestor(a, b) || is_ancestor(b, a);
}

std::vector<ViewpointId> ViewpointHierarchy::validity_set(ViewpointId v) const {
    label(v); // bounds
    if (v == kAll) return all_nodes();
    if (variant_ == Variant::VPH) return {v};
    std::vector<ViewpointId> out;
    std::vector<bool> seen(labels_.size(), false);
    std::deque<ViewpointId> queue{v};
    seen[v.index] = true;
    while (!queue.empty()) {
        ViewpointId cur = queue.front();
        queue.pop_front();
        out.push_back(cur);
        for (ViewpointId c : children_[cur.index])
            if (!seen[c.index]) {
                seen[c.index] = true;
                queue.push_back(c);
            }
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool ViewpointHierarchy::in_validity_set(ViewpointId claim_viewpoint, ViewpointId v) const {
    label(claim_viewpoint); // bounds
    label(v);
    if (claim_viewpoint == kAll) return true;
    if (claim_viewpoint == v) return true;
    return variant_ == Variant::WTAH && is_ancestor(claim_viewpoint, v);
}

const ConsensusConfig& ViewpointHierarchy::config_for(ViewpointId v) const {
    label(v); // bounds
    auto it = overrides_.find(v.index);
    return it == overrides_.end() ? global_ : it->second;
}

Stance aggregate_stances(const std::map<ViewpointId, Stance>& child_stances, ViewpointId node,
                         const ViewpointHierarchy& h) {
    const auto& kids = h.children(node);
    Ballot ballot;
    ballot.fact = "aggregate@" + h.label(node);
    for (const auto& [child, stance] : child_stances) {
        if (std::find(kids.begin(), kids.end(), child) == kids.end())
            fail(ErrorCode::UnknownNode, "'" + h.label(child) + "' is not aggregated by '" +
                                             h.label(node) + "'");
        ballot.stances[h.label(child)] =
            stance == Stance::Valid ? RawStance::Valid : RawStance::Invalid;
    }
    const ConsensusConfig& base = h.config_for(node);
    if (!base.weights.empty()) return group_stance(ballot, base);
    // No explicit weights for this node: weigh its children uniformly,
    // counting silent children as neutral.
    ConsensusConfig uniform;
    uniform.theta = base.theta;
    for (ViewpointId c : kids) uniform.weights[h.label(c)] = 1.0;
    if (uniform.weights.empty()) return Stance::Invalid;
    return group_stance(ballot, uniform);
}

} // namespace veckg
