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

/// Index into a taxonomy's predicate table.
struct PredicateId {
    std::uint32_t index = 0;
    friend bool operator==(PredicateId, PredicateId) = default;
    friend auto operator<=>(PredicateId, PredicateId) = default;
};

/// Index into a taxonomy's event type table.
struct EventTypeId {
    std::uint32_t index = 0;
    friend bool operator==(EventTypeId, EventTypeId) = default;
    friend auto operator<=>(EventTypeId, EventTypeId) = default;
};

enum class PredicateKind {
    Regular,
    Parameterized,
    Attribution,
    NegatedAttribution,
};

const char* to_string(PredicateKind kind);

enum class ConstraintKind {
    MutualExclusion,
    InverseRole,
};

struct RefinementEdge {
    PredicateId parent;
    PredicateId child;
    EventTypeId event_type;
};

struct AttributionConstraint {
    ConstraintKind kind = ConstraintKind::MutualExclusion;
    PredicateId left;
    PredicateId right;
    std::optional<EventTypeId> scope; // absent = applies to every event type
};

/// Binary incompatibility rule over two triple patterns. Subject and object
/// positions are variables; equal variable names across the two patterns must
/// bind to the same term.
struct RulePattern {
    std::string subject_var;
    PredicateId predicate;
    std::string object_var;
};

struct ConsistencyRule {
    std::string id;
    std::optional<EventTypeId> scope;
    RulePattern a;
    RulePattern b;
};

class TaxonomyBuilder;

/// Frozen predicate vocabulary: kinds, refinements, transformations,
/// negations, attribution constraints, rules and per-event-type
/// permissibility. Immutable after the build step; safe to share across
/// threads.
class Taxonomy {
public:
    std::size_t predicate_count() const { return predicates_.size(); }
    std::size_t event_type_count() const { return event_types_.size(); }

    std::optional<PredicateId> find(std::string_view name) const;
    PredicateId require(std::string_view name) const;
    const std::string& name(PredicateId p) const;
    PredicateKind kind(PredicateId p) const;

    std::optional<EventTypeId> find_event_type(std::string_view name) const;
    EventTypeId require_event_type(std::string_view name) const;
    const std::string& event_type_name(EventTypeId t) const;

    /// True iff a refinement path ancestor ->* descendant exists (reflexive).
    bool subsumes(PredicateId ancestor, PredicateId descendant) const;

    /// A predicate is usable on events of `type` when it is type-universal,
    /// declared for the type, or the target of a refinement edge typed with it.
    bool defined_for(PredicateId p, EventTypeId type) const;
    bool type_universal(PredicateId p) const;

    /// Permissibility per the event type's attribution vocabulary and its
    /// permissible-viewpoint set (viewpoints identified by label; the
    /// hierarchy is bound at the store level).
    bool permissible(EventTypeId type, PredicateId attribution, std::string_view viewpoint) const;

    /// Active constraint linking the two attributions, if any. Symmetric.
    std::optional<AttributionConstraint> constraint_between(PredicateId a, PredicateId b) const;

    /// Positive attribution for a claim predicate: identity for attributions,
    /// the negated base for negation images.
    PredicateId positive_base(PredicateId p) const;

    std::optional<PredicateId> negation_of(PredicateId attribution) const;
    std::optional<PredicateId> transform_source(PredicateId attribution) const;
    std::optional<PredicateId> transform_image(PredicateId regular) const;

    /// The attribution obtained by transforming the builtin `event_type`
    /// predicate; claims carrying it re-type their subject per viewpoint.
    std::optional<PredicateId> event_typing_attribution() const { return event_typing_; }
    bool is_event_typing(PredicateId p) const {
        return event_typing_ && *event_typing_ == p;
    }

    PredicateId event_type_predicate() const { return event_type_predicate_; }

    const std::vector<RefinementEdge>& refinements() const { return refinements_; }
    const std::vector<AttributionConstraint>& constraints() const { return constraints_; }
    const std::vector<ConsistencyRule>& rules() const { return rules_; }

    /// Every predicate of the given kind, in registration order.
    std::vector<PredicateId> of_kind(PredicateKind kind) const;

private:
    friend class TaxonomyBuilder;

    struct PredicateEntry {
        std::string name;
        PredicateKind kind;
        bool universal = false;
        std::set<EventTypeId> event_types;
        std::optional<PredicateId> transform_source;  // attribution <- regular
        std::optional<PredicateId> transform_image;   // regular -> attribution
        std::optional<PredicateId> negation_base;     // not_p -> p
        std::optional<PredicateId> negation_image;    // p -> not_p
        std::vector<PredicateId> children;            // refinement children
    };

    struct EventTypeEntry {
        std::string name;
        bool all_viewpoints = true;            // no [PERMIT] line given
        std::set<std::string> viewpoints;      // V^ET when restricted
    };

    const PredicateEntry& entry(PredicateId p) const;

    std::vector<PredicateEntry> predicates_;
    std::vector<EventTypeEntry> event_types_;
    std::map<std::string, PredicateId, std::less<>> by_name_;
    std::map<std::string, EventTypeId, std::less<>> types_by_name_;
    std::vector<RefinementEdge> refinements_;
    std::vector<AttributionConstraint> constraints_;
    std::vector<ConsistencyRule> rules_;
    std::optional<PredicateId> event_typing_;
    PredicateId event_type_predicate_;
};

/// Single-threaded builder; `freeze()` yields the shareable taxonomy.
/// The builtin regular predicate `event_type` is pre-registered.
class TaxonomyBuilder {
public:
    TaxonomyBuilder();

    PredicateId register_predicate(std::string_view name, PredicateKind kind,
                                   const std::vector<std::string>& event_types);
    /// Type-universal registration.
    PredicateId register_predicate(std::string_view name, PredicateKind kind);

    EventTypeId event_type(std::string_view name);

    RefinementEdge add_refinement(PredicateId parent, PredicateId child, std::string_view event_type);

    /// Regular -> attribution transformation (`attrib_` + name). Idempotent.
    PredicateId transform_regular(PredicateId p);

    /// Attribution -> negated attribution (`not_` + name). Idempotent;
    /// rejects negation images (no double negation).
    PredicateId negate_predicate(PredicateId p);

    void add_constraint(ConstraintKind kind, PredicateId left, PredicateId right,
                        std::optional<std::string> scope = std::nullopt);

    void add_rule(const std::string& subject_var_a, PredicateId pred_a, const std::string& object_var_a,
                  const std::string& subject_var_b, PredicateId pred_b, const std::string& object_var_b,
                  std::optional<std::string> scope = std::nullopt);

    /// Restrict the permissible viewpoints for an event type.
    void permit(std::string_view event_type, const std::vector<std::string>& viewpoints);
    void permit_all(std::string_view event_type);

    std::optional<PredicateId> find(std::string_view name) const;
    PredicateKind kind(PredicateId p) const;
    const std::string& name(PredicateId p) const;

    Taxonomy freeze();

private:
    PredicateId register_internal(std::string_view name, PredicateKind kind,
                                  bool universal, const std::vector<std::string>& event_types);
    bool reaches(PredicateId from, PredicateId target) const;
    void check_partition() const;

    Taxonomy t_;
    std::size_t rule_counter_ = 0;
};

} // namespace veckg
