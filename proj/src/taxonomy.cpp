#include "veckg/taxonomy.hpp"

#include <algorithm>
#include <deque>

#include "veckg/term.hpp"

namespace veckg {

namespace {
constexpr std::string_view kEventTypePredicate = "event_type";
constexpr std::string_view kReservedWireNames[] = {"singleton_property_of", "acc_to_vp"};
} // namespace

const char* to_string(PredicateKind kind) {
    switch (kind) {
    case PredicateKind::Regular: return "regular";
    case PredicateKind::Parameterized: return "parameterized";
    case PredicateKind::Attribution: return "attribution";
    case PredicateKind::NegatedAttribution: return "negated_attribution";
    }
    return "?";
}

// --- Taxonomy ------------------------------------------------------------

const Taxonomy::PredicateEntry& Taxonomy::entry(PredicateId p) const {
    if (p.index >= predicates_.size())
        fail(ErrorCode::UnknownPredicate, "predicate id out of range");
    return predicates_[p.index];
}

std::optional<PredicateId> Taxonomy::find(std::string_view name) const {
    auto it = by_name_.find(name);
    if (it == by_name_.end()) return std::nullopt;
    return it->second;
}

PredicateId Taxonomy::require(std::string_view name) const {
    auto id = find(name);
    if (!id) fail(ErrorCode::UnknownPredicate, "no predicate named '" + std::string(name) + "'");
    return *id;
}

const std::string& Taxonomy::name(PredicateId p) const { return entry(p).name; }

PredicateKind Taxonomy::kind(PredicateId p) const { return entry(p).kind; }

std::optional<EventTypeId> Taxonomy::find_event_type(std::string_view name) const {
    auto it = types_by_name_.find(name);
    if (it == types_by_name_.end()) return std::nullopt;
    return it->second;
}

EventTypeId Taxonomy::require_event_type(std::string_view name) const {
    auto id = find_event_type(name);
    if (!id) fail(ErrorCode::UnknownEventType, "no event type named '" + std::string(name) + "'");
    return *id;
}

const std::string& Taxonomy::event_type_name(EventTypeId t) const {
    if (t.index >= event_types_.size())
        fail(ErrorCode::UnknownEventType, "event type id out of range");
    return event_types_[t.index].name;
}

bool Taxonomy::subsumes(PredicateId ancestor, PredicateId descendant) const {
    entry(descendant); // bounds check
    if (ancestor == descendant) return true;
    std::deque<PredicateId> queue{ancestor};
    std::vector<bool> seen(predicates_.size(), false);
    seen[ancestor.index] = true;
    while (!queue.empty()) {
        PredicateId cur = queue.front();
        queue.pop_front();
        for (PredicateId child : entry(cur).children) {
            if (child == descendant) return true;
            if (!seen[child.index]) {
                seen[child.index] = true;
                queue.push_back(child);
            }
        }
    }
    return false;
}

bool Taxonomy::defined_for(PredicateId p, EventTypeId type) const {
    const auto& e = entry(p);
    if (type.index >= event_types_.size())
        fail(ErrorCode::UnknownEventType, "event type id out of range");
    // A negation is usable wherever its positive form is.
    if (e.kind == PredicateKind::NegatedAttribution && e.negation_base)
        return defined_for(*e.negation_base, type);
    if (e.universal || e.event_types.count(type)) return true;
    return std::any_of(refinements_.begin(), refinements_.end(), [&](const RefinementEdge& r) {
        return r.child == p && r.event_type == type;
    });
}

bool Taxonomy::type_universal(PredicateId p) const { return entry(p).universal; }

bool Taxonomy::permissible(EventTypeId type, PredicateId attribution,
                           std::string_view viewpoint) const {
    if (type.index >= event_types_.size())
        fail(ErrorCode::UnknownEventType, "event type id out of range");
    if (!defined_for(attribution, type)) return false;
    const auto& et = event_types_[type.index];
    return et.all_viewpoints || et.viewpoints.count(std::string(viewpoint)) > 0;
}

std::optional<AttributionConstraint> Taxonomy::constraint_between(PredicateId a,
                                                                  PredicateId b) const {
    for (const auto& c : constraints_) {
        if ((c.left == a && c.right == b) || (c.left == b && c.right == a)) return c;
    }
    return std::nullopt;
}

PredicateId Taxonomy::positive_base(PredicateId p) const {
    const auto& e = entry(p);
    if (e.kind == PredicateKind::NegatedAttribution && e.negation_base) return *e.negation_base;
    return p;
}

std::optional<PredicateId> Taxonomy::negation_of(PredicateId attribution) const {
    return entry(attribution).negation_image;
}

std::optional<PredicateId> Taxonomy::transform_source(PredicateId attribution) const {
    return entry(attribution).transform_source;
}

std::optional<PredicateId> Taxonomy::transform_image(PredicateId regular) const {
    return entry(regular).transform_image;
}

std::vector<PredicateId> Taxonomy::of_kind(PredicateKind kind) const {
    std::vector<PredicateId> out;
    for (std::uint32_t i = 0; i < predicates_.size(); ++i)
        if (predicates_[i].kind == kind) out.push_back(PredicateId{i});
    return out;
}

// --- TaxonomyBuilder ------------------------------------------------------

TaxonomyBuilder::TaxonomyBuilder() {
    t_.event_type_predicate_ =
        register_internal(kEventTypePredicate, PredicateKind::Regular, true, {});
}

PredicateId TaxonomyBuilder::register_internal(std::string_view name, PredicateKind kind,
                                               bool universal,
                                               const std::vector<std::string>& event_types) {
    require_token(name, "predicate name");
    for (auto reserved : kReservedWireNames)
        if (name == reserved)
            fail(ErrorCode::ReservedName,
                 "'" + std::string(name) + "' is part of the reification vocabulary");
    if (t_.by_name_.count(std::string(name)))
        fail(ErrorCode::DuplicateName, "predicate '" + std::string(name) + "' already registered");

    Taxonomy::PredicateEntry e;
    e.name = std::string(name);
    e.kind = kind;
    e.universal = universal;
    for (const auto& et : event_types) e.event_types.insert(event_type(et));

    PredicateId id{static_cast<std::uint32_t>(t_.predicates_.size())};
    t_.predicates_.push_back(std::move(e));
    t_.by_name_.emplace(std::string(name), id);
    return id;
}

PredicateId TaxonomyBuilder::register_predicate(std::string_view name, PredicateKind kind,
                                                const std::vector<std::string>& event_types) {
    if (kind == PredicateKind::NegatedAttribution)
        fail(ErrorCode::KindViolation,
             "negated attributions exist only as images of negate_predicate");
    // An empty type list means type-universal, same as the `*` config form.
    return register_internal(name, kind, event_types.empty(), event_types);
}

PredicateId TaxonomyBuilder::register_predicate(std::string_view name, PredicateKind kind) {
    return register_predicate(name, kind, {});
}

EventTypeId TaxonomyBuilder::event_type(std::string_view name) {
    require_token(name, "event type");
    auto it = t_.types_by_name_.find(name);
    if (it != t_.types_by_name_.end()) return it->second;
    EventTypeId id{static_cast<std::uint32_t>(t_.event_types_.size())};
    t_.event_types_.push_back(Taxonomy::EventTypeEntry{std::string(name), true, {}});
    t_.types_by_name_.emplace(std::string(name), id);
    return id;
}

bool TaxonomyBuilder::reaches(PredicateId from, PredicateId target) const {
    if (from == target) return true;
    std::deque<PredicateId> queue{from};
    std::vector<bool> seen(t_.predicates_.size(), false);
    seen[from.index] = true;
    while (!queue.empty()) {
        PredicateId cur = queue.front();
        queue.pop_front();
        for (PredicateId child : t_.predicates_[cur.index].children) {
            if (child == target) return true;
            if (!seen[child.index]) {
                seen[child.index] = true;
                queue.push_back(child);
            }
        }
    }
    return false;
}

RefinementEdge TaxonomyBuilder::add_refinement(PredicateId parent, PredicateId child,
                                               std::string_view event_type_name) {
    PredicateKind pk = kind(parent);
    PredicateKind ck = kind(child);
    if (ck != PredicateKind::Parameterized && ck != PredicateKind::Attribution)
        fail(ErrorCode::KindViolation, "refinement child '" + name(child) +
                                           "' must be parameterized or an attribution");
    if (pk == PredicateKind::NegatedAttribution)
        fail(ErrorCode::KindViolation, "cannot refine the negated attribution '" + name(parent) + "'");
    if (parent == child || reaches(child, parent))
        fail(ErrorCode::CycleDetected,
             "refinement " + name(parent) + " > " + name(child) + " would close a cycle");

    EventTypeId et = event_type(event_type_name);
    RefinementEdge edge{parent, child, et};
    bool known = std::any_of(t_.refinements_.begin(), t_.refinements_.end(),
                             [&](const RefinementEdge& r) {
                                 return r.parent == parent && r.child == child &&
                                        r.event_type == et;
                             });
    if (!known) {
        t_.refinements_.push_back(edge);
        auto& children = t_.predicates_[parent.index].children;
        if (std::find(children.begin(), children.end(), child) == children.end())
            children.push_back(child);
    }
    return edge;
}

PredicateId TaxonomyBuilder::transform_regular(PredicateId p) {
    auto& src = t_.predicates_[p.index]; // bounds via kind() below
    if (kind(p) != PredicateKind::Regular)
        fail(ErrorCode::KindViolation, "transform_regular needs a regular predicate, got '" +
                                           name(p) + "' (" + to_string(kind(p)) + ")");
    if (src.transform_image) return *src.transform_image;

    std::vector<std::string> types;
    for (EventTypeId et : src.event_types) types.push_back(t_.event_types_[et.index].name);
    PredicateId image =
        register_internal("attrib_" + src.name, PredicateKind::Attribution, src.universal, types);
    t_.predicates_[p.index].transform_image = image;
    t_.predicates_[image.index].transform_source = p;
    if (p == t_.event_type_predicate_) t_.event_typing_ = image;
    return image;
}

PredicateId TaxonomyBuilder::negate_predicate(PredicateId p) {
    if (kind(p) == PredicateKind::NegatedAttribution)
        fail(ErrorCode::KindViolation,
             "no double negation: assert the positive '" +
                 name(*t_.predicates_[p.index].negation_base) + "' instead");
    if (kind(p) != PredicateKind::Attribution)
        fail(ErrorCode::KindViolation,
             "negate_predicate needs an attribution, got '" + name(p) + "' (" +
                 to_string(kind(p)) + ")");
    auto& base = t_.predicates_[p.index];
    if (base.negation_image) return *base.negation_image;

    std::vector<std::string> types;
    for (EventTypeId et : base.event_types) types.push_back(t_.event_types_[et.index].name);
    PredicateId image = register_internal("not_" + base.name, PredicateKind::NegatedAttribution,
                                          base.universal, types);
    t_.predicates_[p.index].negation_image = image;
    t_.predicates_[image.index].negation_base = p;
    return image;
}

void TaxonomyBuilder::add_constraint(ConstraintKind kind_, PredicateId left, PredicateId right,
                                     std::optional<std::string> scope) {
    if (left == right)
        fail(ErrorCode::SelfConstraint, "constraint needs two distinct attributions, got '" +
                                            name(left) + "' twice");
    for (PredicateId op : {left, right})
        if (kind(op) != PredicateKind::Attribution)
            fail(ErrorCode::KindViolation,
                 "constraint operand '" + name(op) + "' is not an attribution");
    AttributionConstraint c;
    c.kind = kind_;
    c.left = left;
    c.right = right;
    if (scope) c.scope = event_type(*scope);
    t_.constraints_.push_back(c);
}

void TaxonomyBuilder::add_rule(const std::string& subject_var_a, PredicateId pred_a,
                               const std::string& object_var_a, const std::string& subject_var_b,
                               PredicateId pred_b, const std::string& object_var_b,
                               std::optional<std::string> scope) {
    kind(pred_a); // bounds checks
    kind(pred_b);
    std::set<std::string> a_vars{subject_var_a, object_var_a};
    if (!a_vars.count(subject_var_b) && !a_vars.count(object_var_b))
        fail(ErrorCode::InvalidConfig, "rule patterns must share at least one variable");
    ConsistencyRule r;
    r.id = "rule" + std::to_string(++rule_counter_);
    if (scope) r.scope = event_type(*scope);
    r.a = RulePattern{subject_var_a, pred_a, object_var_a};
    r.b = RulePattern{subject_var_b, pred_b, object_var_b};
    t_.rules_.push_back(std::move(r));
}

void TaxonomyBuilder::permit(std::string_view event_type_name,
                             const std::vector<std::string>& viewpoints) {
    EventTypeId id = event_type(event_type_name);
    auto& e = t_.event_types_[id.index];
    e.all_viewpoints = false;
    for (const auto& v : viewpoints) {
        require_token(v, "viewpoint label");
        e.viewpoints.insert(v);
    }
}

void TaxonomyBuilder::permit_all(std::string_view event_type_name) {
    EventTypeId id = event_type(event_type_name);
    t_.event_types_[id.index].all_viewpoints = true;
    t_.event_types_[id.index].viewpoints.clear();
}

std::optional<PredicateId> TaxonomyBuilder::find(std::string_view name) const {
    return t_.find(name);
}

PredicateKind TaxonomyBuilder::kind(PredicateId p) const { return t_.kind(p); }

const std::string& TaxonomyBuilder::name(PredicateId p) const { return t_.name(p); }

void TaxonomyBuilder::check_partition() const {
    // Kinds are stored one-per-entry, so the base kinds cannot overlap; what
    // can go wrong is a negation without its base link or vice versa.
    for (const auto& e : t_.predicates_) {
        if ((e.kind == PredicateKind::NegatedAttribution) != e.negation_base.has_value())
            fail(ErrorCode::KindViolation,
                 "predicate '" + e.name + "' breaks the negation-image bookkeeping");
    }
}

Taxonomy TaxonomyBuilder::freeze() {
    check_partition();
    Taxonomy out = std::move(t_);
    t_ = Taxonomy{};
    return out;
}

} // namespace veckg
