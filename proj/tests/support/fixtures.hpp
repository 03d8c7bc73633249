#pragma once

// Shared test fixture: the war-domain taxonomy (role attributions refining
// participant, XOR(attacker, defender), XOR(liberator, occupier)) and the
// two-bloc hierarchy ALL -> {NATO, RU}, NATO -> {GB, GER, US},
// US -> {Congress, POTUS}.

#include <memory>
#include <stdexcept>

#include "veckg/store.hpp"

namespace veckg::testing {

inline std::shared_ptr<const Taxonomy> war_taxonomy() {
    TaxonomyBuilder b;
    PredicateId participant = b.register_predicate("participant", PredicateKind::Regular);
    b.register_predicate("time_span", PredicateKind::Regular);
    b.register_predicate("location", PredicateKind::Regular);
    PredicateId has_cause = b.register_predicate("has_cause", PredicateKind::Regular);
    b.transform_regular(has_cause);
    PredicateId war_party = b.register_predicate("war_party", PredicateKind::Parameterized,
                                                 std::vector<std::string>{"war"});
    PredicateId attacker = b.register_predicate("attacker", PredicateKind::Attribution,
                                                std::vector<std::string>{"war"});
    PredicateId defender = b.register_predicate("defender", PredicateKind::Attribution,
                                                std::vector<std::string>{"war"});
    PredicateId liberator = b.register_predicate("liberator", PredicateKind::Attribution,
                                                 std::vector<std::string>{"war"});
    PredicateId occupier = b.register_predicate("occupier", PredicateKind::Attribution,
                                                std::vector<std::string>{"war"});
    b.register_predicate("aggressor", PredicateKind::Attribution,
                         std::vector<std::string>{"war", "invasion"});
    b.transform_regular(*b.find("event_type"));
    b.add_refinement(participant, war_party, "war");
    b.add_refinement(war_party, attacker, "war");
    b.add_refinement(war_party, defender, "war");
    b.add_refinement(war_party, liberator, "war");
    b.add_refinement(war_party, occupier, "war");
    b.add_constraint(ConstraintKind::MutualExclusion, attacker, defender);
    b.add_constraint(ConstraintKind::MutualExclusion, liberator, occupier);
    b.permit_all("war");
    b.permit_all("invasion");
    b.permit_all("military_operation");
    return std::make_shared<const Taxonomy>(b.freeze());
}

inline std::shared_ptr<const ViewpointHierarchy> bloc_hierarchy(Variant variant) {
    return std::make_shared<const ViewpointHierarchy>(ViewpointHierarchy::build(
        {"NATO", "RU", "GB", "GER", "US", "Congress", "POTUS"},
        {{"ALL", "NATO"},
         {"ALL", "RU"},
         {"NATO", "GB"},
         {"NATO", "GER"},
         {"NATO", "US"},
         {"US", "Congress"},
         {"US", "POTUS"}},
        variant));
}

/// The running example: RUvsUKR with participant facts, a time span, an
/// occupier claim at NATO, a defender claim at RU, and a cause claim at RU.
inline Graph war_graph(Variant variant = Variant::WTAH) {
    auto tax = war_taxonomy();
    auto h = bloc_hierarchy(variant);
    Graph g(tax, h);
    g.add_event("RUvsUKR", "war");

    auto claim = [&](const char* pred, Term obj, const char* vp) {
        Triple t{"RUvsUKR", tax->require(pred), std::move(obj), h->require(vp)};
        if (!g.insert_claim(t).ok()) throw std::logic_error("fixture claim rejected");
    };
    g.insert_fact({"RUvsUKR", tax->require("participant"), Term::entity("Ukraine"), {}});
    g.insert_fact({"RUvsUKR", tax->require("participant"), Term::entity("Russia"), {}});
    g.insert_fact(
        {"RUvsUKR", tax->require("time_span"), Term::literal("2022-02-24/2025-01-01"), {}});
    claim("occupier", Term::entity("Russia"), "NATO");
    claim("defender", Term::entity("Russia"), "RU");
    claim("attrib_has_cause", Term::entity("NATO_expansion"), "RU");
    return g;
}

inline Triple make_claim(const Graph& g, const char* subject, const char* pred, Term obj,
                         const char* vp) {
    return Triple{subject, g.taxonomy().require(pred), std::move(obj),
                  g.hierarchy().require(vp)};
}

} // namespace veckg::testing
