#include "doctest.h"

#include <functional>

#include "veckg/taxonomy.hpp"

using namespace veckg;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an Error");
    return ErrorCode::InvalidConfig;
}

} // namespace

TEST_CASE("registration rules") {
    TaxonomyBuilder b;

    SUBCASE("event_type is a builtin regular predicate") {
        auto tax = b.freeze();
        auto p = tax.find("event_type");
        REQUIRE(p);
        CHECK(tax.kind(*p) == PredicateKind::Regular);
        CHECK(tax.event_type_predicate() == *p);
    }

    SUBCASE("duplicates are rejected") {
        b.register_predicate("participant", PredicateKind::Regular);
        CHECK(code_of([&] { b.register_predicate("participant", PredicateKind::Attribution); }) ==
              ErrorCode::DuplicateName);
        CHECK(code_of([&] { b.register_predicate("event_type", PredicateKind::Regular); }) ==
              ErrorCode::DuplicateName);
    }

    SUBCASE("names must be tokens") {
        CHECK(code_of([&] { b.register_predicate("two words", PredicateKind::Regular); }) ==
              ErrorCode::ReservedCharacter);
        CHECK(code_of([&] { b.register_predicate("pred#1", PredicateKind::Regular); }) ==
              ErrorCode::ReservedCharacter);
    }

    SUBCASE("wire-format names are reserved") {
        CHECK(code_of([&] {
                  b.register_predicate("singleton_property_of", PredicateKind::Regular);
              }) == ErrorCode::ReservedName);
        CHECK(code_of([&] { b.register_predicate("acc_to_vp", PredicateKind::Regular); }) ==
              ErrorCode::ReservedName);
    }

    SUBCASE("negated attributions cannot be registered directly") {
        CHECK_THROWS_AS(b.register_predicate("not_x", PredicateKind::NegatedAttribution), Error);
    }
}

TEST_CASE("refinement edges") {
    TaxonomyBuilder b;
    PredicateId participant = b.register_predicate("participant", PredicateKind::Regular);
    PredicateId war_party = b.register_predicate("war_party", PredicateKind::Parameterized,
                                                 std::vector<std::string>{"war"});
    PredicateId attacker = b.register_predicate("attacker", PredicateKind::Attribution,
                                                std::vector<std::string>{"war"});
    PredicateId other = b.register_predicate("other", PredicateKind::Regular);

    SUBCASE("chains build and subsume transitively and reflexively") {
        b.add_refinement(participant, war_party, "war");
        b.add_refinement(war_party, attacker, "war");
        auto tax = b.freeze();
        CHECK(tax.subsumes(participant, participant));
        CHECK(tax.subsumes(participant, war_party));
        CHECK(tax.subsumes(participant, attacker));
        CHECK(tax.subsumes(war_party, attacker));
        CHECK_FALSE(tax.subsumes(attacker, participant));
        CHECK_FALSE(tax.subsumes(participant, tax.require("other")));
        CHECK(tax.refinements().size() == 2);
    }

    SUBCASE("a regular child is a kind violation") {
        CHECK(code_of([&] { b.add_refinement(participant, other, "war"); }) ==
              ErrorCode::KindViolation);
    }

    SUBCASE("attribution children may hang off parameterized parents") {
        b.add_refinement(war_party, attacker, "war");
        auto tax = b.freeze();
        CHECK(tax.subsumes(war_party, attacker));
    }

    SUBCASE("cycles are rejected") {
        PredicateId p2 = b.register_predicate("p2", PredicateKind::Parameterized,
                                              std::vector<std::string>{"war"});
        b.add_refinement(war_party, p2, "war");
        CHECK(code_of([&] { b.add_refinement(p2, war_party, "war"); }) ==
              ErrorCode::CycleDetected);
        CHECK(code_of([&] { b.add_refinement(war_party, war_party, "war"); }) ==
              ErrorCode::CycleDetected);
    }

    SUBCASE("negated attributions cannot take part") {
        PredicateId neg = b.negate_predicate(attacker);
        CHECK(code_of([&] { b.add_refinement(neg, attacker, "war"); }) ==
              ErrorCode::KindViolation);
        CHECK(code_of([&] { b.add_refinement(war_party, neg, "war"); }) ==
              ErrorCode::KindViolation);
    }
}

TEST_CASE("transformations of regular predicates") {
    TaxonomyBuilder b;
    PredicateId cause = b.register_predicate("has_cause", PredicateKind::Regular);
    PredicateId image = b.transform_regular(cause);
    auto again = b.transform_regular(cause);
    CHECK(image == again); // idempotent

    auto tax = b.freeze();
    CHECK(tax.name(image) == "attrib_has_cause");
    CHECK(tax.kind(image) == PredicateKind::Attribution);
    CHECK(tax.transform_source(image) == cause);
    CHECK(tax.transform_image(cause) == image);

    SUBCASE("only regular predicates transform") {
        TaxonomyBuilder b2;
        PredicateId attr = b2.register_predicate("a", PredicateKind::Attribution);
        CHECK(code_of([&] { b2.transform_regular(attr); }) == ErrorCode::KindViolation);
    }

    SUBCASE("transforming the event_type builtin yields the typing attribution") {
        TaxonomyBuilder b2;
        PredicateId et = *b2.find("event_type");
        PredicateId typing = b2.transform_regular(et);
        auto tax2 = b2.freeze();
        CHECK(tax2.name(typing) == "attrib_event_type");
        CHECK(tax2.event_typing_attribution() == typing);
        CHECK(tax2.is_event_typing(typing));
        CHECK_FALSE(tax2.is_event_typing(et));
    }
}

TEST_CASE("negation") {
    TaxonomyBuilder b;
    PredicateId attacker = b.register_predicate("attacker", PredicateKind::Attribution);
    PredicateId neg = b.negate_predicate(attacker);
    CHECK(b.negate_predicate(attacker) == neg); // idempotent

    SUBCASE("bookkeeping") {
        auto tax = b.freeze();
        CHECK(tax.name(neg) == "not_attacker");
        CHECK(tax.kind(neg) == PredicateKind::NegatedAttribution);
        CHECK(tax.negation_of(attacker) == neg);
        CHECK_FALSE(tax.negation_of(neg).has_value());
        CHECK(tax.positive_base(neg) == attacker);
        CHECK(tax.positive_base(attacker) == attacker);
    }

    SUBCASE("no double negation") {
        CHECK(code_of([&] { b.negate_predicate(neg); }) == ErrorCode::KindViolation);
    }

    SUBCASE("only attributions negate") {
        PredicateId reg = b.register_predicate("r", PredicateKind::Regular);
        CHECK(code_of([&] { b.negate_predicate(reg); }) == ErrorCode::KindViolation);
    }
}

TEST_CASE("attribution constraints") {
    TaxonomyBuilder b;
    PredicateId liberator = b.register_predicate("liberator", PredicateKind::Attribution);
    PredicateId occupier = b.register_predicate("occupier", PredicateKind::Attribution);
    PredicateId underdog = b.register_predicate("underdog", PredicateKind::Attribution);
    PredicateId topdog = b.register_predicate("topdog", PredicateKind::Attribution);
    PredicateId reg = b.register_predicate("r", PredicateKind::Regular);

    SUBCASE("lookups are symmetric") {
        b.add_constraint(ConstraintKind::MutualExclusion, liberator, occupier);
        b.add_constraint(ConstraintKind::InverseRole, underdog, topdog, "duel");
        auto tax = b.freeze();
        auto c1 = tax.constraint_between(liberator, occupier);
        auto c2 = tax.constraint_between(occupier, liberator);
        REQUIRE(c1);
        REQUIRE(c2);
        CHECK(c1->kind == ConstraintKind::MutualExclusion);
        CHECK(c2->kind == ConstraintKind::MutualExclusion);
        auto inv = tax.constraint_between(topdog, underdog);
        REQUIRE(inv);
        CHECK(inv->kind == ConstraintKind::InverseRole);
        REQUIRE(inv->scope);
        CHECK(tax.event_type_name(*inv->scope) == "duel");
        CHECK_FALSE(tax.constraint_between(liberator, underdog));
        CHECK(tax.constraints().size() == 2);
    }

    SUBCASE("operands must be distinct attributions") {
        CHECK(code_of([&] {
                  b.add_constraint(ConstraintKind::MutualExclusion, liberator, liberator);
              }) == ErrorCode::SelfConstraint);
        CHECK(code_of([&] { b.add_constraint(ConstraintKind::MutualExclusion, liberator, reg); }) ==
              ErrorCode::KindViolation);
    }
}

TEST_CASE("incompatibility rules need a shared variable") {
    TaxonomyBuilder b;
    PredicateId a = b.register_predicate("a", PredicateKind::Attribution);
    PredicateId c = b.register_predicate("c", PredicateKind::Attribution);

    b.add_rule("?s", a, "?o", "?s", c, "?o");
    CHECK(code_of([&] { b.add_rule("?s", a, "?o", "?x", c, "?y"); }) == ErrorCode::InvalidConfig);

    auto tax = b.freeze();
    REQUIRE(tax.rules().size() == 1);
    CHECK(tax.rules()[0].id == "rule1");
    CHECK(tax.rules()[0].a.predicate == a);
    CHECK(tax.rules()[0].b.predicate == c);
}

TEST_CASE("vocabulary and permissibility") {
    TaxonomyBuilder b;
    PredicateId universal = b.register_predicate("u", PredicateKind::Attribution);
    PredicateId scoped = b.register_predicate("s", PredicateKind::Attribution,
                                              std::vector<std::string>{"war"});
    PredicateId participant = b.register_predicate("participant", PredicateKind::Regular);
    PredicateId war_party = b.register_predicate("war_party", PredicateKind::Parameterized,
                                                 std::vector<std::string>{"war"});
    PredicateId edge_typed = b.register_predicate("edge_typed", PredicateKind::Attribution,
                                                  std::vector<std::string>{"duel"});
    b.add_refinement(participant, war_party, "war");
    b.add_refinement(war_party, edge_typed, "war"); // edge adds war to its vocabulary
    b.event_type("ceremony");
    b.permit("war", {"NATO", "RU"});
    auto tax = b.freeze();

    EventTypeId war = tax.require_event_type("war");
    EventTypeId duel = tax.require_event_type("duel");
    EventTypeId ceremony = tax.require_event_type("ceremony");

    SUBCASE("defined_for: universal, declared, or via a refinement edge") {
        CHECK(tax.defined_for(universal, war));
        CHECK(tax.defined_for(universal, ceremony));
        CHECK(tax.defined_for(scoped, war));
        CHECK_FALSE(tax.defined_for(scoped, ceremony));
        CHECK(tax.defined_for(edge_typed, duel));
        CHECK(tax.defined_for(edge_typed, war));
        CHECK_FALSE(tax.defined_for(edge_typed, ceremony));
    }

    SUBCASE("negations delegate to the base vocabulary") {
        TaxonomyBuilder b2;
        PredicateId s2 = b2.register_predicate("s", PredicateKind::Attribution,
                                               std::vector<std::string>{"war"});
        PredicateId neg = b2.negate_predicate(s2);
        auto tax2 = b2.freeze();
        CHECK(tax2.defined_for(neg, tax2.require_event_type("war")));
    }

    SUBCASE("permissible = vocabulary AND permitted viewpoints") {
        CHECK(tax.permissible(war, scoped, "NATO"));
        CHECK(tax.permissible(war, scoped, "RU"));
        CHECK_FALSE(tax.permissible(war, scoped, "GB"));
        CHECK(tax.permissible(ceremony, universal, "anything")); // default: all viewpoints
        CHECK_FALSE(tax.permissible(ceremony, scoped, "NATO")); // not in vocabulary
    }

    SUBCASE("of_kind partitions the registry") {
        auto attributions = tax.of_kind(PredicateKind::Attribution);
        CHECK(attributions.size() == 3);
        auto regulars = tax.of_kind(PredicateKind::Regular);
        CHECK(regulars.size() == 2); // participant + event_type builtin
    }
}
