#include "doctest.h"

#include <algorithm>
#include <random>

#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "veckg/consistency.hpp"
#include "veckg/fusion.hpp"
#include "veckg/rdf_io.hpp"

using namespace veckg;
using namespace veckg::testing;

TEST_CASE("subsumption is reflexive and transitive") {
    auto tax = war_taxonomy();
    std::vector<PredicateId> preds;
    for (std::uint32_t i = 0; i < tax->predicate_count(); ++i) preds.push_back(PredicateId{i});

    for (PredicateId p : preds) CHECK(tax->subsumes(p, p));
    for (PredicateId p : preds)
        for (PredicateId q : preds)
            for (PredicateId r : preds)
                if (tax->subsumes(p, q) && tax->subsumes(q, r)) CHECK(tax->subsumes(p, r));
}

TEST_CASE("validity is downward monotone under WTAH") {
    std::mt19937 rng(20250815);
    for (int i = 0; i < 40; ++i) {
        RandomCase c = random_case(rng, RandomSpec{});
        const auto& h = *c.hierarchy;
        for (const Triple& claim : c.graph.claims()) {
            for (ViewpointId v : h.all_nodes()) {
                if (!c.graph.valid_at(claim, v)) continue;
                for (ViewpointId child : h.children(v)) CHECK(c.graph.valid_at(claim, child));
            }
        }
    }
}

TEST_CASE("validity matches the label-level oracle") {
    std::mt19937 rng(7);
    for (Variant variant : {Variant::WTAH, Variant::VPH}) {
        RandomSpec spec;
        spec.variant = variant;
        for (int i = 0; i < 60; ++i) {
            RandomCase c = random_case(rng, spec);
            auto claims = read_claims(c.graph);
            auto engine_claims = std::vector<Triple>(c.graph.claims().begin(),
                                                     c.graph.claims().end());
            REQUIRE(claims.size() == engine_claims.size());
            for (std::size_t k = 0; k < claims.size(); ++k) {
                for (ViewpointId v : c.hierarchy->all_nodes()) {
                    bool oracle = oracle_valid_at(c.fixture, claims[k], c.hierarchy->label(v));
                    CHECK(c.graph.valid_at(engine_claims[k], v) == oracle);
                }
            }
        }
    }
}

TEST_CASE("contradicts is symmetric and irreflexive") {
    std::mt19937 rng(99);
    for (int i = 0; i < 40; ++i) {
        RandomCase c = random_case(rng, RandomSpec{});
        std::vector<Triple> claims(c.graph.claims().begin(), c.graph.claims().end());
        for (const Triple& a : claims) {
            CHECK_FALSE(contradicts(a, a, c.graph));
            for (const Triple& b : claims)
                CHECK(contradicts(a, b, c.graph).has_value() ==
                      contradicts(b, a, c.graph).has_value());
        }
    }
}

TEST_CASE("check_graph agrees with the brute-force oracle") {
    std::mt19937 rng(1234);
    for (Variant variant : {Variant::WTAH, Variant::VPH}) {
        RandomSpec spec;
        spec.variant = variant;
        for (int i = 0; i < 120; ++i) {
            RandomCase c = random_case(rng, spec);
            bool expected = oracle_consistent(c.fixture, read_claims(c.graph));
            CHECK(check_graph(c.graph).overall == expected);
        }
    }
}

TEST_CASE("group_stance agrees with the integer oracle") {
    std::mt19937 rng(4242);
    std::vector<std::string> members{"a", "b", "c", "d"};
    for (int i = 0; i < 400; ++i) {
        int n = 1 + static_cast<int>(rng() % 4);
        std::vector<int> w10;
        std::vector<RawStance> stances;
        Ballot ballot;
        ConsensusConfig cfg;
        int theta100 = (i % 3 == 0) ? 34 : (i % 3 == 1 ? 50 : 67);
        cfg.theta = theta100 / 100.0;
        bool all_zero = true;
        for (int m = 0; m < n; ++m) {
            int w = static_cast<int>(rng() % 11); // tenths: 0.0 .. 1.0
            all_zero = all_zero && w == 0;
            RawStance s = static_cast<RawStance>(rng() % 3);
            w10.push_back(w);
            stances.push_back(s);
            ballot.stances[members[m]] = s;
            cfg.weights[members[m]] = w / 10.0;
        }
        if (all_zero) continue; // explicit all-zero weighting is a config error
        CHECK(group_stance(ballot, cfg) == oracle_stance(w10, stances, theta100));
    }
}

TEST_CASE("serialization round-trips random graphs byte for byte") {
    std::mt19937 rng(31337);
    for (int i = 0; i < 150; ++i) {
        RoundTripCase c = random_round_trip_case(rng);
        std::string wire = materialize(c.graph);
        Graph back = parse(wire, c.taxonomy, c.hierarchy);
        CHECK(back == c.graph);
        CHECK(materialize(back) == wire);
        CHECK(diff(back, c.graph).empty());
    }
}

TEST_CASE("materialization is insertion-order independent") {
    std::mt19937 rng(606);
    for (int i = 0; i < 25; ++i) {
        RoundTripCase c = random_round_trip_case(rng);
        std::string wire = materialize(c.graph);

        // Rebuild the same triple set in a shuffled order.
        std::vector<Triple> triples(c.graph.facts().begin(), c.graph.facts().end());
        triples.insert(triples.end(), c.graph.claims().begin(), c.graph.claims().end());
        std::shuffle(triples.begin(), triples.end(), rng);

        Graph rebuilt(c.taxonomy, c.hierarchy);
        for (const auto& [id, rec] : c.graph.events())
            rebuilt.add_event(id, c.taxonomy->event_type_name(rec.base_type));
        for (const Triple& t : triples) rebuilt.insert_unchecked(t);
        CHECK(rebuilt == c.graph);
        CHECK(materialize(rebuilt) == wire);
    }
}

TEST_CASE("the fusion shortcut never changes a consistent graph's verdicts") {
    std::mt19937 rng(2718);
    int consistent_seen = 0;
    for (int i = 0; i < 200 && consistent_seen < 60; ++i) {
        RandomCase c = random_case(rng, RandomSpec{});
        if (!check_graph(c.graph).overall) continue;
        ++consistent_seen;
        std::vector<Triple> claims(c.graph.claims().begin(), c.graph.claims().end());
        for (ViewpointId v : c.hierarchy->all_nodes()) {
            FusionResult fast = fuse(c.graph, claims, v, true);
            FusionResult slow = fuse(c.graph, claims, v, false);
            CHECK(fast.verdict == slow.verdict);
            CHECK(fast.fused_claims == slow.fused_claims);
        }
    }
    CHECK(consistent_seen >= 40); // the generator must not starve the property
}

TEST_CASE("query verdicts equal fusing the matched claims") {
    std::mt19937 rng(1618);
    for (int i = 0; i < 30; ++i) {
        RandomCase c = random_case(rng, RandomSpec{});
        for (ViewpointId v : c.hierarchy->all_nodes()) {
            QueryPattern q;
            q.viewpoint = c.hierarchy->label(v);
            FusionResult via_query = query(c.graph, q);
            std::vector<Triple> claim_subset;
            for (const Triple& t : via_query.matches)
                if (t.is_claim()) claim_subset.push_back(t);
            FusionResult direct = fuse(c.graph, claim_subset, v);
            CHECK(via_query.verdict == direct.verdict);
            CHECK(via_query.fused_claims == direct.fused_claims);
        }
    }
}

TEST_CASE("admission keeps every reachable state consistent") {
    std::mt19937 rng(55555);
    for (Variant variant : {Variant::WTAH, Variant::VPH}) {
        RandomSpec spec;
        spec.variant = variant;
        spec.max_claims = 1; // start nearly empty; mutations do the work
        for (int round = 0; round < 6; ++round) {
            RandomCase c = random_case(rng, spec);
            Graph g(c.taxonomy, c.hierarchy);
            for (const auto& [id, rec] : c.graph.events())
                g.add_event(id, c.taxonomy->event_type_name(rec.base_type));

            for (int op = 0; op < 60; ++op) {
                if (rng() % 4 == 0 && !g.claims().empty()) {
                    auto it = g.claims().begin();
                    std::advance(it, rng() % g.claims().size());
                    (void)g.remove(*it);
                } else {
                    CascadePolicy policy = rng() % 2 == 0 ? CascadePolicy::None
                                                          : CascadePolicy::DeleteConflicting;
                    (void)g.insert_claim(random_claim(rng, c), policy);
                }
                REQUIRE(check_graph(g).overall);
            }
        }
    }
}

TEST_CASE("inverse-role transactions commit in any operation order") {
    TaxonomyBuilder b;
    PredicateId hare = b.register_predicate("hare", PredicateKind::Attribution);
    PredicateId tortoise = b.register_predicate("tortoise", PredicateKind::Attribution);
    b.add_constraint(ConstraintKind::InverseRole, hare, tortoise);
    b.event_type("race");
    auto tax = std::make_shared<const Taxonomy>(b.freeze());
    auto h = bloc_hierarchy(Variant::WTAH);

    ViewpointId ru = h->require("RU");
    Triple a{"r", hare, Term::entity("x"), ru};
    Triple bb{"r", tortoise, Term::entity("y"), ru};

    Transaction tx{{TxOp::Kind::Insert, a}, {TxOp::Kind::Insert, bb}};
    do {
        Graph g(tax, h);
        g.add_event("r", "race");
        CHECK(g.apply(tx).ok());
        CHECK(g.claims().size() == 2);

        Transaction rm;
        for (const TxOp& op : tx) rm.push_back({TxOp::Kind::Remove, op.triple});
        CHECK(g.apply(rm).ok());
        CHECK(g.claims().empty());
    } while (std::next_permutation(tx.begin(), tx.end(), [](const TxOp& l, const TxOp& r) {
        return l.triple < r.triple;
    }));
}
