#include <doctest.h>

#include <set>

#include "test_util.hpp"

using namespace bgpsim;
using testutil::graph_of;
using testutil::id_of;

namespace {

const PolicyModel kFirst{SecurityRank::SecurityFirst, 0};
const PolicyModel kSecond{SecurityRank::SecuritySecond, 0};
const PolicyModel kThird{SecurityRank::SecurityThird, 0};
const PolicyModel kInsecure{SecurityRank::InsecureOnly, 0};

}  // namespace

TEST_CASE("origins carry the documented lengths") {
    AsGraph g = graph_of({{1, 2, -1}, {2, 3, -1}});
    AsId d = id_of(g, 1), m = id_of(g, 3);
    RoutingOutcome out = compute_outcome(g, {d, m, SecureConfig::none(g.num_ases())}, kThird);
    CHECK(out.length(d) == 0);
    CHECK(out.length(m) == 1);  // the phantom edge of the bogus announcement
    // AS2 hears (1) from d as a provider route of length 1 and (3,1) from its
    // customer m at length 2; customer wins on local preference.
    AsId mid = id_of(g, 2);
    CHECK(out.length(mid) == 2);
    CHECK(out.rel_type(mid) == Rel::Customer);
    CHECK(out.lead(mid) == Lead::Attacker);
}

TEST_CASE("downgrade fragment: downgrade under security second, not first") {
    AsGraph g = testutil::load_fixture("downgrade.rel");
    AsId d = id_of(g, 3356), m = id_of(g, 64496);
    AsId src = id_of(g, 21740), cogent = id_of(g, 174);
    SecureConfig secure = testutil::secure_of_asns(g, {3356, 21740});

    SUBCASE("normal conditions: 1-hop secure provider route") {
        RoutingOutcome out = compute_outcome(g, {d, std::nullopt, secure}, kSecond);
        CHECK(out.length(src) == 1);
        CHECK(out.rel_type(src) == Rel::Provider);
        CHECK(out.route_secure(src));
    }
    SUBCASE("attack, security second: 4-hop insecure peer route toward m") {
        RoutingOutcome out = compute_outcome(g, {d, m, secure}, kSecond);
        CHECK(out.length(src) == 4);
        CHECK(out.rel_type(src) == Rel::Peer);
        CHECK_FALSE(out.route_secure(src));
        CHECK(out.lead(src) == Lead::Attacker);
        // Cogent's bogus customer route has better local pref than its peer
        // route to the destination.
        CHECK(out.lead(cogent) == Lead::Attacker);
        CHECK(out.rel_type(cogent) == Rel::Customer);
    }
    SUBCASE("attack, security first: the secure route holds") {
        RoutingOutcome out = compute_outcome(g, {d, m, secure}, kFirst);
        CHECK(out.route_secure(src));
        CHECK(out.lead(src) == Lead::Destination);
        CHECK(out.length(src) == 1);
    }
}

TEST_CASE("empty secure set: security third equals insecure-only") {
    testutil::Rng rng(321);
    for (int it = 0; it < 40; it++) {
        auto inst = testutil::fuzz_instance(rng, 12);
        inst.scenario.secure = SecureConfig::none(inst.graph.num_ases());
        RoutingOutcome a = compute_outcome(inst.graph, inst.scenario, kThird);
        RoutingOutcome b = compute_outcome(inst.graph, inst.scenario, kInsecure);
        for (AsId v = 0; v < inst.graph.num_ases(); v++) {
            CHECK(a.lead(v) == b.lead(v));
            CHECK(a.length_[v] == b.length_[v]);
            CHECK(a.canonical_[v] == b.canonical_[v]);
            CHECK_FALSE(a.route_secure(v));
        }
    }
}

TEST_CASE("outcome is deterministic") {
    testutil::Rng rng(99);
    auto inst = testutil::fuzz_instance(rng, 12);
    RoutingOutcome a = compute_outcome(inst.graph, inst.scenario, kSecond);
    RoutingOutcome b = compute_outcome(inst.graph, inst.scenario, kSecond);
    CHECK(a.lead_ == b.lead_);
    CHECK(a.tie_pool_ == b.tie_pool_);
    CHECK(a.canonical_ == b.canonical_);
}

TEST_CASE("fixed states pass a one-step best-response audit") {
    testutil::Rng rng(2024);
    for (int it = 0; it < 60; it++) {
        auto inst = testutil::fuzz_instance(rng, 11);
        for (PolicyModel model : {kFirst, kSecond, kThird, kInsecure}) {
            RoutingOutcome out = compute_outcome(inst.graph, inst.scenario, model);
            DynamicsState st = testutil::state_from_outcome(inst.graph, out);
            std::vector<PolicyModel> models(inst.graph.num_ases(), model);
            CHECK(dynamics::is_stable(inst.graph, inst.scenario, st, models));
        }
    }
}

TEST_CASE("no fixed route violates the export rule") {
    testutil::Rng rng(555);
    for (int it = 0; it < 60; it++) {
        auto inst = testutil::fuzz_instance(rng, 11);
        const AsGraph& g = inst.graph;
        RoutingOutcome out = compute_outcome(g, inst.scenario, kSecond);
        for (AsId v = 0; v < g.num_ases(); v++) {
            if (!out.reachable(v) || v == out.destination || v == out.attacker) continue;
            std::vector<AsId> path = canonical_path(out, v);
            AsId prev = v;
            for (size_t i = 0; i < path.size(); i++) {
                AsId hop = path[i];
                // Origins announce to all neighbors.
                if (hop == out.destination || hop == out.attacker) break;
                // hop announced its route to prev: legal when hop learned it
                // from a customer or when prev is hop's customer.
                AsId hops_next = path[i + 1];
                bool learned_from_customer = g.rel_between(hop, hops_next) == Rel::Customer;
                bool prev_is_customer = g.rel_between(hop, prev) == Rel::Customer;
                CHECK((learned_from_customer || prev_is_customer));
                prev = hop;
            }
        }
    }
}

TEST_CASE("security first never downgrades sources whose normal route avoids m") {
    testutil::Rng rng(808);
    for (int it = 0; it < 80; it++) {
        auto inst = testutil::fuzz_instance(rng, 12);
        const AsGraph& g = inst.graph;
        AsId m = *inst.scenario.attacker;
        Scenario normal = inst.scenario;
        normal.attacker.reset();
        RoutingOutcome before = compute_outcome(g, normal, kFirst, m);
        RoutingOutcome during = compute_outcome(g, inst.scenario, kFirst);
        for (AsId s = 0; s < g.num_ases(); s++) {
            if (s == inst.scenario.destination || s == m) continue;
            if (!before.route_secure(s)) continue;
            if (before.contains_mark(s) == Tri::All) continue;  // every route passes m
            CHECK(during.route_secure(s));
            CHECK(during.lead(s) == Lead::Destination);
        }
    }
}

TEST_CASE("LP(k) beyond the diameter equals the collapsed-preference oracle") {
    testutil::Rng rng(616);
    for (int it = 0; it < 40; it++) {
        auto inst = testutil::fuzz_instance(rng, 10);
        PolicyModel model{SecurityRank::SecuritySecond, 64};
        std::string err = testutil::compare_engine_oracle(inst.graph, inst.scenario, model, 5);
        CHECK_MESSAGE(err.empty(), err);
        // and two over-the-diameter values of k agree with each other
        RoutingOutcome a = compute_outcome(inst.graph, inst.scenario, {SecurityRank::SecuritySecond, 64});
        RoutingOutcome b =
            compute_outcome(inst.graph, inst.scenario, {SecurityRank::SecuritySecond, 4000});
        CHECK(a.lead_ == b.lead_);
        CHECK(a.length_ == b.length_);
        CHECK(a.canonical_ == b.canonical_);
    }
}

TEST_CASE("wedgie fixture yields exactly two stable states") {
    AsGraph g = testutil::load_fixture("wedgie.rel");
    AsId d = id_of(g, 3);
    Scenario sc{d, std::nullopt, testutil::secure_of_asns(g, {3, 31027, 29518, 31283})};
    std::vector<PolicyModel> models(g.num_ases(), kSecond);
    models[id_of(g, 31283)] = kFirst;

    std::set<uint64_t> states;
    uint32_t nonconverged = 0;
    for (uint64_t seed = 0; seed < 64; seed++) {
        MixedResult res = compute_outcome_mixed(g, sc, models, seed);
        if (!res.converged) {
            nonconverged++;
            continue;
        }
        states.insert(res.state.hash());
    }
    CHECK(states.size() == 2);
    CHECK(nonconverged == 0);

    SUBCASE("homogeneous placement has a unique fixed point") {
        std::vector<PolicyModel> homog(g.num_ases(), kSecond);
        std::set<uint64_t> hs;
        for (uint64_t seed = 0; seed < 64; seed++) {
            MixedResult res = compute_outcome_mixed(g, sc, homog, seed);
            REQUIRE(res.converged);
            hs.insert(res.state.hash());
        }
        CHECK(hs.size() == 1);
    }
}

TEST_CASE("star graph converges in one round") {
    AsGraph g = graph_of({{1, 2, -1}, {1, 3, -1}, {1, 4, -1}});
    Scenario sc{id_of(g, 1), std::nullopt, SecureConfig::none(g.num_ases())};
    std::vector<PolicyModel> models(g.num_ases(), kThird);
    MixedResult res = compute_outcome_mixed(g, sc, models, 3);
    CHECK(res.converged);
    CHECK(res.rounds <= 2);  // one active round plus the quiet one
    for (uint32_t asn : {2, 3, 4}) CHECK(res.state.routes[id_of(g, asn)].path.size() == 1);
}

TEST_CASE("simplex stubs select like insecure ASes but secure the destination") {
    // d(1) <- stub(2);  2 also buys from 3 which peers with 4 toward m(5).
    AsGraph g = graph_of({{1, 2, -1}, {3, 2, -1}, {3, 4, 0}, {4, 5, -1}, {3, 1, 0}});
    AsId d = id_of(g, 1), m = id_of(g, 5), stub = id_of(g, 2);
    SecureConfig cfg = SecureConfig::none(g.num_ases());
    cfg.simplex[stub] = 1;
    cfg.secure[id_of(g, 3)] = 1;

    RoutingOutcome out = compute_outcome(g, {d, m, cfg}, kFirst);
    // Stub routes are never secure: it receives with legacy BGP.
    CHECK_FALSE(out.route_secure(stub));

    // As a destination the simplex stub supports secure routes.
    SecureConfig cfg2 = SecureConfig::none(g.num_ases());
    cfg2.simplex[stub] = 1;
    cfg2.secure[id_of(g, 1)] = 1;
    RoutingOutcome in = compute_outcome(g, {stub, std::nullopt, cfg2}, kFirst);
    CHECK(in.route_secure(id_of(g, 1)));
}

TEST_CASE("every reachable AS is fixed in a stage of the model's schedule") {
    testutil::Rng rng(7171);
    for (int it = 0; it < 40; it++) {
        auto inst = testutil::fuzz_instance(rng, 12);
        for (PolicyModel model : {kFirst, kSecond, kThird, kInsecure}) {
            auto schedule = stage_schedule(model);
            RoutingOutcome out = compute_outcome(inst.graph, inst.scenario, model);
            for (AsId v = 0; v < inst.graph.num_ases(); v++) {
                if (v == out.destination || v == out.attacker) {
                    CHECK(out.stage(v) == Stage::Origin);
                    continue;
                }
                if (!out.reachable(v)) {
                    CHECK(out.stage_[v] == kNoStage);
                    continue;
                }
                bool in_schedule = std::find(schedule.begin(), schedule.end(), out.stage(v)) !=
                                   schedule.end();
                CHECK(in_schedule);
            }
        }
    }
}

TEST_CASE("scenario validation") {
    AsGraph g = graph_of({{1, 2, -1}, {2, 3, -1}});
    SecureConfig sc = SecureConfig::none(g.num_ases());
    CHECK_THROWS_AS(validate_scenario(g, {id_of(g, 1), id_of(g, 1), sc}), ValidationError);
    CHECK_THROWS_AS(compute_outcome(g, {99, std::nullopt, sc}, PolicyModel{}), ValidationError);
    CHECK_THROWS_AS(compute_outcome(g, {id_of(g, 1), id_of(g, 1), sc}, PolicyModel{}),
                    ValidationError);
    SecureConfig both = sc;
    both.secure[0] = both.simplex[0] = 1;
    CHECK_THROWS_AS(validate_scenario(g, {id_of(g, 1), std::nullopt, both}), ValidationError);
    SecureConfig nonstub = sc;
    nonstub.simplex[id_of(g, 2)] = 1;  // AS2 has a customer
    CHECK_THROWS_AS(validate_scenario(g, {id_of(g, 1), std::nullopt, nonstub}), ValidationError);
}
