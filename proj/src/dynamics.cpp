#include "bgpsim/dynamics.hpp"

#include <algorithm>
#include <unordered_set>

#include "bgpsim/rng.hpp"

namespace bgpsim {
namespace dynamics {

namespace {

// Position of a (type, length) candidate in the local-preference ranking.
// Standard LP is customer < peer < provider; LP(k) interleaves customer and
// peer classes of length up to k before the open-ended classes.
uint32_t lp_class(PolicyModel model, Rel type, uint32_t length) {
    uint32_t k = model.lpk;
    if (type == Rel::Provider) return 2 * k + 2;
    uint32_t side = type == Rel::Peer ? 1 : 0;
    if (k > 0 && length <= k) return 2 * (length - 1) + side;
    return 2 * k + side;
}

struct PrefTuple {
    uint32_t a, b, c;
    auto operator<=>(const PrefTuple&) const = default;
};

PrefTuple pref_tuple(PolicyModel model, const CandScore& s) {
    uint32_t lp = lp_class(model, s.type, s.length);
    uint32_t insec = s.secure ? 0u : 1u;
    switch (model.rank) {
        case SecurityRank::InsecureOnly: return {lp, s.length, 0};
        case SecurityRank::SecurityFirst: return {insec, lp, s.length};
        case SecurityRank::SecuritySecond: return {lp, insec, s.length};
        case SecurityRank::SecurityThird: return {lp, s.length, insec};
    }
    return {0, 0, 0};
}

}  // namespace

bool preferred(PolicyModel model, const CandScore& a, const CandScore& b) {
    return pref_tuple(model, a) < pref_tuple(model, b);
}

bool equivalent(PolicyModel model, const CandScore& a, const CandScore& b) {
    return pref_tuple(model, a) == pref_tuple(model, b);
}

DynamicsState initial_state(const AsGraph& g, const Scenario& sc) {
    DynamicsState st;
    st.routes.resize(g.num_ases());
    st.routes[sc.destination].exists = true;  // the empty route
    if (sc.attacker) {
        ChosenRoute& bogus = st.routes[*sc.attacker];
        bogus.exists = true;
        bogus.path = {sc.destination};
        bogus.secure = false;
    }
    return st;
}

BestSet best_response_set(const AsGraph& g, const Scenario& sc, const DynamicsState& state,
                          AsId v, PolicyModel model) {
    BestSet best;
    const AsId d = sc.destination;
    const AsId m = sc.attacker.value_or(kNoAs);
    for (const Neighbor& nb : g.neighbors(v)) {
        AsId w = nb.id;
        const ChosenRoute& rw = state.routes[w];
        if (!rw.exists) continue;
        // Export rule at w: customer-learned routes go to everyone, otherwise
        // only to customers. Origination by d and the bogus announcement by m
        // reach all their neighbors.
        bool w_is_origin = (w == d || w == m);
        bool v_is_customer_of_w = nb.rel == Rel::Provider;
        if (!w_is_origin && rw.type != Rel::Customer && !v_is_customer_of_w) continue;
        if (std::find(rw.path.begin(), rw.path.end(), v) != rw.path.end()) continue;

        CandScore score;
        score.type = nb.rel;
        score.length = rw.route_length() + 1;
        bool attacked = (w == m) || std::find(rw.path.begin(), rw.path.end(), m) != rw.path.end();
        bool sec = false;
        if (model.rank != SecurityRank::InsecureOnly && !attacked && sc.secure.full(v) &&
            sc.secure.dest_secure(d)) {
            sec = true;
            if (w != d && !sc.secure.full(w)) sec = false;
            for (AsId x : rw.path)
                if (x != d && !sc.secure.full(x)) sec = false;
        }
        score.secure = sec;

        if (!best.any || preferred(model, score, best.score)) {
            best.any = true;
            best.score = score;
            best.tied_next_hops.clear();
            best.tied_routes.clear();
        } else if (!equivalent(model, score, best.score)) {
            continue;
        }
        ChosenRoute route;
        route.exists = true;
        route.type = score.type;
        route.secure = score.secure;
        route.path.reserve(rw.path.size() + 1);
        route.path.push_back(w);
        route.path.insert(route.path.end(), rw.path.begin(), rw.path.end());
        best.tied_next_hops.push_back(w);
        best.tied_routes.push_back(std::move(route));
    }
    return best;
}

MixedResult run_best_response(const AsGraph& g, const Scenario& sc,
                              std::span<const PolicyModel> per_as_model, uint64_t activation_seed,
                              uint32_t round_cap) {
    const size_t n = g.num_ases();
    if (round_cap == 0) round_cap = static_cast<uint32_t>(10 * n + 10);
    MixedResult res;
    res.state = initial_state(g, sc);

    std::vector<AsId> order;
    order.reserve(n);
    for (AsId v = 0; v < n; v++)
        if (v != sc.destination && (!sc.attacker || v != *sc.attacker)) order.push_back(v);

    Rng rng(activation_seed);
    std::unordered_set<uint64_t> seen;
    seen.insert(res.state.hash());

    for (uint32_t round = 0; round < round_cap; round++) {
        rng.shuffle(order);
        bool changed = false;
        for (AsId v : order) {
            BestSet best = best_response_set(g, sc, res.state, v, per_as_model[v]);
            ChosenRoute next;  // empty = withdraw
            if (best.any) {
                // Deterministic tiebreak: lowest next-hop id.
                size_t pick = 0;
                for (size_t i = 1; i < best.tied_next_hops.size(); i++)
                    if (best.tied_next_hops[i] < best.tied_next_hops[pick]) pick = i;
                next = best.tied_routes[pick];
            }
            if (!(next == res.state.routes[v])) {
                res.state.routes[v] = std::move(next);
                changed = true;
            }
        }
        res.rounds = round + 1;
        if (!changed) {
            res.converged = true;
            break;
        }
        if (!seen.insert(res.state.hash()).second) break;  // revisited state: cycle
    }
    return res;
}

bool is_stable(const AsGraph& g, const Scenario& sc, const DynamicsState& state,
               std::span<const PolicyModel> per_as_model) {
    for (AsId v = 0; v < g.num_ases(); v++) {
        if (v == sc.destination || (sc.attacker && v == *sc.attacker)) continue;
        BestSet best = best_response_set(g, sc, state, v, per_as_model[v]);
        const ChosenRoute& cur = state.routes[v];
        if (!best.any) {
            if (cur.exists) return false;
            continue;
        }
        if (!cur.exists) return false;
        CandScore cur_score{cur.type, cur.route_length(), cur.secure};
        if (!equivalent(per_as_model[v], cur_score, best.score)) return false;
        // The held route must still be on offer from its next hop.
        bool found = false;
        for (const ChosenRoute& r : best.tied_routes)
            if (r == cur) found = true;
        if (!found) return false;
    }
    return true;
}

}  // namespace dynamics

uint64_t DynamicsState::hash() const {
    uint64_t h = 1469598103934665603ull;
    auto mix = [&h](uint64_t x) { h ^= x + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2); };
    for (const ChosenRoute& r : routes) {
        mix(r.exists ? 1 : 0);
        if (!r.exists) continue;
        mix(static_cast<uint64_t>(r.type) | (static_cast<uint64_t>(r.secure) << 8));
        for (AsId x : r.path) mix(x);
        mix(0xffffffffull);
    }
    return h;
}

MixedResult compute_outcome_mixed(const AsGraph& g, const Scenario& sc,
                                  std::span<const PolicyModel> per_as_model,
                                  uint64_t activation_seed, uint32_t round_cap) {
    validate_scenario(g, sc);
    return dynamics::run_best_response(g, sc, per_as_model, activation_seed, round_cap);
}

}  // namespace bgpsim
