#include "bgpsim/engine.hpp"

#include <algorithm>
#include <cassert>
#include <queue>

namespace bgpsim {

SecureConfig SecureConfig::of(size_t n, std::span<const AsId> secure_ids,
                              std::span<const AsId> simplex_ids) {
    SecureConfig c = none(n);
    for (AsId v : secure_ids) c.secure.at(v) = 1;
    for (AsId v : simplex_ids) c.simplex.at(v) = 1;
    return c;
}

void validate_scenario(const AsGraph& g, const Scenario& sc) {
    size_t n = g.num_ases();
    if (sc.destination >= n) throw ValidationError("destination not in graph");
    if (sc.attacker) {
        if (*sc.attacker >= n) throw ValidationError("attacker not in graph");
        if (*sc.attacker == sc.destination) throw ValidationError("attacker equals destination");
    }
    if (sc.secure.secure.size() != n || sc.secure.simplex.size() != n)
        throw ValidationError("secure config size mismatch");
    for (AsId v = 0; v < n; v++) {
        if (sc.secure.secure[v] && sc.secure.simplex[v])
            throw ValidationError("AS " + std::to_string(g.original_asn(v)) +
                                  " is both secure and simplex");
        if (sc.secure.simplex[v] && g.customer_degree(v) > 0)
            throw ValidationError("simplex AS " + std::to_string(g.original_asn(v)) +
                                  " is not a stub");
    }
}

namespace {

// Lead and containment are tracked as 2-bit masks so tie merging is a plain OR.
constexpr uint8_t kLeadD = 1, kLeadA = 2;
constexpr uint8_t kHasMark = 1, kAvoidsMark = 2;

uint8_t tri_of(uint8_t mark_bits) {
    bool has = mark_bits & kHasMark, avoids = mark_bits & kAvoidsMark;
    if (has && avoids) return static_cast<uint8_t>(Tri::Some);
    if (has) return static_cast<uint8_t>(Tri::All);
    return static_cast<uint8_t>(Tri::None);
}

struct Cand {
    uint64_t key;
    AsId to;
    AsId via;
    uint8_t type;  // Rel at `to`
    uint8_t sec;
    uint32_t len;
};
struct CandAfter {
    bool operator()(const Cand& a, const Cand& b) const { return a.key > b.key; }
};

Stage stage_for(PolicyModel model, Rel type, bool sec) {
    bool secured = sec && (model.rank == SecurityRank::SecurityFirst ||
                           (model.rank == SecurityRank::SecuritySecond && type != Rel::Peer));
    switch (type) {
        case Rel::Customer: return secured ? Stage::FSCR : Stage::FCR;
        case Rel::Peer: return secured ? Stage::FSPeeR : Stage::FPeeR;
        case Rel::Provider: return secured ? Stage::FSPrvR : Stage::FPrvR;
    }
    return Stage::FCR;
}

}  // namespace

void compute_outcome_into(const AsGraph& g, const Scenario& sc, PolicyModel model,
                          RoutingOutcome& out, std::optional<AsId> mark) {
    const size_t n = g.num_ases();
    const AsId d = sc.destination;
    const AsId m = sc.attacker.value_or(kNoAs);
    if (d >= n) throw ValidationError("destination not in graph");
    if (m != kNoAs && (m >= n || m == d)) throw ValidationError("bad attacker");

    out.destination = d;
    out.attacker = m;
    out.model = model;
    out.lead_.assign(n, 0);
    out.rel_.assign(n, 0);
    out.secure_.assign(n, 0);
    out.stage_.assign(n, kNoStage);
    out.contains_.assign(n, static_cast<uint8_t>(Tri::None));
    out.length_.assign(n, 0);
    out.canonical_.assign(n, kNoAs);
    out.tie_offset_.assign(n + 1, 0);
    out.tie_pool_.clear();

    // Working state; lead/mark as bit masks, folded into `out` at the end.
    thread_local std::vector<uint64_t> level;
    thread_local std::vector<uint8_t> fixed, lead_bits, mark_bits, chain_secure;
    thread_local std::vector<std::vector<AsId>> ties;
    thread_local std::priority_queue<Cand, std::vector<Cand>, CandAfter> pq;
    level.assign(n, 0);
    fixed.assign(n, 0);
    lead_bits.assign(n, 0);
    mark_bits.assign(n, 0);
    chain_secure.assign(n, 0);
    if (ties.size() < n) ties.resize(n);
    for (size_t i = 0; i < n; i++) ties[i].clear();
    while (!pq.empty()) pq.pop();

    // Bits of a route learned via `via`: it contains the mark when via is the
    // mark itself or via's own route does.
    auto via_mark_bits = [&](AsId via) -> uint8_t {
        if (mark && via == *mark) return kHasMark;
        return mark_bits[via];
    };

    const bool track_secure = model.rank != SecurityRank::InsecureOnly;

    // Offers from a fixed AS to the neighbors its export policy allows.
    auto offer_from = [&](AsId v) {
        bool origin = (v == d || v == m);
        bool to_all = origin || static_cast<Rel>(out.rel_[v]) == Rel::Customer;
        uint32_t next_len = out.length_[v] + 1;
        bool sec_chain = chain_secure[v] != 0;
        auto push_to = [&](const Neighbor& nb) {
            AsId u = nb.id;
            if (u == d || u == m || fixed[u]) return;
            // nb.rel is v's view of u; u sees v inverted.
            Rel type_at_u = nb.rel == Rel::Customer   ? Rel::Provider
                            : nb.rel == Rel::Provider ? Rel::Customer
                                                      : Rel::Peer;
            bool sec = track_secure && sec_chain && sc.secure.full(u);
            pq.push({level_key(model, type_at_u, next_len, sec), u, v,
                     static_cast<uint8_t>(type_at_u), static_cast<uint8_t>(sec), next_len});
        };
        if (to_all) {
            for (const Neighbor& nb : g.neighbors(v)) push_to(nb);
        } else {
            for (const Neighbor& nb : g.customers(v)) push_to(nb);
        }
    };

    // The destination's route is the empty route; the attacker is pinned to
    // its bogus announcement of length 1.
    fixed[d] = 1;
    out.length_[d] = 0;
    out.stage_[d] = static_cast<uint8_t>(Stage::Origin);
    lead_bits[d] = kLeadD;
    mark_bits[d] = kAvoidsMark;  // d's own route is empty
    chain_secure[d] = track_secure && sc.secure.dest_secure(d) ? 1 : 0;
    if (m != kNoAs) {
        fixed[m] = 1;
        out.length_[m] = 1;
        out.stage_[m] = static_cast<uint8_t>(Stage::Origin);
        lead_bits[m] = kLeadA;
        mark_bits[m] = (mark && d == *mark) ? kHasMark : kAvoidsMark;  // phantom route (d)
        chain_secure[m] = 0;
    }
    offer_from(d);
    if (m != kNoAs) offer_from(m);

    while (!pq.empty()) {
        Cand c = pq.top();
        pq.pop();
        AsId u = c.to;
        if (fixed[u]) {
            if (level[u] == c.key) {
                // Same preference level: joins the tie set.
                ties[u].push_back(c.via);
                lead_bits[u] |= lead_bits[c.via];
                mark_bits[u] |= via_mark_bits(c.via);
            }
            continue;
        }
        fixed[u] = 1;
        level[u] = c.key;
        out.rel_[u] = c.type;
        out.secure_[u] = c.sec;
        out.length_[u] = c.len;
        out.stage_[u] = static_cast<uint8_t>(stage_for(model, static_cast<Rel>(c.type), c.sec));
        chain_secure[u] = c.sec;
        ties[u].push_back(c.via);
        lead_bits[u] = lead_bits[c.via];
        mark_bits[u] = via_mark_bits(c.via);
        offer_from(u);
    }

    // Finalize: sorted tie sets in one arena, masks to enums.
    size_t total = 0;
    for (size_t v = 0; v < n; v++) total += ties[v].size();
    out.tie_pool_.reserve(total);
    for (AsId v = 0; v < n; v++) {
        out.tie_offset_[v] = static_cast<uint32_t>(out.tie_pool_.size());
        if (v == d || v == m) continue;
        std::sort(ties[v].begin(), ties[v].end());
        for (AsId w : ties[v]) out.tie_pool_.push_back(w);
        if (!ties[v].empty()) out.canonical_[v] = ties[v].front();
        out.lead_[v] = lead_bits[v];
        out.contains_[v] = tri_of(mark_bits[v]);
    }
    out.tie_offset_[n] = static_cast<uint32_t>(out.tie_pool_.size());
    out.lead_[d] = kLeadD;
    if (m != kNoAs) {
        out.lead_[m] = kLeadA;
        out.canonical_[m] = d;
        out.contains_[m] = static_cast<uint8_t>(mark && *mark == m ? Tri::All : Tri::None);
    }
    out.contains_[d] = tri_of(mark_bits[d]);
}

RoutingOutcome compute_outcome(const AsGraph& g, const Scenario& sc, PolicyModel model,
                               std::optional<AsId> mark) {
    RoutingOutcome out;
    compute_outcome_into(g, sc, model, out, mark);
    return out;
}

std::vector<AsId> canonical_path(const RoutingOutcome& out, AsId v) {
    std::vector<AsId> path;
    if (v == out.destination) return path;
    if (v == out.attacker) return {out.destination};
    if (!out.reachable(v)) return path;
    AsId cur = v;
    while (cur != out.destination) {
        AsId next = cur == out.attacker ? out.destination : out.canonical_next_hop(cur);
        path.push_back(next);
        cur = next;
    }
    return path;
}

}  // namespace bgpsim
