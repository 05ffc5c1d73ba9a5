#include "bgpsim/synthetic.hpp"

#include <algorithm>
#include <ostream>
#include <unordered_set>

#include "bgpsim/rng.hpp"

namespace bgpsim {

namespace {

uint64_t pkey(uint32_t a, uint32_t b) {
    return (static_cast<uint64_t>(std::min(a, b)) << 32) | std::max(a, b);
}

}  // namespace

AsGraph generate_internet(const SyntheticConfig& cfg) {
    Rng rng(cfg.seed);
    std::vector<AsGraph::Edge> edges;
    std::unordered_set<uint64_t> present;

    auto add = [&](uint32_t a, uint32_t b, Rel rel) {
        if (a == b) return false;
        if (!present.insert(pkey(a, b)).second) return false;
        edges.push_back({a, b, rel});
        return true;
    };
    auto add_customer = [&](uint32_t provider, uint32_t customer) {
        return add(provider, customer, Rel::Customer);
    };
    auto add_peer = [&](uint32_t a, uint32_t b) { return add(a, b, Rel::Peer); };

    std::vector<uint32_t> t1, large, mid, small, content;
    for (uint32_t i = 0; i < cfg.tier1; i++) t1.push_back(1 + i);
    // Sequential ASNs start clear of the well-known CP numbers.
    uint32_t next_asn = 100000;
    for (uint32_t i = 0; i < cfg.large_isps; i++) large.push_back(next_asn++);
    for (uint32_t i = 0; i < cfg.mid_isps; i++) mid.push_back(next_asn++);
    for (uint32_t i = 0; i < cfg.small_isps; i++) small.push_back(next_asn++);
    const auto& cp_pool = default_cp_asns();
    for (uint32_t i = 0; i < cfg.content; i++)
        content.push_back(i < cp_pool.size() ? cp_pool[i] : next_asn++);

    // Transit-free core: full peer clique.
    for (size_t i = 0; i < t1.size(); i++)
        for (size_t j = i + 1; j < t1.size(); j++) add_peer(t1[i], t1[j]);

    // Preferential provider pools: an AS appears once per customer it gained,
    // so high-degree providers keep attracting.
    std::vector<uint32_t> t1_pool = t1, large_pool = large, mid_pool = mid, small_pool = small;
    auto pick = [&](std::vector<uint32_t>& pool) { return pool[rng.below(pool.size())]; };
    auto attach = [&](uint32_t customer, std::vector<uint32_t>& pool, uint32_t count) {
        for (uint32_t i = 0; i < count; i++) {
            for (int tries = 0; tries < 16; tries++) {
                uint32_t p = pick(pool);
                if (add_customer(p, customer)) {
                    pool.push_back(p);
                    break;
                }
            }
        }
    };

    // Large ISPs buy mostly from the core, sometimes from each other, and
    // peer densely among themselves.
    for (size_t i = 0; i < large.size(); i++) {
        uint32_t v = large[i];
        uint32_t homes = 2 + static_cast<uint32_t>(rng.below(2));
        for (uint32_t h = 0; h < homes; h++) {
            if (i > 4 && rng.unit() < 0.3)
                attach(v, large_pool, 1);
            else
                attach(v, t1_pool, 1);
        }
    }
    for (size_t i = 0; i < large.size(); i++)
        for (size_t j = i + 1; j < large.size(); j++)
            if (rng.unit() < cfg.large_peer_prob) add_peer(large[i], large[j]);

    // Mid ISPs hang below the large layer with lateral peering.
    for (size_t i = 0; i < mid.size(); i++) {
        uint32_t v = mid[i];
        uint32_t homes = 2 + static_cast<uint32_t>(rng.below(2));
        for (uint32_t h = 0; h < homes; h++) {
            if (i > 10 && rng.unit() < cfg.deep_chain)
                attach(v, mid_pool, 1);
            else
                attach(v, large_pool, 1);
        }
    }
    for (size_t i = 0; i < mid.size(); i++)
        for (size_t j = i + 1; j < mid.size(); j++)
            if (rng.unit() < cfg.mid_peer_prob) add_peer(mid[i], mid[j]);
    for (uint32_t v : mid)
        if (rng.unit() < 0.3) add_peer(v, large[rng.below(large.size())]);

    // Regional ISPs sit another level down.
    for (size_t i = 0; i < small.size(); i++) {
        uint32_t v = small[i];
        uint32_t homes = 1 + static_cast<uint32_t>(rng.below(3));
        for (uint32_t h = 0; h < homes; h++) {
            if (i > 10 && rng.unit() < cfg.deep_chain)
                attach(v, small_pool, 1);
            else
                attach(v, mid_pool, 1);
        }
        for (double links = cfg.small_peer_avg; links > 0; links -= 1.0)
            if (links >= 1.0 || rng.unit() < links) add_peer(v, small[rng.below(small.size())]);
        if (rng.unit() < cfg.small_mid_peer) add_peer(v, mid[rng.below(mid.size())]);
    }

    // Content ASes buy transit high up and peer very widely.
    for (uint32_t v : content) {
        attach(v, t1_pool, 1 + (rng.below(2)));
        attach(v, large_pool, 1 + (rng.below(2)));
        uint32_t npeers = 15 + static_cast<uint32_t>(rng.below(30));
        for (uint32_t i = 0; i < npeers; i++) {
            if (rng.unit() < 0.5)
                add_peer(v, large[rng.below(large.size())]);
            else
                add_peer(v, mid[rng.below(mid.size())]);
        }
    }

    // Stubs: preferentially homed low in the hierarchy; a slice homed to
    // tier-1s only; a slice holding peer links (stubs-x).
    std::vector<uint32_t> stub_asns;
    for (uint32_t i = 0; i < cfg.stubs; i++) stub_asns.push_back(next_asn++);
    for (uint32_t v : stub_asns) {
        uint32_t homes = 1;
        double u = rng.unit();
        if (u < cfg.stub_multihome3)
            homes = 3;
        else if (u < cfg.stub_multihome3 + cfg.stub_multihome2)
            homes = 2;
        if (rng.unit() < cfg.t1_stub_frac) {
            attach(v, t1_pool, homes);
            continue;
        }
        for (uint32_t i = 0; i < homes; i++) {
            double w = rng.unit();
            if (w < 0.05)
                attach(v, large_pool, 1);
            else if (w < 0.33)
                attach(v, mid_pool, 1);
            else
                attach(v, small_pool, 1);
        }
    }
    for (uint32_t v : stub_asns) {
        if (rng.unit() >= cfg.stubx_frac) continue;
        uint32_t links = 1 + static_cast<uint32_t>(rng.below(2));
        for (uint32_t i = 0; i < links; i++) {
            uint32_t other =
                rng.unit() < 0.5 ? mid[rng.below(mid.size())] : small[rng.below(small.size())];
            add_peer(v, other);
        }
    }

    return AsGraph::from_edges(edges);
}

void write_relationships(const AsGraph& g, std::ostream& out) {
    for (AsId v = 0; v < g.num_ases(); v++) {
        for (const Neighbor& nb : g.neighbors(v)) {
            if (nb.id < v) continue;
            if (nb.rel == Rel::Customer)
                out << g.original_asn(v) << '|' << g.original_asn(nb.id) << "|-1\n";
            else if (nb.rel == Rel::Peer)
                out << g.original_asn(v) << '|' << g.original_asn(nb.id) << "|0\n";
            else
                out << g.original_asn(nb.id) << '|' << g.original_asn(v) << "|-1\n";
        }
    }
}

std::vector<uint32_t> synthetic_tier1_asns(const SyntheticConfig& cfg) {
    std::vector<uint32_t> out;
    for (uint32_t i = 0; i < cfg.tier1; i++) out.push_back(1 + i);
    return out;
}

}  // namespace bgpsim
