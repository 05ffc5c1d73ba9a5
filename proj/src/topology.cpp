#include "bgpsim/topology.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <numeric>
#include <sstream>

namespace bgpsim {

namespace {

Rel invert(Rel r) {
    switch (r) {
        case Rel::Customer: return Rel::Provider;
        case Rel::Provider: return Rel::Customer;
        case Rel::Peer: return Rel::Peer;
    }
    return Rel::Peer;
}

uint64_t pair_key(uint32_t a, uint32_t b) {
    return (static_cast<uint64_t>(std::min(a, b)) << 32) | std::max(a, b);
}

}  // namespace

AsGraph AsGraph::from_edges(const std::vector<Edge>& edges) {
    AsGraph g;
    for (const Edge& e : edges) {
        if (e.a == e.b) throw ValidationError("self-loop on AS " + std::to_string(e.a));
    }

    // Dense ids in order of first appearance; keeps fixture files readable.
    for (const Edge& e : edges) {
        for (uint32_t asn : {e.a, e.b}) {
            if (!g.id_of_.count(asn)) {
                AsId id = static_cast<AsId>(g.asn_of_.size());
                g.id_of_.emplace(asn, id);
                g.asn_of_.push_back(asn);
            }
        }
    }
    size_t n = g.asn_of_.size();

    // Detect duplicates and conflicts on unordered pairs.
    std::unordered_map<uint64_t, Rel> seen;  // rel of max-ASN side relative to min-ASN side
    std::vector<std::pair<AsId, Neighbor>> half;
    for (const Edge& e : edges) {
        Rel rel_min_view = e.a < e.b ? e.b_rel_to_a : invert(e.b_rel_to_a);
        auto [it, inserted] = seen.emplace(pair_key(e.a, e.b), rel_min_view);
        if (!inserted) {
            if (it->second != rel_min_view)
                throw ValidationError("conflicting relationship for pair " + std::to_string(e.a) +
                                      "|" + std::to_string(e.b));
            continue;  // exact duplicate
        }
        AsId ia = g.id_of_.at(e.a), ib = g.id_of_.at(e.b);
        half.push_back({ia, {ib, e.b_rel_to_a}});
        half.push_back({ib, {ia, invert(e.b_rel_to_a)}});
        if (e.b_rel_to_a == Rel::Peer)
            g.peer_edges_++;
        else
            g.cp_edges_++;
    }

    g.customer_deg_.assign(n, 0);
    g.peer_deg_.assign(n, 0);
    std::vector<uint32_t> deg(n, 0);
    for (auto& [v, nb] : half) {
        deg[v]++;
        if (nb.rel == Rel::Customer) g.customer_deg_[v]++;
        if (nb.rel == Rel::Peer) g.peer_deg_[v]++;
    }
    g.offsets_.assign(n + 1, 0);
    for (size_t v = 0; v < n; v++) g.offsets_[v + 1] = g.offsets_[v] + deg[v];
    g.adj_.resize(half.size());

    // customers first, then peers, then providers, each sorted by id
    std::sort(half.begin(), half.end(), [](const auto& x, const auto& y) {
        if (x.first != y.first) return x.first < y.first;
        if (x.second.rel != y.second.rel) return x.second.rel < y.second.rel;
        return x.second.id < y.second.id;
    });
    for (size_t i = 0; i < half.size(); i++) g.adj_[i] = half[i].second;

    return g;
}

std::optional<Rel> AsGraph::rel_between(AsId a, AsId b) const {
    for (const Neighbor& nb : neighbors(a))
        if (nb.id == b) return nb.rel;
    return std::nullopt;
}

uint64_t AsGraph::content_hash() const {
    // Canonical: sorted (asn, asn, rel) triples, independent of dense order.
    std::vector<std::tuple<uint32_t, uint32_t, uint8_t>> triples;
    for (AsId v = 0; v < num_ases(); v++) {
        for (const Neighbor& nb : neighbors(v)) {
            if (nb.id < v) continue;
            uint32_t a = asn_of_[v], b = asn_of_[nb.id];
            Rel rel_min_view = a < b ? nb.rel : invert(nb.rel);
            triples.emplace_back(std::min(a, b), std::max(a, b),
                                 static_cast<uint8_t>(rel_min_view));
        }
    }
    std::sort(triples.begin(), triples.end());
    uint64_t h = 1469598103934665603ull;
    auto mix = [&h](uint64_t x) {
        for (int i = 0; i < 8; i++) {
            h ^= (x >> (8 * i)) & 0xff;
            h *= 1099511628211ull;
        }
    };
    mix(num_ases());
    for (auto& [a, b, r] : triples) {
        mix(a);
        mix(b);
        mix(r);
    }
    return h;
}

AsGraph parse_relationships(std::istream& in) {
    std::vector<AsGraph::Edge> edges;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        lineno++;
        size_t start = line.find_first_not_of(" \t\r");
        if (start == std::string::npos || line[start] == '#') continue;
        uint32_t a = 0, b = 0;
        int code = 0;
        char bar1 = 0, bar2 = 0;
        std::istringstream ls(line.substr(start));
        if (!(ls >> a >> bar1 >> b >> bar2 >> code) || bar1 != '|' || bar2 != '|')
            throw ParseError(lineno, "expected <asn|asn|rel>, got '" + line + "'");
        if (code == -1)
            edges.push_back({a, b, Rel::Customer});  // a is provider of b
        else if (code == 0)
            edges.push_back({a, b, Rel::Peer});
        else
            throw ParseError(lineno, "relationship code must be -1 or 0");
    }
    return AsGraph::from_edges(edges);
}

AsGraph parse_relationships_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open relationship file: " + path);
    return parse_relationships(f);
}

namespace {

std::vector<AsGraph::Edge> edges_of(const AsGraph& g, const std::vector<bool>* keep = nullptr) {
    std::vector<AsGraph::Edge> edges;
    for (AsId v = 0; v < g.num_ases(); v++) {
        if (keep && !(*keep)[v]) continue;
        for (const Neighbor& nb : g.neighbors(v)) {
            if (nb.id < v) continue;  // one direction per pair
            if (keep && !(*keep)[nb.id]) continue;
            edges.push_back({g.original_asn(v), g.original_asn(nb.id), nb.rel});
        }
    }
    return edges;
}

}  // namespace

AsGraph preprocess(const AsGraph& g, const std::vector<uint32_t>& tier1_seed_asns,
                   uint32_t degree_threshold) {
    if (tier1_seed_asns.empty()) throw ValidationError("tier1 seed must be nonempty");
    std::vector<bool> seed(g.num_ases(), false);
    for (uint32_t asn : tier1_seed_asns) {
        auto id = g.lookup_asn(asn);
        if (!id) throw ValidationError("tier1 seed AS " + std::to_string(asn) + " not in graph");
        seed[*id] = true;
    }

    std::vector<bool> alive(g.num_ases(), true);
    std::vector<uint32_t> providers_left(g.num_ases()), degree_left(g.num_ases());
    for (AsId v = 0; v < g.num_ases(); v++) {
        providers_left[v] = g.provider_degree(v);
        degree_left[v] = g.total_degree(v);
    }

    bool changed = true;
    while (changed) {
        changed = false;
        for (AsId v = 0; v < g.num_ases(); v++) {
            if (!alive[v] || seed[v]) continue;
            if (providers_left[v] == 0 && degree_left[v] < degree_threshold) {
                alive[v] = false;
                changed = true;
                for (const Neighbor& nb : g.neighbors(v)) {
                    if (!alive[nb.id]) continue;
                    degree_left[nb.id]--;
                    // nb.rel == Customer means v was nb's provider
                    if (nb.rel == Rel::Customer) providers_left[nb.id]--;
                }
            }
        }
    }

    return AsGraph::from_edges(edges_of(g, &alive));
}

IxpMembership IxpMembership::parse(std::istream& in) {
    IxpMembership m;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        lineno++;
        size_t start = line.find_first_not_of(" \t\r");
        if (start == std::string::npos || line[start] == '#') continue;
        size_t comma = line.find(',', start);
        if (comma == std::string::npos) throw ParseError(lineno, "expected <ixp_id,asn>");
        std::string ixp = line.substr(start, comma - start);
        uint32_t asn = 0;
        const char* first = line.data() + comma + 1;
        const char* last = line.data() + line.size();
        auto [p, ec] = std::from_chars(first, last, asn);
        if (ec != std::errc{}) throw ParseError(lineno, "bad ASN in '" + line + "'");
        (void)p;
        m.records.emplace_back(ixp, asn);
    }
    return m;
}

IxpMembership IxpMembership::parse_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open IXP file: " + path);
    return parse(f);
}

IxpAugmentResult augment_with_ixp(const AsGraph& g, const IxpMembership& members) {
    std::unordered_map<std::string, std::vector<AsId>> per_ixp;
    std::vector<uint32_t> skipped;
    for (const auto& [ixp, asn] : members.records) {
        auto id = g.lookup_asn(asn);
        if (!id) {
            skipped.push_back(asn);
            continue;
        }
        per_ixp[ixp].push_back(*id);
    }

    std::unordered_map<uint64_t, bool> existing;
    for (AsId v = 0; v < g.num_ases(); v++)
        for (const Neighbor& nb : g.neighbors(v))
            if (nb.id > v) existing.emplace(pair_key(v, nb.id), true);

    std::vector<AsGraph::Edge> edges = edges_of(g);
    size_t added = 0;
    for (auto& [ixp, ids] : per_ixp) {
        std::sort(ids.begin(), ids.end());
        ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
        for (size_t i = 0; i < ids.size(); i++) {
            for (size_t j = i + 1; j < ids.size(); j++) {
                auto [it, inserted] = existing.emplace(pair_key(ids[i], ids[j]), true);
                if (!inserted) continue;
                edges.push_back({g.original_asn(ids[i]), g.original_asn(ids[j]), Rel::Peer});
                added++;
            }
        }
    }

    std::sort(skipped.begin(), skipped.end());
    skipped.erase(std::unique(skipped.begin(), skipped.end()), skipped.end());
    return {AsGraph::from_edges(edges), added, std::move(skipped)};
}

const char* tier_name(Tier t) {
    switch (t) {
        case Tier::Tier1: return "tier1";
        case Tier::Tier2: return "tier2";
        case Tier::Tier3: return "tier3";
        case Tier::CP: return "cp";
        case Tier::SmallCP: return "small_cp";
        case Tier::StubX: return "stub_x";
        case Tier::Stub: return "stub";
        case Tier::SMDG: return "smdg";
    }
    return "?";
}

const std::vector<uint32_t>& default_cp_asns() {
    static const std::vector<uint32_t> cps = {15169, 8075,  20940, 22822, 32934, 15133,
                                              16265, 16509, 2906,  23286, 40428, 714,
                                              10310, 38365, 14907, 13414, 4837};
    return cps;
}

TierAssignment classify_tiers(const AsGraph& g, const std::vector<uint32_t>& cp_asns,
                              const std::vector<uint32_t>& tier1_seed_asns) {
    size_t n = g.num_ases();
    TierAssignment out;
    out.tier.assign(n, Tier::SMDG);
    std::vector<bool> assigned(n, false);

    auto take = [&](AsId v, Tier t) {
        if (assigned[v]) return false;
        assigned[v] = true;
        out.tier[v] = t;
        out.counts[static_cast<size_t>(t)]++;
        return true;
    };

    // Tier 1: explicit seed, else provider-free ASes ranked by customer degree.
    if (!tier1_seed_asns.empty()) {
        for (uint32_t asn : tier1_seed_asns)
            if (auto id = g.lookup_asn(asn)) take(*id, Tier::Tier1);
    } else {
        std::vector<AsId> free;
        for (AsId v = 0; v < n; v++)
            if (g.provider_degree(v) == 0) free.push_back(v);
        std::sort(free.begin(), free.end(), [&](AsId a, AsId b) {
            if (g.customer_degree(a) != g.customer_degree(b))
                return g.customer_degree(a) > g.customer_degree(b);
            return a < b;
        });
        for (size_t i = 0; i < free.size() && i < 13; i++) take(free[i], Tier::Tier1);
    }

    // Tier 2 / Tier 3: top ASes by customer degree that have providers.
    std::vector<AsId> with_prov;
    for (AsId v = 0; v < n; v++)
        if (!assigned[v] && g.provider_degree(v) > 0) with_prov.push_back(v);
    std::sort(with_prov.begin(), with_prov.end(), [&](AsId a, AsId b) {
        if (g.customer_degree(a) != g.customer_degree(b))
            return g.customer_degree(a) > g.customer_degree(b);
        return a < b;
    });
    for (size_t i = 0; i < with_prov.size() && i < 100; i++) take(with_prov[i], Tier::Tier2);
    for (size_t i = 100; i < with_prov.size() && i < 200; i++) take(with_prov[i], Tier::Tier3);

    for (uint32_t asn : cp_asns)
        if (auto id = g.lookup_asn(asn)) take(*id, Tier::CP);

    std::vector<AsId> by_peering;
    for (AsId v = 0; v < n; v++)
        if (!assigned[v] && g.peer_degree(v) > 0) by_peering.push_back(v);
    std::sort(by_peering.begin(), by_peering.end(), [&](AsId a, AsId b) {
        if (g.peer_degree(a) != g.peer_degree(b)) return g.peer_degree(a) > g.peer_degree(b);
        return a < b;
    });
    for (size_t i = 0; i < by_peering.size() && i < 300; i++) take(by_peering[i], Tier::SmallCP);

    for (AsId v = 0; v < n; v++) {
        if (assigned[v]) continue;
        if (g.customer_degree(v) == 0 && g.peer_degree(v) > 0)
            take(v, Tier::StubX);
        else if (g.customer_degree(v) == 0)
            take(v, Tier::Stub);
        else
            take(v, Tier::SMDG);
    }
    return out;
}

std::vector<uint32_t> parse_asn_list(std::istream& in) {
    std::vector<uint32_t> out;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        lineno++;
        size_t start = line.find_first_not_of(" \t\r");
        if (start == std::string::npos || line[start] == '#') continue;
        uint32_t asn = 0;
        const char* first = line.data() + start;
        auto [p, ec] = std::from_chars(first, line.data() + line.size(), asn);
        if (ec != std::errc{}) throw ParseError(lineno, "bad ASN '" + line + "'");
        (void)p;
        out.push_back(asn);
    }
    return out;
}

std::vector<uint32_t> parse_asn_list_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open ASN list: " + path);
    return parse_asn_list(f);
}

AsGraph subgraph_without(const AsGraph& g, AsId removed) {
    std::vector<bool> keep(g.num_ases(), true);
    keep[removed] = false;
    return AsGraph::from_edges(edges_of(g, &keep));
}

}  // namespace bgpsim
