#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace bgpsim {

// Dense AS index, 0..N-1 after renaming. Original ASNs live in AsGraph::original_asn.
using AsId = uint32_t;
inline constexpr AsId kNoAs = 0xffffffffu;

// Role of the *neighbor* relative to the owning AS: a neighbor with rel Customer
// pays the owner for transit.
enum class Rel : uint8_t { Customer = 0, Peer = 1, Provider = 2 };

struct Neighbor {
    AsId id;
    Rel rel;
};

class ParseError : public std::runtime_error {
public:
    ParseError(size_t line, const std::string& msg)
        : std::runtime_error("line " + std::to_string(line) + ": " + msg), line_(line) {}
    size_t line() const { return line_; }

private:
    size_t line_;
};

class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Immutable annotated AS-level topology. Adjacency is CSR-packed with each
// AS's neighbors grouped customers-first, then peers, then providers, each
// group sorted by id. Safe for unrestricted concurrent reads.
class AsGraph {
public:
    // Edge list uses original ASNs; rel is the role of `b` relative to `a`.
    struct Edge {
        uint32_t a, b;
        Rel b_rel_to_a;
    };

    static AsGraph from_edges(const std::vector<Edge>& edges);

    size_t num_ases() const { return offsets_.size() - 1; }
    size_t num_customer_provider_edges() const { return cp_edges_; }
    size_t num_peer_edges() const { return peer_edges_; }

    std::span<const Neighbor> neighbors(AsId v) const {
        return {adj_.data() + offsets_[v], adj_.data() + offsets_[v + 1]};
    }
    std::span<const Neighbor> customers(AsId v) const {
        return {adj_.data() + offsets_[v], adj_.data() + offsets_[v] + customer_deg_[v]};
    }
    std::span<const Neighbor> peers(AsId v) const {
        size_t base = offsets_[v] + customer_deg_[v];
        return {adj_.data() + base, adj_.data() + base + peer_deg_[v]};
    }
    std::span<const Neighbor> providers(AsId v) const {
        size_t base = offsets_[v] + customer_deg_[v] + peer_deg_[v];
        return {adj_.data() + base, adj_.data() + offsets_[v + 1]};
    }

    uint32_t customer_degree(AsId v) const { return customer_deg_[v]; }
    uint32_t peer_degree(AsId v) const { return peer_deg_[v]; }
    uint32_t provider_degree(AsId v) const {
        return static_cast<uint32_t>(offsets_[v + 1] - offsets_[v]) - customer_deg_[v] - peer_deg_[v];
    }
    uint32_t total_degree(AsId v) const {
        return static_cast<uint32_t>(offsets_[v + 1] - offsets_[v]);
    }
    bool is_stub(AsId v) const { return customer_deg_[v] == 0; }

    uint32_t original_asn(AsId v) const { return asn_of_[v]; }
    std::optional<AsId> lookup_asn(uint32_t asn) const {
        auto it = id_of_.find(asn);
        if (it == id_of_.end()) return std::nullopt;
        return it->second;
    }

    // Relationship of `b` as seen from `a`, if adjacent.
    std::optional<Rel> rel_between(AsId a, AsId b) const;

    // FNV-1a over the canonical edge list; stable across runs, used in manifests.
    uint64_t content_hash() const;

private:
    std::vector<size_t> offsets_;
    std::vector<Neighbor> adj_;
    std::vector<uint32_t> customer_deg_;
    std::vector<uint32_t> peer_deg_;
    std::vector<uint32_t> asn_of_;
    std::unordered_map<uint32_t, AsId> id_of_;
    size_t cp_edges_ = 0;
    size_t peer_edges_ = 0;
};

// Line-oriented `asn1|asn2|code` with code -1 (asn1 provider of asn2) or 0
// (peers); '#' starts a comment. Throws ParseError / ValidationError.
AsGraph parse_relationships(std::istream& in);
AsGraph parse_relationships_file(const std::string& path);

// Iteratively removes provider-free ASes of total degree < degree_threshold
// that are not in the seed, then renames to dense indices.
AsGraph preprocess(const AsGraph& g, const std::vector<uint32_t>& tier1_seed_asns,
                   uint32_t degree_threshold = 10);

struct IxpMembership {
    std::vector<std::pair<std::string, uint32_t>> records;  // (ixp id, member ASN)

    // `ixp_id,asn` per line, '#' comments. Duplicates tolerated.
    static IxpMembership parse(std::istream& in);
    static IxpMembership parse_file(const std::string& path);
};

struct IxpAugmentResult {
    AsGraph graph;
    size_t added_edges = 0;
    std::vector<uint32_t> skipped_asns;  // members that did not resolve
};

// Connects every co-located member pair not already adjacent with a peer edge.
IxpAugmentResult augment_with_ixp(const AsGraph& g, const IxpMembership& members);

enum class Tier : uint8_t { Tier1 = 0, Tier2, Tier3, CP, SmallCP, StubX, Stub, SMDG };
inline constexpr size_t kNumTiers = 8;
const char* tier_name(Tier t);

struct TierAssignment {
    std::vector<Tier> tier;                 // per dense AsId
    std::array<uint32_t, kNumTiers> counts{};
};

// The 17 content-provider ASNs used for the CP tier.
const std::vector<uint32_t>& default_cp_asns();

// Rules evaluated in order: Tier1 (seed, else provider-free top 13 by customer
// degree), Tier2/Tier3 (next 100/100 by customer degree among provider-having
// ASes), CP list, SmallCP (top 300 by peering degree), StubX, Stub, SMDG.
TierAssignment classify_tiers(const AsGraph& g,
                              const std::vector<uint32_t>& cp_asns = default_cp_asns(),
                              const std::vector<uint32_t>& tier1_seed_asns = {});

// Newline-delimited ASN list, '#' comments.
std::vector<uint32_t> parse_asn_list(std::istream& in);
std::vector<uint32_t> parse_asn_list_file(const std::string& path);

// Copy with one AS (and its edges) removed; dense ids are renumbered, so map
// through original ASNs when relating the two graphs.
AsGraph subgraph_without(const AsGraph& g, AsId removed);

}  // namespace bgpsim
