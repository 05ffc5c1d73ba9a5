#pragma once

#include <optional>
#include <span>
#include <vector>

#include "bgpsim/policy.hpp"
#include "bgpsim/topology.hpp"

namespace bgpsim {

// Deployment state. `secure` is the set S of full S*BGP adopters; `simplex`
// ASes originate signed announcements (count as secure destinations) but
// select routes as insecure ASes. The two sets are disjoint.
struct SecureConfig {
    std::vector<uint8_t> secure;
    std::vector<uint8_t> simplex;

    static SecureConfig none(size_t n) { return {std::vector<uint8_t>(n, 0), std::vector<uint8_t>(n, 0)}; }
    static SecureConfig all(size_t n) { return {std::vector<uint8_t>(n, 1), std::vector<uint8_t>(n, 0)}; }
    static SecureConfig of(size_t n, std::span<const AsId> secure_ids,
                           std::span<const AsId> simplex_ids = {});

    bool full(AsId v) const { return secure[v] != 0; }
    bool dest_secure(AsId v) const { return secure[v] != 0 || simplex[v] != 0; }
    size_t size() const { return secure.size(); }
};

struct Scenario {
    AsId destination = kNoAs;
    std::optional<AsId> attacker;
    SecureConfig secure;
};

// Throws ValidationError on attacker == destination, ids out of range,
// overlapping secure/simplex sets, or simplex ASes that have customers.
void validate_scenario(const AsGraph& g, const Scenario& sc);

// Where the tie-surviving best routes of an AS lead.
enum class Lead : uint8_t { Unreachable = 0, Destination = 1, Attacker = 2, Mixed = 3 };

// Containment of a marked AS in the tie-surviving routes.
enum class Tri : uint8_t { None, Some, All };

inline constexpr uint8_t kNoStage = 0xff;

// The unique stable routing state, one row per AS. Tie-surviving next hops
// share relationship type, length, and security; only where they lead can
// differ (that is the Mixed case).
struct RoutingOutcome {
    AsId destination = kNoAs;
    AsId attacker = kNoAs;  // kNoAs under normal conditions
    PolicyModel model;

    std::vector<uint8_t> lead_;      // Lead
    std::vector<uint8_t> rel_;       // Rel of first hop
    std::vector<uint8_t> secure_;    // route learned via S*BGP
    std::vector<uint8_t> stage_;     // Stage, kNoStage if unreachable
    std::vector<uint8_t> contains_;  // Tri, containment of the marked AS
    std::vector<uint32_t> length_;
    std::vector<AsId> canonical_;    // lowest-id tie next hop, kNoAs if unreachable
    std::vector<uint32_t> tie_offset_;
    std::vector<AsId> tie_pool_;

    size_t num_ases() const { return lead_.size(); }
    Lead lead(AsId v) const { return static_cast<Lead>(lead_[v]); }
    Rel rel_type(AsId v) const { return static_cast<Rel>(rel_[v]); }
    bool route_secure(AsId v) const { return secure_[v] != 0; }
    uint32_t length(AsId v) const { return length_[v]; }
    AsId canonical_next_hop(AsId v) const { return canonical_[v]; }
    Tri contains_mark(AsId v) const { return static_cast<Tri>(contains_[v]); }
    Stage stage(AsId v) const { return static_cast<Stage>(stage_[v]); }
    bool reachable(AsId v) const { return lead(v) != Lead::Unreachable; }
    std::span<const AsId> next_hops(AsId v) const {
        return {tie_pool_.data() + tie_offset_[v], tie_pool_.data() + tie_offset_[v + 1]};
    }
};

// Computes the stable outcome by the multi-stage fix-routes BFS, realized as
// label setting in the model's total preference order. Pure function of its
// inputs; safe to call concurrently. `mark` enables containment tracking of
// one AS (used to find normal-condition routes passing through an attacker).
void compute_outcome_into(const AsGraph& g, const Scenario& sc, PolicyModel model,
                          RoutingOutcome& out, std::optional<AsId> mark = std::nullopt);

RoutingOutcome compute_outcome(const AsGraph& g, const Scenario& sc, PolicyModel model,
                               std::optional<AsId> mark = std::nullopt);

// Canonical route of v under the deterministic tiebreak: next hops followed
// until the destination (passing the attacker first on bogus routes). Empty
// when unreachable.
std::vector<AsId> canonical_path(const RoutingOutcome& out, AsId v);

// One believed route in the asynchronous best-response state.
struct ChosenRoute {
    std::vector<AsId> path;  // next hop first, destination last
    Rel type = Rel::Customer;
    bool secure = false;
    bool exists = false;

    bool operator==(const ChosenRoute&) const = default;
    uint32_t route_length() const { return static_cast<uint32_t>(path.size()); }
};

struct DynamicsState {
    std::vector<ChosenRoute> routes;
    uint64_t hash() const;
    bool operator==(const DynamicsState&) const = default;
};

struct MixedResult {
    DynamicsState state;
    bool converged = false;
    uint32_t rounds = 0;
};

// Asynchronous best response under a seeded activation order, for
// heterogeneous per-AS security placement. Runs until a full quiet round, a
// repeated global state, or the round cap (default 10*|V|).
MixedResult compute_outcome_mixed(const AsGraph& g, const Scenario& sc,
                                  std::span<const PolicyModel> per_as_model,
                                  uint64_t activation_seed, uint32_t round_cap = 0);

}  // namespace bgpsim
