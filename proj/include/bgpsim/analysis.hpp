#pragma once

#include <string>
#include <vector>

#include "bgpsim/engine.hpp"
#include "bgpsim/topology.hpp"

namespace bgpsim {

struct HappyBounds {
    uint32_t lower = 0;        // sources surely routing to d (every tie route legit)
    uint32_t upper = 0;        // lower plus tie-dependent sources
    uint32_t denominator = 0;  // |V| - 2
};

// Requires an attack outcome (attacker present).
HappyBounds happy_bounds(const RoutingOutcome& out);

struct MetricReport {
    double h_lower = 0, h_upper = 0;
    double baseline_lower = 0, baseline_upper = 0;  // same pairs at S = empty
    double delta_lower = 0, delta_upper = 0;
    // Standard error of the per-pair happy-lower fraction; the sampling
    // confidence figure for sampled (m, d) sets.
    double stderr_lower = 0;
    uint64_t pair_count = 0;
};

// Average happy fraction over all (m, d) pairs with m != d; integer counts
// are accumulated per pair and divided once, so parallel runs reduce
// identically to the serial reference.
MetricReport metric(const AsGraph& g, const std::vector<AsId>& attackers,
                    const std::vector<AsId>& destinations, const SecureConfig& secure,
                    PolicyModel model, int jobs = 1);

struct DowngradeReport {
    uint64_t secure_normal = 0;    // sources with a secure route under normal conditions
    uint64_t excluded_via_m = 0;   // of those, every normal tie route passes m (Theorem-2 caveat)
    uint64_t downgraded = 0;       // insecure under attack
    uint64_t wasted = 0;           // retained secure, surely happy already at S = empty
    uint64_t protected_count = 0;  // retained secure, not surely happy at S = empty
};

// Compares the normal-conditions outcome against the attack outcome at the
// same deployment, two engine runs plus the S = empty attack baseline.
DowngradeReport downgrade_report(const AsGraph& g, AsId m, AsId d, const SecureConfig& secure,
                                 PolicyModel model);

struct CollateralReport {
    // Determinate flips among sources outside the secure set (benefits) and
    // all sources (damages); tie-dependent endpoints only move the bounds.
    std::vector<AsId> benefit_sources;  // surely unhappy at empty, surely happy at S
    std::vector<AsId> damage_sources;   // surely happy at empty, surely unhappy at S
    uint64_t benefits_lower = 0, benefits_upper = 0;
    uint64_t damages_lower = 0, damages_upper = 0;
};

CollateralReport collateral_report(const AsGraph& g, AsId m, AsId d, const SecureConfig& secure,
                                   PolicyModel model);

// Figure-9-style decomposition, counts over (m, d, source) triples. The
// lower-bound delta obeys the exact identity
//   delta_lower = newly_protected + insecure_gains - losses
// with insecure_gains in [benefits_lower, benefits_upper] and
// losses == damages_upper.
struct RootCause {
    uint64_t pair_count = 0;
    uint64_t denom = 0;  // pair_count * (|V|-2)
    // normal-conditions secure routes, split by what the attack does to them
    uint64_t secure_normal = 0, excluded_via_m = 0;
    uint64_t lost_downgrade = 0, wasted = 0, protected_secure = 0;
    // metric-delta decomposition
    uint64_t newly_protected = 0;  // secure route under attack, not surely happy at S = empty
    uint64_t insecure_gains = 0;   // sources without a secure attack route that became surely happy
    uint64_t losses = 0;           // surely happy at S = empty, not surely happy at S
    uint64_t benefits_lower = 0, benefits_upper = 0;
    uint64_t damages_lower = 0, damages_upper = 0;
    int64_t delta_lower_count = 0;  // observed surely-happy difference
    double delta_lower = 0;
};

RootCause root_cause(const AsGraph& g, const std::vector<AsId>& attackers,
                     const std::vector<AsId>& destinations, const SecureConfig& secure,
                     PolicyModel model, int jobs = 1);

enum class RolloutPlan : uint8_t { Tier1and2, Tier2only, NonStubsOnly, Tier1StubsCP };
const char* rollout_plan_name(RolloutPlan p);

struct RolloutOptions {
    bool simplex_stubs = false;   // stubs in S run simplex instead of full S*BGP
    bool strict_stubs = false;    // stubs join only when all providers are secured
    uint32_t max_secure_dests = 0;  // sample cap for per-destination deltas, 0 = all
    uint64_t sample_seed = 1;
    int jobs = 1;
};

struct PerDestDelta {
    AsId dest = kNoAs;
    double delta_lower = 0, delta_upper = 0;
    double h_lower = 0, h_upper = 0;  // H_{M,d}(S)
};

struct RolloutStep {
    std::string name;
    uint64_t secure_size = 0;
    uint64_t nonstub_secure = 0;
    MetricReport overall;                    // over (M, D)
    MetricReport secure_dest;                // over sampled destinations in S
    std::vector<PerDestDelta> dest_deltas;   // sorted by delta_lower ascending
    std::vector<AsId> secure_set;
};

// Deployment schedules from the tier structure. Tier1and2 secures the 13
// Tier 1s plus {13, 37, 100} Tier 2s and their stubs; Tier2only secures
// {13, 26, 50, 100} Tier 2s and stubs; NonStubsOnly secures every non-stub;
// Tier1StubsCP secures the Tier 1s, their stubs, and the content providers.
std::vector<RolloutStep> rollout(const AsGraph& g, const TierAssignment& tiers, RolloutPlan plan,
                                 const std::vector<AsId>& attackers,
                                 const std::vector<AsId>& destinations, PolicyModel model,
                                 const RolloutOptions& opts = {});

// Selector helpers shared by the CLI and tests.
std::vector<AsId> all_ases(const AsGraph& g);
std::vector<AsId> nonstub_ases(const AsGraph& g);  // M' = V minus {Stub, StubX}
std::vector<AsId> sample_ases(const AsGraph& g, size_t count, uint64_t seed);

}  // namespace bgpsim
