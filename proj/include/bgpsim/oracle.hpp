#pragma once

#include <vector>

#include "bgpsim/dynamics.hpp"
#include "bgpsim/partitions.hpp"

namespace bgpsim {
namespace oracle {

// Asynchronous best-response dynamics from empty routes until a fixed point.
// With a homogeneous model the result is activation-order independent; a
// nonconvergence report is only possible with mixed models.
MixedResult best_response_fixed_point(const AsGraph& g, const Scenario& sc, PolicyModel model,
                                      uint64_t activation_seed, size_t size_cap = 16);

// Per-source realizable leads at a fixed point: bit 1 = some tiebreak chain
// reaches d, bit 2 = some chain reaches m. Tie sets at the fixed point are
// tiebreak-invariant, so stable states are exactly the per-AS choices from
// them; the bits follow the choice DAG.
std::vector<uint8_t> realizable_leads(const AsGraph& g, const Scenario& sc,
                                      const DynamicsState& state, PolicyModel model);

// Ground-truth labels by enumerating every deployment S (subsets of V minus
// the attacker) and every tiebreak completion. Immune = happy for all (S,TB);
// Doomed = never happy; sources that never reach either root are Unreachable.
std::vector<PLabel> enumerate_deployments(const AsGraph& g, AsId m, AsId d, PolicyModel model,
                                          size_t size_cap = 12);

struct MaxKResult {
    std::vector<AsId> best_secure;
    // Happy count under the always-unhappy tiebreak, destination included.
    uint32_t happy = 0;
};

// Exact optimum by enumerating all size-k secure sets in lexicographic order
// (first maximum wins).
MaxKResult max_k_security_bruteforce(const AsGraph& g, AsId m, AsId d, uint32_t k,
                                     PolicyModel model, size_t size_cap = 14);

}  // namespace oracle
}  // namespace bgpsim
