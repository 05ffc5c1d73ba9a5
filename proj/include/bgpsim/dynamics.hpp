#pragma once

#include <span>

#include "bgpsim/engine.hpp"

namespace bgpsim {

// Route comparison written directly from the policy step lists, independent
// of the engine's level keys; the oracle-equivalence tests lean on the two
// implementations being separate.
namespace dynamics {

struct CandScore {
    Rel type = Rel::Customer;
    uint32_t length = 0;
    bool secure = false;
};

// Strict "a preferred over b" before the tiebreak step.
bool preferred(PolicyModel model, const CandScore& a, const CandScore& b);
bool equivalent(PolicyModel model, const CandScore& a, const CandScore& b);

struct BestSet {
    bool any = false;
    CandScore score;
    std::vector<AsId> tied_next_hops;            // ascending
    std::vector<ChosenRoute> tied_routes;        // aligned with tied_next_hops
};

// All top candidates of v given its neighbors' current routes (export-legal,
// loop-free), before tiebreak.
BestSet best_response_set(const AsGraph& g, const Scenario& sc, const DynamicsState& state,
                          AsId v, PolicyModel model);

// Initial state: every route empty except the destination (empty route) and
// the attacker (pinned bogus route of length 1).
DynamicsState initial_state(const AsGraph& g, const Scenario& sc);

MixedResult run_best_response(const AsGraph& g, const Scenario& sc,
                              std::span<const PolicyModel> per_as_model, uint64_t activation_seed,
                              uint32_t round_cap = 0);

// True when no AS would change its route given the state (one-step audit).
bool is_stable(const AsGraph& g, const Scenario& sc, const DynamicsState& state,
               std::span<const PolicyModel> per_as_model);

}  // namespace dynamics
}  // namespace bgpsim
