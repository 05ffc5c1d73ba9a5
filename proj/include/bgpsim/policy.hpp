#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bgpsim/topology.hpp"

namespace bgpsim {

// Placement of the prefer-secure step relative to local preference, path
// length, and tiebreak. InsecureOnly ignores the secure set entirely.
enum class SecurityRank : uint8_t {
    InsecureOnly = 0,
    SecurityFirst = 1,
    SecuritySecond = 2,
    SecurityThird = 3,
};

struct PolicyModel {
    SecurityRank rank = SecurityRank::SecurityThird;
    // 0 = standard local preference (customer > peer > provider).
    // k > 0 interleaves customer/peer classes by length up to k.
    uint32_t lpk = 0;

    bool operator==(const PolicyModel&) const = default;
};

const char* security_rank_name(SecurityRank r);

enum class Stage : uint8_t { FSCR = 0, FSPeeR, FSPrvR, FCR, FPeeR, FPrvR, Origin };
const char* stage_name(Stage s);

// Subroutine order of the fix-routes computation for a model.
std::vector<Stage> stage_schedule(PolicyModel model);

// Local-preference block of a (type, length) candidate. Standard LP collapses
// to blocks {customer, peer, provider}; LP(k) interleaves fixed-length
// customer/peer blocks up to k.
uint32_t lp_block(Rel type, uint32_t length, uint32_t lpk);

// Total preference order over route candidates: smaller key = preferred.
// Encodes (secure?, lp block, length) in the arrangement the model dictates;
// ties at equal key are exactly the routes left to the tiebreak step.
uint64_t level_key(PolicyModel model, Rel type, uint32_t length, bool secure);

}  // namespace bgpsim
