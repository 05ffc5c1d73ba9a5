#include "bgpsim/policy.hpp"

#include <cassert>

namespace bgpsim {

const char* security_rank_name(SecurityRank r) {
    switch (r) {
        case SecurityRank::InsecureOnly: return "insecure";
        case SecurityRank::SecurityFirst: return "first";
        case SecurityRank::SecuritySecond: return "second";
        case SecurityRank::SecurityThird: return "third";
    }
    return "?";
}

const char* stage_name(Stage s) {
    switch (s) {
        case Stage::FSCR: return "FSCR";
        case Stage::FSPeeR: return "FSPeeR";
        case Stage::FSPrvR: return "FSPrvR";
        case Stage::FCR: return "FCR";
        case Stage::FPeeR: return "FPeeR";
        case Stage::FPrvR: return "FPrvR";
        case Stage::Origin: return "origin";
    }
    return "?";
}

std::vector<Stage> stage_schedule(PolicyModel model) {
    switch (model.rank) {
        case SecurityRank::InsecureOnly:
        case SecurityRank::SecurityThird:
            return {Stage::FCR, Stage::FPeeR, Stage::FPrvR};
        case SecurityRank::SecuritySecond:
            return {Stage::FSCR, Stage::FCR, Stage::FPeeR, Stage::FSPrvR, Stage::FPrvR};
        case SecurityRank::SecurityFirst:
            return {Stage::FSCR, Stage::FSPeeR, Stage::FSPrvR,
                    Stage::FCR,  Stage::FPeeR,  Stage::FPrvR};
    }
    return {};
}

uint32_t lp_block(Rel type, uint32_t length, uint32_t lpk) {
    // Blocks for LP(k): C1 P1 C2 P2 ... Ck Pk C>k P>k provider.
    // lpk == 0 degenerates to {customer, peer, provider}.
    uint32_t k = lpk > 60000 ? 60000 : lpk;
    switch (type) {
        case Rel::Customer: return length <= k ? 2 * (length - 1) : 2 * k;
        case Rel::Peer: return length <= k ? 2 * (length - 1) + 1 : 2 * k + 1;
        case Rel::Provider: return 2 * k + 2;
    }
    return 0;
}

uint64_t level_key(PolicyModel model, Rel type, uint32_t length, bool secure) {
    assert(length > 0 && length < (1u << 24));
    uint64_t b = lp_block(type, length, model.lpk);
    uint64_t l = length;
    uint64_t ins = secure ? 0 : 1;
    switch (model.rank) {
        case SecurityRank::InsecureOnly:
            return (b << 25) | (l << 1);
        case SecurityRank::SecurityFirst:
            return (ins << 44) | (b << 25) | (l << 1);
        case SecurityRank::SecuritySecond:
            return (b << 26) | (ins << 25) | (l << 1);
        case SecurityRank::SecurityThird:
            return (b << 26) | (l << 2) | (ins << 0);
    }
    return 0;
}

}  // namespace bgpsim
