#include <doctest.h>

#include "bgpsim/policy.hpp"

using namespace bgpsim;

TEST_CASE("stage schedules per model") {
    using S = Stage;
    CHECK(stage_schedule({SecurityRank::SecuritySecond, 0}) ==
          std::vector<S>{S::FSCR, S::FCR, S::FPeeR, S::FSPrvR, S::FPrvR});
    CHECK(stage_schedule({SecurityRank::InsecureOnly, 0}) ==
          std::vector<S>{S::FCR, S::FPeeR, S::FPrvR});
    CHECK(stage_schedule({SecurityRank::SecurityThird, 0}) ==
          std::vector<S>{S::FCR, S::FPeeR, S::FPrvR});
    CHECK(stage_schedule({SecurityRank::SecurityFirst, 0}) ==
          std::vector<S>{S::FSCR, S::FSPeeR, S::FSPrvR, S::FCR, S::FPeeR, S::FPrvR});
}

namespace {
uint64_t key(SecurityRank r, Rel t, uint32_t len, bool sec, uint32_t lpk = 0) {
    return level_key({r, lpk}, t, len, sec);
}
}  // namespace

TEST_CASE("level keys order candidates like the decision process") {
    SUBCASE("standard LP, security third") {
        auto r = SecurityRank::SecurityThird;
        // customer beats peer beats provider regardless of length or security
        CHECK(key(r, Rel::Customer, 9, false) < key(r, Rel::Peer, 1, true));
        CHECK(key(r, Rel::Peer, 9, false) < key(r, Rel::Provider, 1, true));
        // shorter first within a class, secure only breaks exact ties
        CHECK(key(r, Rel::Customer, 2, false) < key(r, Rel::Customer, 3, true));
        CHECK(key(r, Rel::Customer, 2, true) < key(r, Rel::Customer, 2, false));
    }
    SUBCASE("security second ranks secure above length inside a class") {
        auto r = SecurityRank::SecuritySecond;
        CHECK(key(r, Rel::Customer, 9, true) < key(r, Rel::Customer, 2, false));
        CHECK(key(r, Rel::Customer, 9, false) < key(r, Rel::Peer, 1, true));
        CHECK(key(r, Rel::Peer, 9, true) < key(r, Rel::Peer, 2, false));
    }
    SUBCASE("security first ranks secure above everything") {
        auto r = SecurityRank::SecurityFirst;
        CHECK(key(r, Rel::Provider, 9, true) < key(r, Rel::Customer, 1, false));
        CHECK(key(r, Rel::Customer, 2, true) < key(r, Rel::Peer, 2, true));
    }
    SUBCASE("LP(k) interleaves customer and peer classes by length") {
        auto r = SecurityRank::SecurityThird;
        CHECK(key(r, Rel::Peer, 1, false, 2) < key(r, Rel::Customer, 2, false, 2));
        CHECK(key(r, Rel::Customer, 2, false, 2) < key(r, Rel::Peer, 2, false, 2));
        CHECK(key(r, Rel::Peer, 2, false, 2) < key(r, Rel::Customer, 3, false, 2));
        // beyond k: all long customers precede all long peers
        CHECK(key(r, Rel::Customer, 9, false, 2) < key(r, Rel::Peer, 3, false, 2));
        CHECK(key(r, Rel::Provider, 1, false, 2) > key(r, Rel::Peer, 9, false, 2));
    }
}

TEST_CASE("LP(k) with huge k matches the collapsed preference list") {
    // Collapsed: prefer non-provider, then shorter, then customer over peer,
    // with the prefer-secure step at the model's position.
    auto collapsed = [](SecurityRank rank, Rel t, uint32_t len, bool sec) -> uint64_t {
        uint64_t provider = t == Rel::Provider ? 1 : 0;
        uint64_t peer = t == Rel::Peer ? 1 : 0;
        uint64_t ins = sec ? 0 : 1;
        switch (rank) {
            case SecurityRank::SecurityFirst:
                return (ins << 40) | (provider << 36) | (uint64_t(len) << 4) | (peer << 1);
            case SecurityRank::SecuritySecond:
                if (provider) return (1ull << 40) | (ins << 36) | (uint64_t(len) << 4);
                return (uint64_t(len) << 4) | (peer << 2) | (ins << 0);
            case SecurityRank::SecurityThird:
                if (provider) return (1ull << 40) | (uint64_t(len) << 4) | (ins << 0);
                return (uint64_t(len) << 4) | (peer << 2) | (ins << 0);
            case SecurityRank::InsecureOnly:
                if (provider) return (1ull << 40) | (uint64_t(len) << 4);
                return (uint64_t(len) << 4) | (peer << 2);
        }
        return 0ull;
    };

    for (SecurityRank rank : {SecurityRank::InsecureOnly, SecurityRank::SecurityFirst,
                              SecurityRank::SecuritySecond, SecurityRank::SecurityThird}) {
        std::vector<std::tuple<Rel, uint32_t, bool>> cands;
        for (Rel t : {Rel::Customer, Rel::Peer, Rel::Provider})
            for (uint32_t len = 1; len <= 10; len++)
                for (bool sec : {false, true}) cands.push_back({t, len, sec});
        for (auto& a : cands) {
            for (auto& b : cands) {
                auto [ta, la, sa] = a;
                auto [tb, lb, sb] = b;
                bool lpk_less = key(rank, ta, la, sa, 1000) < key(rank, tb, lb, sb, 1000);
                bool col_less = collapsed(rank, ta, la, sa) < collapsed(rank, tb, lb, sb);
                CHECK(lpk_less == col_less);
            }
        }
    }
}
