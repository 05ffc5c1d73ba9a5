#pragma once

#include <iosfwd>

#include "bgpsim/topology.hpp"

namespace bgpsim {

// Internet-like random topology: a peered transit-free core, ISP tiers with
// preferentially attached customers, widely-peered content ASes, and a large
// stub edge. Every non-core AS has at least one provider. The content ASes
// take the well-known CP ASNs so tier classification picks them up; the core
// takes ASNs 1..tier1.
struct SyntheticConfig {
    uint32_t tier1 = 13;
    uint32_t large_isps = 120;
    uint32_t mid_isps = 600;
    uint32_t small_isps = 1200;
    uint32_t content = 17;
    uint32_t stubs = 10000;
    double stub_multihome2 = 0.50;  // fraction of stubs with a second provider
    double stub_multihome3 = 0.20;  // and a third
    double t1_stub_frac = 0.03;     // stubs homed to tier-1s only
    double stubx_frac = 0.06;       // stubs that also hold peer links
    double large_peer_prob = 0.18;
    double mid_peer_prob = 0.008;
    double small_peer_avg = 1.0;   // expected small-small peer links per regional ISP
    double small_mid_peer = 0.12;  // chance a regional ISP peers with a mid ISP
    double deep_chain = 0.25;      // chance mids/regionals buy from their own layer
    uint64_t seed = 1;
};

AsGraph generate_internet(const SyntheticConfig& cfg);

// Serial-1 style relationship lines, one `a|b|rel` per edge.
void write_relationships(const AsGraph& g, std::ostream& out);

// ASNs of the generated transit-free core, usable as the tier-1 seed.
std::vector<uint32_t> synthetic_tier1_asns(const SyntheticConfig& cfg);

}  // namespace bgpsim
