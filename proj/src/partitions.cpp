#include "bgpsim/partitions.hpp"

#include <omp.h>

#include <algorithm>
#include <map>

namespace bgpsim {

const char* plabel_name(PLabel l) {
    switch (l) {
        case PLabel::Doomed: return "doomed";
        case PLabel::Immune: return "immune";
        case PLabel::Protectable: return "protectable";
        case PLabel::Unreachable: return "unreachable";
    }
    return "?";
}

namespace {

constexpr uint8_t kLeadD = 1, kLeadA = 2;

PLabel label_from_bits(uint8_t bits) {
    if (bits == kLeadD) return PLabel::Immune;
    if (bits == kLeadA) return PLabel::Doomed;
    if (bits == (kLeadD | kLeadA)) return PLabel::Protectable;
    return PLabel::Unreachable;
}

// Where all surviving perceivable routes of s's best type lead: the union of
// the leads of every neighbor whose fixed route s could extend at that type.
// This is the fixing-time bookkeeping of the fix-routes computation; it can
// call a source protectable whose fate is actually settled (route length
// still decides among equally-preferred insecure routes), which keeps the
// immune/doomed fractions valid as metric bounds.
uint8_t type_wide_lead_bits(const AsGraph& g, const RoutingOutcome& out, AsId s) {
    Rel t = out.rel_type(s);
    uint8_t bits = 0;
    auto lead_bits_of = [&](AsId w) -> uint8_t { return static_cast<uint8_t>(out.lead(w)); };
    auto eligible_child = [&](AsId w) {
        // w's fixed route must be exportable upward: customer-learned routes
        // only, except the two origins which announce to everyone.
        if (w == out.destination || w == out.attacker) return true;
        return out.reachable(w) && out.rel_type(w) == Rel::Customer;
    };
    switch (t) {
        case Rel::Customer:
            for (const Neighbor& nb : g.customers(s))
                if (eligible_child(nb.id)) bits |= lead_bits_of(nb.id);
            break;
        case Rel::Peer:
            for (const Neighbor& nb : g.peers(s))
                if (eligible_child(nb.id)) bits |= lead_bits_of(nb.id);
            break;
        case Rel::Provider:
            // Providers export whatever they use to customers.
            for (const Neighbor& nb : g.providers(s))
                if (nb.id == out.destination || nb.id == out.attacker || out.reachable(nb.id))
                    bits |= lead_bits_of(nb.id);
            break;
    }
    return bits;
}

}  // namespace

PartitionReport partition(const AsGraph& g, AsId m, AsId d, PolicyModel model, bool first_exact) {
    if (m == d) throw ValidationError("attacker equals destination");
    if (model.rank == SecurityRank::InsecureOnly)
        throw ValidationError("partition needs a security model");

    const size_t n = g.num_ases();
    Scenario sc{d, m, SecureConfig::none(n)};
    validate_scenario(g, sc);
    // With S empty every rank reduces to the insecure policy; the label rules
    // read this one outcome.
    PolicyModel base{SecurityRank::InsecureOnly, model.lpk};
    RoutingOutcome out = compute_outcome(g, sc, base);

    PartitionReport rep;
    rep.attacker = m;
    rep.destination = d;
    rep.labels.assign(n, PLabel::Unreachable);
    rep.surely_happy.assign(n, 0);

    // Exact-mode doomed test: no perceivable route to d once m is gone.
    std::vector<uint8_t> doomed_exact;
    if (first_exact && model.rank == SecurityRank::SecurityFirst) {
        doomed_exact.assign(n, 0);
        AsGraph gm = subgraph_without(g, m);
        if (auto dm = gm.lookup_asn(g.original_asn(d))) {
            Scenario normal{*dm, std::nullopt, SecureConfig::none(gm.num_ases())};
            RoutingOutcome nout = compute_outcome(gm, normal, base);
            for (AsId v = 0; v < n; v++) {
                if (v == m || v == d) continue;
                auto vm = gm.lookup_asn(g.original_asn(v));
                doomed_exact[v] = (!vm || !nout.reachable(*vm)) ? 1 : 0;
            }
        } else {
            for (AsId v = 0; v < n; v++) doomed_exact[v] = 1;  // d only reachable through m
        }
    }

    for (AsId s = 0; s < n; s++) {
        if (s == m || s == d) continue;
        if (!out.reachable(s)) {
            rep.labels[s] = PLabel::Unreachable;
            rep.unreachable++;
            continue;
        }
        PLabel label = PLabel::Protectable;
        switch (model.rank) {
            case SecurityRank::SecurityThird:
                label = label_from_bits(static_cast<uint8_t>(out.lead(s)));
                break;
            case SecurityRank::SecuritySecond:
                label = label_from_bits(type_wide_lead_bits(g, out, s));
                break;
            case SecurityRank::SecurityFirst:
                if (first_exact) {
                    auto nbs = g.neighbors(s);
                    bool sole_neighbor_is_d = nbs.size() == 1 && nbs[0].id == d;
                    if (doomed_exact[s])
                        label = PLabel::Doomed;
                    else if (sole_neighbor_is_d)
                        label = PLabel::Immune;
                    else
                        label = PLabel::Protectable;
                } else {
                    label = PLabel::Protectable;
                }
                break;
            case SecurityRank::InsecureOnly: break;
        }
        rep.labels[s] = label;
        switch (label) {
            case PLabel::Doomed: rep.doomed++; break;
            case PLabel::Immune: rep.immune++; break;
            case PLabel::Protectable: rep.protectable++; break;
            case PLabel::Unreachable: rep.unreachable++; break;
        }
        if (out.lead(s) == Lead::Destination) {
            rep.baseline_happy_lower++;
            rep.surely_happy[s] = 1;
        }
        if (out.lead(s) != Lead::Attacker && out.reachable(s)) rep.baseline_happy_upper++;
    }
    return rep;
}

std::vector<PartitionSweepRow> partition_sweep(const AsGraph& g, const std::vector<AsId>& attackers,
                                               const std::vector<AsId>& destinations,
                                               PolicyModel model, GroupBy group_by,
                                               const TierAssignment* tiers, int jobs) {
    if ((group_by == GroupBy::DestinationTier || group_by == GroupBy::AttackerTier ||
         group_by == GroupBy::SourceTier) &&
        tiers == nullptr)
        throw ValidationError("tier grouping requires a tier assignment");

    std::vector<std::pair<AsId, AsId>> pairs;
    for (AsId m : attackers)
        for (AsId d : destinations)
            if (m != d) pairs.emplace_back(m, d);

    // Row key per pair (or per source tier). Counts land in per-pair slots,
    // merged in pair order afterward, so thread schedule cannot change output.
    struct Slot {
        std::array<uint64_t, kNumTiers> doomed{}, immune{}, protectable{}, unreachable{},
            denominator{}, baseline{}, full_denominator{};
    };
    std::vector<Slot> slots(pairs.size());

    auto run_pair = [&](size_t i) {
        auto [m, d] = pairs[i];
        PartitionReport rep = partition(g, m, d, model);
        Slot& slot = slots[i];
        for (AsId s = 0; s < g.num_ases(); s++) {
            if (s == m || s == d) continue;
            size_t bucket = 0;
            if (group_by == GroupBy::SourceTier) bucket = static_cast<size_t>(tiers->tier[s]);
            slot.full_denominator[bucket]++;
            if (rep.surely_happy[s]) slot.baseline[bucket]++;
            switch (rep.labels[s]) {
                case PLabel::Doomed: slot.doomed[bucket]++; slot.denominator[bucket]++; break;
                case PLabel::Immune: slot.immune[bucket]++; slot.denominator[bucket]++; break;
                case PLabel::Protectable:
                    slot.protectable[bucket]++;
                    slot.denominator[bucket]++;
                    break;
                case PLabel::Unreachable: slot.unreachable[bucket]++; break;
            }
        }
    };

    if (jobs <= 1) {
        for (size_t i = 0; i < pairs.size(); i++) run_pair(i);
    } else {
#pragma omp parallel for schedule(dynamic, 4) num_threads(jobs)
        for (size_t i = 0; i < pairs.size(); i++) run_pair(i);
    }

    // Reduce in deterministic pair order.
    std::map<std::string, PartitionSweepRow> rows;
    auto row_of = [&](const std::string& key) -> PartitionSweepRow& {
        auto& r = rows[key];
        r.group = key;
        return r;
    };
    for (size_t i = 0; i < pairs.size(); i++) {
        auto [m, d] = pairs[i];
        const Slot& slot = slots[i];
        if (group_by == GroupBy::SourceTier) {
            for (size_t t = 0; t < kNumTiers; t++) {
                PartitionSweepRow& r = row_of(tier_name(static_cast<Tier>(t)));
                r.pairs++;
                r.doomed += slot.doomed[t];
                r.immune += slot.immune[t];
                r.protectable += slot.protectable[t];
                r.unreachable += slot.unreachable[t];
                r.denominator += slot.denominator[t];
                r.baseline_happy_lower += slot.baseline[t];
                r.full_denominator += slot.full_denominator[t];
            }
        } else {
            std::string key = "all";
            if (group_by == GroupBy::DestinationTier)
                key = tier_name(tiers->tier[d]);
            else if (group_by == GroupBy::AttackerTier)
                key = tier_name(tiers->tier[m]);
            PartitionSweepRow& r = row_of(key);
            r.pairs++;
            r.doomed += slot.doomed[0];
            r.immune += slot.immune[0];
            r.protectable += slot.protectable[0];
            r.unreachable += slot.unreachable[0];
            r.denominator += slot.denominator[0];
            r.baseline_happy_lower += slot.baseline[0];
            r.full_denominator += slot.full_denominator[0];
        }
    }

    std::vector<PartitionSweepRow> out;
    out.reserve(rows.size());
    for (auto& [k, r] : rows) out.push_back(std::move(r));
    return out;
}

}  // namespace bgpsim
