#include "bgpsim/analysis.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>

#include "bgpsim/rng.hpp"

namespace bgpsim {

HappyBounds happy_bounds(const RoutingOutcome& out) {
    if (out.attacker == kNoAs) throw ValidationError("happy_bounds needs an attack outcome");
    HappyBounds hb;
    hb.denominator = static_cast<uint32_t>(out.num_ases()) - 2;
    for (AsId s = 0; s < out.num_ases(); s++) {
        if (s == out.destination || s == out.attacker) continue;
        if (out.lead(s) == Lead::Destination) hb.lower++;
        if (out.lead(s) == Lead::Destination || out.lead(s) == Lead::Mixed) hb.upper++;
    }
    return hb;
}

namespace {

std::vector<std::pair<AsId, AsId>> make_pairs(const std::vector<AsId>& attackers,
                                              const std::vector<AsId>& destinations) {
    std::vector<std::pair<AsId, AsId>> pairs;
    pairs.reserve(attackers.size() * destinations.size());
    for (AsId d : destinations)
        for (AsId m : attackers)
            if (m != d) pairs.emplace_back(m, d);
    return pairs;
}

template <typename Fn>
void sweep(size_t count, int jobs, Fn&& fn) {
    if (jobs <= 1) {
        // Serial reference path; the parallel kernel must reduce identically.
        for (size_t i = 0; i < count; i++) fn(i);
    } else {
#pragma omp parallel for schedule(dynamic, 4) num_threads(jobs)
        for (size_t i = 0; i < count; i++) fn(i);
    }
}

MetricReport metric_over_pairs(const AsGraph& g, const std::vector<std::pair<AsId, AsId>>& pairs,
                               const SecureConfig& secure, PolicyModel model, int jobs) {
    struct Slot {
        uint32_t lo = 0, up = 0, blo = 0, bup = 0;
    };
    std::vector<Slot> slots(pairs.size());
    const SecureConfig empty = SecureConfig::none(g.num_ases());
    sweep(pairs.size(), jobs, [&](size_t i) {
        auto [m, d] = pairs[i];
        thread_local RoutingOutcome out;
        compute_outcome_into(g, {d, m, secure}, model, out);
        HappyBounds hb = happy_bounds(out);
        compute_outcome_into(g, {d, m, empty}, model, out);
        HappyBounds base = happy_bounds(out);
        slots[i] = {hb.lower, hb.upper, base.lower, base.upper};
    });
    uint64_t lo = 0, up = 0, blo = 0, bup = 0;
    for (const Slot& s : slots) {
        lo += s.lo;
        up += s.up;
        blo += s.blo;
        bup += s.bup;
    }
    double per_pair = double(g.num_ases() - 2);
    double denom = double(pairs.size()) * per_pair;
    MetricReport r;
    r.pair_count = pairs.size();
    r.h_lower = lo / denom;
    r.h_upper = up / denom;
    r.baseline_lower = blo / denom;
    r.baseline_upper = bup / denom;
    r.delta_lower = r.h_lower - r.baseline_lower;
    r.delta_upper = r.h_upper - r.baseline_upper;
    if (pairs.size() > 1) {
        double ss = 0;
        for (const Slot& s : slots) {
            double f = s.lo / per_pair - r.h_lower;
            ss += f * f;
        }
        r.stderr_lower = std::sqrt(ss / double(pairs.size() - 1) / double(pairs.size()));
    }
    return r;
}

}  // namespace

MetricReport metric(const AsGraph& g, const std::vector<AsId>& attackers,
                    const std::vector<AsId>& destinations, const SecureConfig& secure,
                    PolicyModel model, int jobs) {
    if (attackers.empty() || destinations.empty())
        throw ValidationError("attacker and destination sets must be nonempty");
    auto pairs = make_pairs(attackers, destinations);
    if (pairs.empty()) throw ValidationError("no valid (m,d) pairs");
    return metric_over_pairs(g, pairs, secure, model, jobs);
}

namespace {

// A tie-dependent source can only flip between two runs if its tie situation
// actually changed; with the same tiebreak rule at both ends, identical tie
// sets resolve identically.
bool same_tie_state(const RoutingOutcome& a, const RoutingOutcome& b, AsId s) {
    if (a.lead(s) != b.lead(s) || a.length(s) != b.length(s)) return false;
    if (a.rel_type(s) != b.rel_type(s) || a.route_secure(s) != b.route_secure(s)) return false;
    auto ta = a.next_hops(s), tb = b.next_hops(s);
    return std::equal(ta.begin(), ta.end(), tb.begin(), tb.end());
}

// Shared per-pair downgrade/collateral classification, reused by the
// aggregate root-cause sweep.
struct PairBreakdown {
    DowngradeReport down;
    uint64_t newly_protected = 0, insecure_gains = 0, losses = 0;
    uint64_t benefits_lower = 0, benefits_upper = 0;
    uint64_t damages_lower = 0, damages_upper = 0;
    int32_t happy_lower_s = 0, happy_lower_empty = 0;
};

PairBreakdown pair_breakdown(const AsGraph& g, AsId m, AsId d, const SecureConfig& secure,
                             PolicyModel model, RoutingOutcome& normal, RoutingOutcome& attack,
                             RoutingOutcome& attack0) {
    compute_outcome_into(g, {d, std::nullopt, secure}, model, normal, m);
    compute_outcome_into(g, {d, m, secure}, model, attack);
    compute_outcome_into(g, {d, m, SecureConfig::none(g.num_ases())},
                         PolicyModel{SecurityRank::InsecureOnly, model.lpk}, attack0);

    PairBreakdown pb;
    for (AsId s = 0; s < g.num_ases(); s++) {
        if (s == m || s == d) continue;
        bool sec_normal = normal.route_secure(s);
        bool sec_attack = attack.route_secure(s);
        bool happy0 = attack0.lead(s) == Lead::Destination;
        bool happyS = attack.lead(s) == Lead::Destination;

        if (sec_normal) {
            pb.down.secure_normal++;
            if (normal.contains_mark(s) == Tri::All) {
                pb.down.excluded_via_m++;
            } else if (!sec_attack) {
                pb.down.downgraded++;
            } else if (happy0) {
                pb.down.wasted++;
            } else {
                pb.down.protected_count++;
            }
        }

        if (happyS) pb.happy_lower_s++;
        if (happy0) pb.happy_lower_empty++;
        if (sec_attack && !happy0) pb.newly_protected++;
        if (!sec_attack && !happy0 && happyS) pb.insecure_gains++;
        if (happy0 && !happyS) pb.losses++;

        // Bound-style collateral accounting over sources without a secure
        // attack route; the exact insecure_gains sits inside these bounds.
        if (!sec_attack) {
            bool certainly_unhappy0 =
                attack0.lead(s) == Lead::Attacker || attack0.lead(s) == Lead::Unreachable;
            bool possibly_happyS = happyS || (attack.lead(s) == Lead::Mixed &&
                                              !same_tie_state(attack0, attack, s));
            if (certainly_unhappy0 && happyS) pb.benefits_lower++;
            if (!happy0 && possibly_happyS) pb.benefits_upper++;
        }
        bool possibly_unhappyS = attack.lead(s) != Lead::Destination;
        if (happy0 && attack.lead(s) == Lead::Attacker) pb.damages_lower++;
        if (happy0 && possibly_unhappyS) pb.damages_upper++;
    }
    return pb;
}

}  // namespace

DowngradeReport downgrade_report(const AsGraph& g, AsId m, AsId d, const SecureConfig& secure,
                                 PolicyModel model) {
    if (model.rank == SecurityRank::InsecureOnly)
        throw ValidationError("downgrade report needs a security model");
    RoutingOutcome a, b, c;
    return pair_breakdown(g, m, d, secure, model, a, b, c).down;
}

CollateralReport collateral_report(const AsGraph& g, AsId m, AsId d, const SecureConfig& secure,
                                   PolicyModel model) {
    RoutingOutcome attack = compute_outcome(g, {d, m, secure}, model);
    RoutingOutcome attack0 = compute_outcome(
        g, {d, m, SecureConfig::none(g.num_ases())},
        PolicyModel{SecurityRank::InsecureOnly, model.lpk});

    CollateralReport rep;
    for (AsId s = 0; s < g.num_ases(); s++) {
        if (s == m || s == d) continue;
        Lead l0 = attack0.lead(s), ls = attack.lead(s);
        if (!secure.full(s)) {
            if (l0 == Lead::Attacker && ls == Lead::Destination) {
                rep.benefit_sources.push_back(s);
                rep.benefits_lower++;
            }
            bool possibly_unhappy0 = l0 == Lead::Attacker || l0 == Lead::Mixed;
            bool possibly_happyS =
                ls == Lead::Destination ||
                (ls == Lead::Mixed && !same_tie_state(attack0, attack, s));
            if (possibly_unhappy0 && possibly_happyS) rep.benefits_upper++;
        }
        if (l0 == Lead::Destination && ls == Lead::Attacker) {
            rep.damage_sources.push_back(s);
            rep.damages_lower++;
        }
        if (l0 == Lead::Destination && ls != Lead::Destination) rep.damages_upper++;
    }
    return rep;
}

RootCause root_cause(const AsGraph& g, const std::vector<AsId>& attackers,
                     const std::vector<AsId>& destinations, const SecureConfig& secure,
                     PolicyModel model, int jobs) {
    if (model.rank == SecurityRank::InsecureOnly)
        throw ValidationError("root cause needs a security model");
    auto pairs = make_pairs(attackers, destinations);
    if (pairs.empty()) throw ValidationError("no valid (m,d) pairs");

    std::vector<PairBreakdown> slots(pairs.size());
    sweep(pairs.size(), jobs, [&](size_t i) {
        thread_local RoutingOutcome a, b, c;
        slots[i] = pair_breakdown(g, pairs[i].first, pairs[i].second, secure, model, a, b, c);
    });

    RootCause rc;
    rc.pair_count = pairs.size();
    rc.denom = pairs.size() * (g.num_ases() - 2);
    int64_t happy_s = 0, happy_0 = 0;
    for (const PairBreakdown& pb : slots) {
        rc.secure_normal += pb.down.secure_normal;
        rc.excluded_via_m += pb.down.excluded_via_m;
        rc.lost_downgrade += pb.down.downgraded;
        rc.wasted += pb.down.wasted;
        rc.protected_secure += pb.down.protected_count;
        rc.newly_protected += pb.newly_protected;
        rc.insecure_gains += pb.insecure_gains;
        rc.losses += pb.losses;
        rc.benefits_lower += pb.benefits_lower;
        rc.benefits_upper += pb.benefits_upper;
        rc.damages_lower += pb.damages_lower;
        rc.damages_upper += pb.damages_upper;
        happy_s += pb.happy_lower_s;
        happy_0 += pb.happy_lower_empty;
    }
    rc.delta_lower_count = happy_s - happy_0;
    rc.delta_lower = double(rc.delta_lower_count) / double(rc.denom);
    return rc;
}

const char* rollout_plan_name(RolloutPlan p) {
    switch (p) {
        case RolloutPlan::Tier1and2: return "tier1and2";
        case RolloutPlan::Tier2only: return "tier2only";
        case RolloutPlan::NonStubsOnly: return "nonstubs";
        case RolloutPlan::Tier1StubsCP: return "tier1stubscp";
    }
    return "?";
}

namespace {

std::vector<AsId> tier_members_by_customer_degree(const AsGraph& g, const TierAssignment& tiers,
                                                  Tier t) {
    std::vector<AsId> out;
    for (AsId v = 0; v < g.num_ases(); v++)
        if (tiers.tier[v] == t) out.push_back(v);
    std::sort(out.begin(), out.end(), [&](AsId a, AsId b) {
        if (g.customer_degree(a) != g.customer_degree(b))
            return g.customer_degree(a) > g.customer_degree(b);
        return a < b;
    });
    return out;
}

// Stubs joining a deployment: loose mode takes any stub with a secured
// provider, strict mode requires all providers secured.
std::vector<AsId> stubs_of(const AsGraph& g, const std::vector<uint8_t>& secured, bool strict) {
    std::vector<AsId> out;
    for (AsId v = 0; v < g.num_ases(); v++) {
        if (g.customer_degree(v) != 0 || secured[v]) continue;
        auto provs = g.providers(v);
        if (provs.empty()) continue;
        size_t hits = 0;
        for (const Neighbor& nb : provs)
            if (secured[nb.id]) hits++;
        if (strict ? hits == provs.size() : hits > 0) out.push_back(v);
    }
    return out;
}

}  // namespace

std::vector<RolloutStep> rollout(const AsGraph& g, const TierAssignment& tiers, RolloutPlan plan,
                                 const std::vector<AsId>& attackers,
                                 const std::vector<AsId>& destinations, PolicyModel model,
                                 const RolloutOptions& opts) {
    auto t1 = tier_members_by_customer_degree(g, tiers, Tier::Tier1);
    auto t2 = tier_members_by_customer_degree(g, tiers, Tier::Tier2);
    std::vector<AsId> cps;
    for (AsId v = 0; v < g.num_ases(); v++)
        if (tiers.tier[v] == Tier::CP) cps.push_back(v);

    struct StepSpec {
        std::string name;
        std::vector<AsId> core;
        bool add_stubs = true;
    };
    std::vector<StepSpec> specs;
    auto need_t2 = [&](size_t y) {
        if (t2.size() < y)
            throw ValidationError("plan needs " + std::to_string(y) + " tier-2 ASes, graph has " +
                                  std::to_string(t2.size()));
        return std::vector<AsId>(t2.begin(), t2.begin() + y);
    };

    switch (plan) {
        case RolloutPlan::Tier1and2:
            for (size_t y : {13u, 37u, 100u}) {
                StepSpec s;
                s.name = "t1x" + std::to_string(t1.size()) + "_t2x" + std::to_string(y);
                s.core = t1;
                auto picked = need_t2(y);
                s.core.insert(s.core.end(), picked.begin(), picked.end());
                specs.push_back(std::move(s));
            }
            break;
        case RolloutPlan::Tier2only:
            for (size_t y : {13u, 26u, 50u, 100u}) {
                StepSpec s;
                s.name = "t2x" + std::to_string(y);
                s.core = need_t2(y);
                specs.push_back(std::move(s));
            }
            break;
        case RolloutPlan::NonStubsOnly: {
            StepSpec s;
            s.name = "nonstubs";
            s.core = nonstub_ases(g);
            s.add_stubs = false;
            specs.push_back(std::move(s));
            break;
        }
        case RolloutPlan::Tier1StubsCP: {
            StepSpec s;
            s.name = "t1_stubs_cp";
            s.core = t1;
            s.core.insert(s.core.end(), cps.begin(), cps.end());
            specs.push_back(std::move(s));
            break;
        }
    }

    auto pairs = make_pairs(attackers, destinations);
    std::vector<RolloutStep> steps;
    for (const StepSpec& spec : specs) {
        std::vector<uint8_t> secured(g.num_ases(), 0);
        for (AsId v : spec.core) secured[v] = 1;
        std::vector<AsId> stub_members;
        if (spec.add_stubs) stub_members = stubs_of(g, secured, opts.strict_stubs);

        SecureConfig cfg = SecureConfig::none(g.num_ases());
        std::vector<AsId> sset = spec.core;
        sset.insert(sset.end(), stub_members.begin(), stub_members.end());
        std::sort(sset.begin(), sset.end());
        sset.erase(std::unique(sset.begin(), sset.end()), sset.end());
        for (AsId v : sset) {
            bool stub = g.customer_degree(v) == 0;
            if (opts.simplex_stubs && stub)
                cfg.simplex[v] = 1;
            else
                cfg.secure[v] = 1;
        }

        RolloutStep step;
        step.name = spec.name;
        step.secure_set = sset;
        step.secure_size = sset.size();
        for (AsId v : sset)
            if (g.customer_degree(v) > 0) step.nonstub_secure++;
        step.overall = metric_over_pairs(g, pairs, cfg, model, opts.jobs);

        // Per-destination view over destinations inside S.
        std::vector<AsId> sdests = sset;
        if (opts.max_secure_dests && sdests.size() > opts.max_secure_dests) {
            Rng rng(opts.sample_seed);
            rng.shuffle(sdests);
            sdests.resize(opts.max_secure_dests);
            std::sort(sdests.begin(), sdests.end());
        }
        struct DSlot {
            uint64_t lo = 0, up = 0, blo = 0, bup = 0, pairs = 0;
        };
        std::vector<DSlot> dslots(sdests.size());
        const SecureConfig empty = SecureConfig::none(g.num_ases());
        sweep(sdests.size(), opts.jobs, [&](size_t i) {
            AsId dd = sdests[i];
            thread_local RoutingOutcome out;
            DSlot& slot = dslots[i];
            for (AsId m : attackers) {
                if (m == dd) continue;
                compute_outcome_into(g, {dd, m, cfg}, model, out);
                HappyBounds hb = happy_bounds(out);
                compute_outcome_into(g, {dd, m, empty}, model, out);
                HappyBounds b0 = happy_bounds(out);
                slot.lo += hb.lower;
                slot.up += hb.upper;
                slot.blo += b0.lower;
                slot.bup += b0.upper;
                slot.pairs++;
            }
        });
        uint64_t lo = 0, up = 0, blo = 0, bup = 0, np = 0;
        for (size_t i = 0; i < sdests.size(); i++) {
            const DSlot& slot = dslots[i];
            if (!slot.pairs) continue;
            double dn = double(slot.pairs) * double(g.num_ases() - 2);
            PerDestDelta pd;
            pd.dest = sdests[i];
            pd.h_lower = slot.lo / dn;
            pd.h_upper = slot.up / dn;
            pd.delta_lower = (double(slot.lo) - double(slot.blo)) / dn;
            pd.delta_upper = (double(slot.up) - double(slot.bup)) / dn;
            step.dest_deltas.push_back(pd);
            lo += slot.lo;
            up += slot.up;
            blo += slot.blo;
            bup += slot.bup;
            np += slot.pairs;
        }
        if (np) {
            double dn = double(np) * double(g.num_ases() - 2);
            step.secure_dest.pair_count = np;
            step.secure_dest.h_lower = lo / dn;
            step.secure_dest.h_upper = up / dn;
            step.secure_dest.baseline_lower = blo / dn;
            step.secure_dest.baseline_upper = bup / dn;
            step.secure_dest.delta_lower = step.secure_dest.h_lower - step.secure_dest.baseline_lower;
            step.secure_dest.delta_upper = step.secure_dest.h_upper - step.secure_dest.baseline_upper;
        }
        std::sort(step.dest_deltas.begin(), step.dest_deltas.end(),
                  [](const PerDestDelta& a, const PerDestDelta& b) {
                      if (a.delta_lower != b.delta_lower) return a.delta_lower < b.delta_lower;
                      return a.dest < b.dest;
                  });
        steps.push_back(std::move(step));
    }
    return steps;
}

std::vector<AsId> all_ases(const AsGraph& g) {
    std::vector<AsId> out(g.num_ases());
    for (AsId v = 0; v < g.num_ases(); v++) out[v] = v;
    return out;
}

std::vector<AsId> nonstub_ases(const AsGraph& g) {
    std::vector<AsId> out;
    for (AsId v = 0; v < g.num_ases(); v++)
        if (g.customer_degree(v) > 0) out.push_back(v);
    return out;
}

std::vector<AsId> sample_ases(const AsGraph& g, size_t count, uint64_t seed) {
    std::vector<AsId> ids = all_ases(g);
    Rng rng(seed);
    rng.shuffle(ids);
    if (ids.size() > count) ids.resize(count);
    std::sort(ids.begin(), ids.end());
    return ids;
}

}  // namespace bgpsim
