#pragma once

#include <string>
#include <vector>

#include "bgpsim/engine.hpp"

namespace bgpsim {

enum class PLabel : uint8_t { Doomed = 0, Immune = 1, Protectable = 2, Unreachable = 3 };
const char* plabel_name(PLabel l);

// Per-source classification for one (m, d) pair, from a single S = empty
// routing computation. Sources with no perceivable route toward either root
// go to the Unreachable bucket and stay out of the three-way fractions.
struct PartitionReport {
    AsId attacker = kNoAs;
    AsId destination = kNoAs;
    std::vector<PLabel> labels;          // attacker and destination excluded from counts
    std::vector<uint8_t> surely_happy;   // per source, at S = empty
    uint32_t doomed = 0, immune = 0, protectable = 0, unreachable = 0;
    uint32_t baseline_happy_lower = 0, baseline_happy_upper = 0;

    uint32_t classified() const { return doomed + immune + protectable; }
    uint32_t denominator() const { return static_cast<uint32_t>(labels.size()) - 2; }
};

// SecurityThird labels by where the tie-surviving best routes lead;
// SecuritySecond by where all surviving perceivable routes of the best type
// lead; SecurityFirst labels everything protectable unless `first_exact`,
// which applies the sufficient conditions (every perceivable route passes m
// => doomed; sole neighbor is d => immune). first_exact rebuilds subgraphs,
// meant for small instances only.
PartitionReport partition(const AsGraph& g, AsId m, AsId d, PolicyModel model,
                          bool first_exact = false);

enum class GroupBy : uint8_t { None, DestinationTier, AttackerTier, SourceTier };

struct PartitionSweepRow {
    std::string group;
    uint64_t pairs = 0;
    uint64_t doomed = 0, immune = 0, protectable = 0, unreachable = 0;
    uint64_t baseline_happy_lower = 0;
    uint64_t denominator = 0;  // classified sources summed over pairs
    uint64_t full_denominator = 0;  // (|V|-2) summed over pairs

    double immune_frac() const { return denominator ? double(immune) / denominator : 0.0; }
    double protectable_frac() const { return denominator ? double(protectable) / denominator : 0.0; }
    double doomed_frac() const { return denominator ? double(doomed) / denominator : 0.0; }
    double baseline_happy_lower_frac() const {
        return full_denominator ? double(baseline_happy_lower) / full_denominator : 0.0;
    }
};

// Fans the (m, d) pairs out across jobs threads and reduces integer counts in
// pair order, so results are schedule independent. jobs <= 1 runs the serial
// reference path.
std::vector<PartitionSweepRow> partition_sweep(const AsGraph& g, const std::vector<AsId>& attackers,
                                               const std::vector<AsId>& destinations,
                                               PolicyModel model, GroupBy group_by,
                                               const TierAssignment* tiers, int jobs);

}  // namespace bgpsim
