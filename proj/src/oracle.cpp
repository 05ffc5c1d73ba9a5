#include "bgpsim/oracle.hpp"

#include <algorithm>
#include <stdexcept>

namespace bgpsim {
namespace oracle {

MixedResult best_response_fixed_point(const AsGraph& g, const Scenario& sc, PolicyModel model,
                                      uint64_t activation_seed, size_t size_cap) {
    if (g.num_ases() > size_cap)
        throw ValidationError("graph exceeds oracle size cap of " + std::to_string(size_cap));
    validate_scenario(g, sc);
    std::vector<PolicyModel> models(g.num_ases(), model);
    return dynamics::run_best_response(g, sc, models, activation_seed);
}

std::vector<uint8_t> realizable_leads(const AsGraph& g, const Scenario& sc,
                                      const DynamicsState& state, PolicyModel model) {
    constexpr uint8_t kD = 1, kA = 2;
    const AsId d = sc.destination;
    const AsId m = sc.attacker.value_or(kNoAs);
    size_t n = g.num_ases();
    std::vector<uint8_t> bits(n, 0);
    std::vector<uint8_t> flag(n, 0);  // 0 unseen, 1 in progress, 2 done

    // Tie candidates are one hop shorter than the route they extend, so the
    // choice graph is acyclic.
    auto solve = [&](auto&& self, AsId v) -> uint8_t {
        if (v == d) return kD;
        if (v == m) return kA;
        if (flag[v] == 2) return bits[v];
        if (flag[v] == 1) throw std::logic_error("cycle in tiebreak choice graph");
        flag[v] = 1;
        uint8_t b = 0;
        if (state.routes[v].exists) {
            dynamics::BestSet best = dynamics::best_response_set(g, sc, state, v, model);
            for (AsId w : best.tied_next_hops) b |= self(self, w);
        }
        flag[v] = 2;
        return bits[v] = b;
    };
    for (AsId v = 0; v < n; v++) solve(solve, v);
    return bits;
}

std::vector<PLabel> enumerate_deployments(const AsGraph& g, AsId m, AsId d, PolicyModel model,
                                          size_t size_cap) {
    size_t n = g.num_ases();
    if (n > size_cap)
        throw ValidationError("graph exceeds oracle size cap of " + std::to_string(size_cap));
    if (m == d) throw ValidationError("attacker equals destination");

    std::vector<uint8_t> always_happy(n, 1), never_happy(n, 1), ever_routes(n, 0);

    // Subsets of V minus {m}; securing the attacker changes nothing since its
    // announcement is legacy either way.
    std::vector<AsId> candidates;
    for (AsId v = 0; v < n; v++)
        if (v != m) candidates.push_back(v);

    for (uint64_t mask = 0; mask < (1ull << candidates.size()); mask++) {
        Scenario sc{d, m, SecureConfig::none(n)};
        for (size_t i = 0; i < candidates.size(); i++)
            if (mask & (1ull << i)) sc.secure.secure[candidates[i]] = 1;

        std::vector<PolicyModel> models(n, model);
        MixedResult res = dynamics::run_best_response(g, sc, models, /*seed=*/7);
        if (!res.converged)
            throw std::logic_error("homogeneous best response failed to converge");
        std::vector<uint8_t> bits = realizable_leads(g, sc, res.state, model);

        for (AsId s = 0; s < n; s++) {
            if (s == m || s == d) continue;
            bool can_be_happy = bits[s] & 1;
            bool must_be_happy = bits[s] == 1;
            if (bits[s]) ever_routes[s] = 1;
            if (!must_be_happy) always_happy[s] = 0;
            if (can_be_happy) never_happy[s] = 0;
        }
    }

    std::vector<PLabel> labels(n, PLabel::Protectable);
    for (AsId s = 0; s < n; s++) {
        if (s == m || s == d) continue;
        if (!ever_routes[s])
            labels[s] = PLabel::Unreachable;
        else if (always_happy[s])
            labels[s] = PLabel::Immune;
        else if (never_happy[s])
            labels[s] = PLabel::Doomed;
        else
            labels[s] = PLabel::Protectable;
    }
    return labels;
}

MaxKResult max_k_security_bruteforce(const AsGraph& g, AsId m, AsId d, uint32_t k,
                                     PolicyModel model, size_t size_cap) {
    size_t n = g.num_ases();
    if (n > size_cap)
        throw ValidationError("graph exceeds oracle size cap of " + std::to_string(size_cap));
    if (k > n) throw ValidationError("k exceeds graph size");

    MaxKResult best;
    bool have = false;
    std::vector<AsId> combo(k);
    // Lexicographic k-combinations of 0..n-1.
    for (uint32_t i = 0; i < k; i++) combo[i] = i;
    auto evaluate = [&]() {
        Scenario sc{d, m, SecureConfig::none(n)};
        for (AsId v : combo) sc.secure.secure[v] = 1;
        std::vector<PolicyModel> models(n, model);
        MixedResult res = dynamics::run_best_response(g, sc, models, /*seed=*/7);
        std::vector<uint8_t> bits = realizable_leads(g, sc, res.state, model);
        uint32_t happy = 1;  // the destination itself
        for (AsId s = 0; s < n; s++) {
            if (s == m || s == d) continue;
            if (bits[s] == 1) happy++;  // happy under every tiebreak
        }
        if (!have || happy > best.happy) {
            have = true;
            best.happy = happy;
            best.best_secure = combo;
        }
    };

    if (k == 0) {
        evaluate();
        return best;
    }
    while (true) {
        evaluate();
        // next combination
        int i = static_cast<int>(k) - 1;
        while (i >= 0 && combo[i] == n - k + i) i--;
        if (i < 0) break;
        combo[i]++;
        for (uint32_t j = i + 1; j < k; j++) combo[j] = combo[j - 1] + 1;
    }
    return best;
}

}  // namespace oracle
}  // namespace bgpsim
