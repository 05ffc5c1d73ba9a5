// Command-line front end: graph loading, experiment configuration, parallel
// sweeps, CSV + JSON manifest emission.
#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "bgpsim/analysis.hpp"
#include "bgpsim/oracle.hpp"
#include "bgpsim/partitions.hpp"
#include "bgpsim/synthetic.hpp"

using json = nlohmann::json;
using namespace bgpsim;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string fixed6(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

struct Config {
    std::string command;
    std::string graph_path, ixp_path, tier1_seed_path, cp_list_path;
    bool do_preprocess = false;
    uint32_t prune_threshold = 10;
    std::string model_name = "third";
    uint32_t lpk = 0;
    std::string attackers_sel = "all", destinations_sel = "all", deploy_sel = "none";
    bool simplex_stubs = false;
    int jobs = 1;
    std::string out_dir;
    std::string group_by = "none";
    uint32_t max_secure_dests = 300;
    uint64_t seed = 1;
    std::string mixed_models;
    uint32_t wedgie_seeds = 64;
    bool first_exact = false;
};

PolicyModel model_of(const Config& cfg) {
    PolicyModel m;
    m.lpk = cfg.lpk;
    if (cfg.model_name == "first")
        m.rank = SecurityRank::SecurityFirst;
    else if (cfg.model_name == "second")
        m.rank = SecurityRank::SecuritySecond;
    else if (cfg.model_name == "third")
        m.rank = SecurityRank::SecurityThird;
    else if (cfg.model_name == "insecure")
        m.rank = SecurityRank::InsecureOnly;
    else
        throw UsageError("unknown model: " + cfg.model_name);
    return m;
}

struct LoadedGraph {
    AsGraph graph;
    TierAssignment tiers;
    std::vector<uint32_t> tier1_seed;
};

LoadedGraph load_graph(const Config& cfg) {
    if (cfg.graph_path.empty()) throw UsageError("--graph is required");
    AsGraph g = parse_relationships_file(cfg.graph_path);
    std::vector<uint32_t> seed;
    if (!cfg.tier1_seed_path.empty()) seed = parse_asn_list_file(cfg.tier1_seed_path);
    if (cfg.do_preprocess) {
        if (seed.empty()) throw UsageError("--preprocess requires --tier1-seed");
        g = preprocess(g, seed, cfg.prune_threshold);
    }
    if (!cfg.ixp_path.empty()) {
        IxpAugmentResult aug = augment_with_ixp(g, IxpMembership::parse_file(cfg.ixp_path));
        std::cerr << "ixp: added " << aug.added_edges << " peer edges, skipped "
                  << aug.skipped_asns.size() << " unresolved members\n";
        g = std::move(aug.graph);
    }
    std::vector<uint32_t> cps =
        cfg.cp_list_path.empty() ? default_cp_asns() : parse_asn_list_file(cfg.cp_list_path);
    TierAssignment tiers = classify_tiers(g, cps, seed);
    return {std::move(g), std::move(tiers), std::move(seed)};
}

std::vector<AsId> ids_from_asn_file(const AsGraph& g, const std::string& path) {
    std::vector<AsId> out;
    for (uint32_t asn : parse_asn_list_file(path)) {
        auto id = g.lookup_asn(asn);
        if (!id) {
            std::cerr << "warning: ASN " << asn << " not in graph, skipped\n";
            continue;
        }
        out.push_back(*id);
    }
    return out;
}

std::vector<AsId> select_ases(const AsGraph& g, const std::string& sel) {
    if (sel == "all") return all_ases(g);
    if (sel == "nonstub") return nonstub_ases(g);
    if (sel.rfind("file:", 0) == 0) return ids_from_asn_file(g, sel.substr(5));
    if (sel.rfind("sample:", 0) == 0) {
        std::string rest = sel.substr(7);
        size_t colon = rest.find(':');
        if (colon == std::string::npos) throw UsageError("sample selector needs sample:N:SEED");
        size_t count = std::stoull(rest.substr(0, colon));
        uint64_t seed = std::stoull(rest.substr(colon + 1));
        return sample_ases(g, count, seed);
    }
    throw UsageError("bad selector: " + sel);
}

SecureConfig deploy_of(const AsGraph& g, const Config& cfg) {
    std::vector<AsId> ids;
    if (cfg.deploy_sel == "none") {
        // empty
    } else if (cfg.deploy_sel == "all") {
        ids = all_ases(g);
    } else if (cfg.deploy_sel.rfind("file:", 0) == 0) {
        ids = ids_from_asn_file(g, cfg.deploy_sel.substr(5));
    } else if (cfg.deploy_sel.rfind("plan:", 0) == 0) {
        throw UsageError("plan deployments are only valid for the rollout command");
    } else {
        throw UsageError("bad deploy selector: " + cfg.deploy_sel);
    }
    SecureConfig sc = SecureConfig::none(g.num_ases());
    for (AsId v : ids) {
        if (cfg.simplex_stubs && g.customer_degree(v) == 0)
            sc.simplex[v] = 1;
        else
            sc.secure[v] = 1;
    }
    return sc;
}

char hexdigit(uint64_t v) { return "0123456789abcdef"[v & 0xf]; }

std::string hex64(uint64_t v) {
    std::string s(16, '0');
    for (int i = 15; i >= 0; i--, v >>= 4) s[i] = hexdigit(v);
    return s;
}

void write_manifest(const Config& cfg, const AsGraph& g, const std::vector<std::string>& outputs,
                    const json& extra = json::object()) {
    json j;
    j["command"] = cfg.command;
    j["graph"] = {{"path", cfg.graph_path},
                  {"hash", hex64(g.content_hash())},
                  {"ases", g.num_ases()},
                  {"customer_provider_edges", g.num_customer_provider_edges()},
                  {"peer_edges", g.num_peer_edges()}};
    j["model"] = cfg.model_name;
    j["lpk"] = cfg.lpk;
    j["attackers"] = cfg.attackers_sel;
    j["destinations"] = cfg.destinations_sel;
    j["deploy"] = cfg.deploy_sel;
    j["simplex_stubs"] = cfg.simplex_stubs;
    j["preprocess"] = cfg.do_preprocess;
    j["ixp"] = cfg.ixp_path;
    j["jobs"] = cfg.jobs;
    j["seed"] = cfg.seed;
    j["outputs"] = outputs;
    for (auto& [k, v] : extra.items()) j[k] = v;
    std::ofstream f(std::filesystem::path(cfg.out_dir) / "manifest.json");
    f << j.dump(2) << "\n";
}

GroupBy group_by_of(const std::string& s) {
    if (s == "none") return GroupBy::None;
    if (s == "dest-tier") return GroupBy::DestinationTier;
    if (s == "attacker-tier") return GroupBy::AttackerTier;
    if (s == "source-tier") return GroupBy::SourceTier;
    throw UsageError("bad --group-by: " + s);
}

int cmd_partitions(const Config& cfg) {
    LoadedGraph lg = load_graph(cfg);
    auto attackers = select_ases(lg.graph, cfg.attackers_sel);
    auto dests = select_ases(lg.graph, cfg.destinations_sel);
    if (attackers.empty() || dests.empty()) throw UsageError("empty attacker or destination set");
    auto rows = partition_sweep(lg.graph, attackers, dests, model_of(cfg), group_by_of(cfg.group_by),
                                &lg.tiers, cfg.jobs);
    std::filesystem::create_directories(cfg.out_dir);
    std::ofstream f(std::filesystem::path(cfg.out_dir) / "partitions.csv");
    f << "group,immune_frac,protectable_frac,doomed_frac,baseline_happy_lower\n";
    json extra;
    for (const auto& r : rows) {
        f << r.group << ',' << fixed6(r.immune_frac()) << ',' << fixed6(r.protectable_frac()) << ','
          << fixed6(r.doomed_frac()) << ',' << fixed6(r.baseline_happy_lower_frac()) << "\n";
        extra["unreachable"][r.group] = r.unreachable;
        extra["pairs"][r.group] = r.pairs;
    }
    f.close();
    write_manifest(cfg, lg.graph, {"partitions.csv"}, extra);
    return 0;
}

int cmd_metric(const Config& cfg) {
    LoadedGraph lg = load_graph(cfg);
    auto attackers = select_ases(lg.graph, cfg.attackers_sel);
    auto dests = select_ases(lg.graph, cfg.destinations_sel);
    if (attackers.empty() || dests.empty()) throw UsageError("empty attacker or destination set");
    MetricReport r = metric(lg.graph, attackers, dests, deploy_of(lg.graph, cfg), model_of(cfg),
                            cfg.jobs);
    std::filesystem::create_directories(cfg.out_dir);
    std::ofstream f(std::filesystem::path(cfg.out_dir) / "metric.csv");
    f << "step,model,h_lower,h_upper,baseline_lower,baseline_upper,delta_lower,delta_upper\n";
    f << "deploy," << cfg.model_name << ',' << fixed6(r.h_lower) << ',' << fixed6(r.h_upper) << ','
      << fixed6(r.baseline_lower) << ',' << fixed6(r.baseline_upper) << ','
      << fixed6(r.delta_lower) << ',' << fixed6(r.delta_upper) << "\n";
    f.close();
    write_manifest(cfg, lg.graph, {"metric.csv"},
                   {{"pairs", r.pair_count}, {"h_lower_stderr", r.stderr_lower}});
    return 0;
}

int cmd_rollout(const Config& cfg) {
    LoadedGraph lg = load_graph(cfg);
    if (cfg.deploy_sel.rfind("plan:", 0) != 0)
        throw UsageError("rollout needs --deploy plan:NAME");
    std::string name = cfg.deploy_sel.substr(5);
    RolloutPlan plan;
    if (name == "tier1and2")
        plan = RolloutPlan::Tier1and2;
    else if (name == "tier2only")
        plan = RolloutPlan::Tier2only;
    else if (name == "nonstubs")
        plan = RolloutPlan::NonStubsOnly;
    else if (name == "tier1stubscp")
        plan = RolloutPlan::Tier1StubsCP;
    else
        throw UsageError("unknown rollout plan: " + name);

    auto attackers = select_ases(lg.graph, cfg.attackers_sel);
    auto dests = select_ases(lg.graph, cfg.destinations_sel);
    RolloutOptions opts;
    opts.simplex_stubs = cfg.simplex_stubs;
    opts.max_secure_dests = cfg.max_secure_dests;
    opts.sample_seed = cfg.seed;
    opts.jobs = cfg.jobs;
    auto steps = rollout(lg.graph, lg.tiers, plan, attackers, dests, model_of(cfg), opts);

    std::filesystem::create_directories(cfg.out_dir);
    std::vector<std::string> outputs = {"rollout.csv"};
    std::ofstream f(std::filesystem::path(cfg.out_dir) / "rollout.csv");
    f << "step,model,secure_size,nonstub_secure,h_lower,h_upper,baseline_lower,baseline_upper,"
         "delta_lower,delta_upper,securedest_h_lower,securedest_h_upper,securedest_delta_lower,"
         "securedest_delta_upper\n";
    for (const auto& st : steps) {
        f << st.name << ',' << cfg.model_name << ',' << st.secure_size << ',' << st.nonstub_secure
          << ',' << fixed6(st.overall.h_lower) << ',' << fixed6(st.overall.h_upper) << ','
          << fixed6(st.overall.baseline_lower) << ',' << fixed6(st.overall.baseline_upper) << ','
          << fixed6(st.overall.delta_lower) << ',' << fixed6(st.overall.delta_upper) << ','
          << fixed6(st.secure_dest.h_lower) << ',' << fixed6(st.secure_dest.h_upper) << ','
          << fixed6(st.secure_dest.delta_lower) << ',' << fixed6(st.secure_dest.delta_upper)
          << "\n";
        std::string dname = "rollout_" + st.name + "_dests.csv";
        std::ofstream df(std::filesystem::path(cfg.out_dir) / dname);
        df << "dest,delta_lower,delta_upper,h_lower,h_upper\n";
        for (const auto& pd : st.dest_deltas)
            df << lg.graph.original_asn(pd.dest) << ',' << fixed6(pd.delta_lower) << ','
               << fixed6(pd.delta_upper) << ',' << fixed6(pd.h_lower) << ',' << fixed6(pd.h_upper)
               << "\n";
        outputs.push_back(dname);
    }
    f.close();
    write_manifest(cfg, lg.graph, outputs);
    return 0;
}

int cmd_downgrades(const Config& cfg) {
    LoadedGraph lg = load_graph(cfg);
    auto attackers = select_ases(lg.graph, cfg.attackers_sel);
    auto dests = select_ases(lg.graph, cfg.destinations_sel);
    RootCause rc = root_cause(lg.graph, attackers, dests, deploy_of(lg.graph, cfg), model_of(cfg),
                              cfg.jobs);
    std::filesystem::create_directories(cfg.out_dir);
    std::ofstream f(std::filesystem::path(cfg.out_dir) / "downgrades.csv");
    f << "model,pairs,secure_normal_frac,downgraded_frac,wasted_frac,protected_frac,"
         "excluded_via_m\n";
    double dn = double(rc.denom);
    f << cfg.model_name << ',' << rc.pair_count << ',' << fixed6(rc.secure_normal / dn) << ','
      << fixed6(rc.lost_downgrade / dn) << ',' << fixed6(rc.wasted / dn) << ','
      << fixed6(rc.protected_secure / dn) << ',' << rc.excluded_via_m << "\n";
    f.close();
    write_manifest(cfg, lg.graph, {"downgrades.csv"});
    return 0;
}

int cmd_rootcause(const Config& cfg) {
    LoadedGraph lg = load_graph(cfg);
    auto attackers = select_ases(lg.graph, cfg.attackers_sel);
    auto dests = select_ases(lg.graph, cfg.destinations_sel);
    RootCause rc = root_cause(lg.graph, attackers, dests, deploy_of(lg.graph, cfg), model_of(cfg),
                              cfg.jobs);
    std::filesystem::create_directories(cfg.out_dir);
    std::ofstream f(std::filesystem::path(cfg.out_dir) / "rootcause.csv");
    f << "model,pairs,secure_normal_frac,lost_downgrade_frac,wasted_frac,protected_frac,"
         "newly_protected_frac,benefits_lower_frac,benefits_upper_frac,damages_lower_frac,"
         "damages_upper_frac,delta_lower\n";
    double dn = double(rc.denom);
    f << cfg.model_name << ',' << rc.pair_count << ',' << fixed6(rc.secure_normal / dn) << ','
      << fixed6(rc.lost_downgrade / dn) << ',' << fixed6(rc.wasted / dn) << ','
      << fixed6(rc.protected_secure / dn) << ',' << fixed6(rc.newly_protected / dn) << ','
      << fixed6(rc.benefits_lower / dn) << ',' << fixed6(rc.benefits_upper / dn) << ','
      << fixed6(rc.damages_lower / dn) << ',' << fixed6(rc.damages_upper / dn) << ','
      << fixed6(rc.delta_lower) << "\n";
    f.close();
    write_manifest(cfg, lg.graph, {"rootcause.csv"});
    return 0;
}

int cmd_wedgie(const Config& cfg) {
    LoadedGraph lg = load_graph(cfg);
    const AsGraph& g = lg.graph;
    auto dests = select_ases(g, cfg.destinations_sel);
    if (dests.size() != 1) throw UsageError("wedgie needs exactly one destination (file: selector)");
    Scenario sc{dests[0], std::nullopt, deploy_of(g, cfg)};
    if (cfg.attackers_sel != "all") {
        auto atk = select_ases(g, cfg.attackers_sel);
        if (atk.size() != 1) throw UsageError("wedgie takes at most one attacker");
        sc.attacker = atk[0];
    }

    std::vector<PolicyModel> models(g.num_ases(), model_of(cfg));
    if (!cfg.mixed_models.empty()) {
        std::istringstream ss(cfg.mixed_models);
        std::string item;
        while (std::getline(ss, item, ',')) {
            size_t eq = item.find('=');
            if (eq == std::string::npos) throw UsageError("--mixed wants asn=model pairs");
            uint32_t asn = std::stoul(item.substr(0, eq));
            auto id = g.lookup_asn(asn);
            if (!id) throw UsageError("--mixed ASN not in graph: " + item);
            Config sub = cfg;
            sub.model_name = item.substr(eq + 1);
            models[*id] = model_of(sub);
        }
    }

    std::map<uint64_t, std::pair<DynamicsState, uint64_t>> states;  // hash -> (state, first seed)
    uint32_t failures = 0;
    for (uint32_t i = 0; i < cfg.wedgie_seeds; i++) {
        MixedResult res = compute_outcome_mixed(g, sc, models, cfg.seed + i);
        if (!res.converged) {
            failures++;
            continue;
        }
        states.emplace(res.state.hash(), std::make_pair(res.state, cfg.seed + i));
    }

    std::filesystem::create_directories(cfg.out_dir);
    std::ofstream f(std::filesystem::path(cfg.out_dir) / "wedgie.csv");
    f << "stable_states,seeds,nonconverged\n";
    f << states.size() << ',' << cfg.wedgie_seeds << ',' << failures << "\n";
    f.close();
    std::ofstream sf(std::filesystem::path(cfg.out_dir) / "wedgie_states.txt");
    size_t idx = 0;
    for (auto& [h, entry] : states) {
        sf << "state " << idx++ << " (first seed " << entry.second << ")\n";
        for (AsId v = 0; v < g.num_ases(); v++) {
            const ChosenRoute& r = entry.first.routes[v];
            sf << "  " << g.original_asn(v) << ": ";
            if (!r.exists) {
                sf << "-\n";
                continue;
            }
            for (AsId x : r.path) sf << g.original_asn(x) << ' ';
            sf << (r.secure ? "(secure)" : "(insecure)") << "\n";
        }
    }
    sf.close();
    write_manifest(cfg, g, {"wedgie.csv", "wedgie_states.txt"},
                   {{"stable_states", states.size()}});
    std::cout << "stable states: " << states.size() << " (nonconverged seeds: " << failures
              << ")\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"S*BGP partial-deployment security simulator"};
    app.require_subcommand(1);
    Config cfg;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--graph", cfg.graph_path, "relationship file (asn|asn|rel)");
        sub->add_option("--ixp", cfg.ixp_path, "IXP membership file (ixp_id,asn)");
        sub->add_option("--tier1-seed", cfg.tier1_seed_path, "tier-1 ASN list");
        sub->add_option("--cp-list", cfg.cp_list_path, "content-provider ASN list");
        sub->add_flag("--preprocess", cfg.do_preprocess, "prune provider-free low-degree ASes");
        sub->add_option("--prune-threshold", cfg.prune_threshold, "preprocess degree cutoff");
        sub->add_option("--model", cfg.model_name, "first|second|third|insecure");
        sub->add_option("--lpk", cfg.lpk, "LP(k) local-preference variant, 0 = standard");
        sub->add_option("--attackers", cfg.attackers_sel, "all|nonstub|file:PATH|sample:N:SEED");
        sub->add_option("--destinations", cfg.destinations_sel,
                        "all|nonstub|file:PATH|sample:N:SEED");
        sub->add_option("--deploy", cfg.deploy_sel, "none|all|file:PATH|plan:NAME");
        sub->add_flag("--simplex-stubs", cfg.simplex_stubs, "stub deployments run simplex");
        sub->add_option("--jobs", cfg.jobs, "worker threads");
        sub->add_option("--out", cfg.out_dir, "output directory")->required();
        sub->add_option("--seed", cfg.seed, "sampling / activation seed");
    };

    CLI::App* p = app.add_subcommand("partitions", "doomed/immune/protectable tables");
    add_common(p);
    p->add_option("--group-by", cfg.group_by, "none|dest-tier|attacker-tier|source-tier");

    CLI::App* m = app.add_subcommand("metric", "happiness metric bounds for one deployment");
    add_common(m);

    CLI::App* r = app.add_subcommand("rollout", "metric across a deployment schedule");
    add_common(r);
    r->add_option("--max-secure-dests", cfg.max_secure_dests,
                  "per-destination delta sample cap (0 = all)");

    CLI::App* dg = app.add_subcommand("downgrades", "protocol downgrade accounting");
    add_common(dg);

    CLI::App* rc = app.add_subcommand("rootcause", "metric-change decomposition");
    add_common(rc);

    CLI::App* w = app.add_subcommand("wedgie", "mixed-model stable-state probe");
    add_common(w);
    w->add_option("--mixed", cfg.mixed_models, "per-AS model overrides, asn=model[,...]");
    w->add_option("--wedgie-seeds", cfg.wedgie_seeds, "activation orders to try");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (p->parsed()) { cfg.command = "partitions"; return cmd_partitions(cfg); }
        if (m->parsed()) { cfg.command = "metric"; return cmd_metric(cfg); }
        if (r->parsed()) { cfg.command = "rollout"; return cmd_rollout(cfg); }
        if (dg->parsed()) { cfg.command = "downgrades"; return cmd_downgrades(cfg); }
        if (rc->parsed()) { cfg.command = "rootcause"; return cmd_rootcause(cfg); }
        if (w->parsed()) { cfg.command = "wedgie"; return cmd_wedgie(cfg); }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::logic_error& e) {
        std::cerr << "invariant violation: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
