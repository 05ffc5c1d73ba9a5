// Generates an internet-like random topology in the relationship format,
// plus matching tier-1 seed and CP list files.
#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "bgpsim/synthetic.hpp"

using namespace bgpsim;

int main(int argc, char** argv) {
    CLI::App app{"synthetic AS topology generator"};
    SyntheticConfig cfg;
    std::string out = "topology.rel";
    std::string seed_out, cp_out;
    app.add_option("--out", out, "relationship file to write");
    app.add_option("--tier1-out", seed_out, "tier-1 seed list to write");
    app.add_option("--cp-out", cp_out, "CP ASN list to write");
    app.add_option("--stubs", cfg.stubs, "stub count");
    app.add_option("--large", cfg.large_isps, "large ISP count");
    app.add_option("--mid", cfg.mid_isps, "mid ISP count");
    app.add_option("--small", cfg.small_isps, "small ISP count");
    app.add_option("--seed", cfg.seed, "rng seed");
    CLI11_PARSE(app, argc, argv);

    AsGraph g = generate_internet(cfg);
    std::ofstream f(out);
    write_relationships(g, f);
    std::cerr << "wrote " << out << ": " << g.num_ases() << " ASes, "
              << g.num_customer_provider_edges() << " customer-provider edges, "
              << g.num_peer_edges() << " peer edges\n";
    if (!seed_out.empty()) {
        std::ofstream sf(seed_out);
        for (uint32_t asn : synthetic_tier1_asns(cfg)) sf << asn << "\n";
    }
    if (!cp_out.empty()) {
        std::ofstream cf(cp_out);
        for (uint32_t asn : default_cp_asns()) cf << asn << "\n";
    }
    return 0;
}
