// Compares the serial reference sweep against the OpenMP kernel on a
// generated topology and checks they reduce to the same numbers.
#include <chrono>
#include <cstdio>

#include "bgpsim/analysis.hpp"
#include "bgpsim/synthetic.hpp"

using namespace bgpsim;
using Clock = std::chrono::steady_clock;

int main(int argc, char** argv) {
    SyntheticConfig cfg;
    cfg.stubs = 6000;
    cfg.mid_isps = 400;
    cfg.small_isps = 800;
    if (argc > 1) cfg.stubs = std::atoi(argv[1]);
    AsGraph g = generate_internet(cfg);
    std::printf("graph: %zu ASes, %zu c2p, %zu p2p\n", g.num_ases(),
                g.num_customer_provider_edges(), g.num_peer_edges());

    auto attackers = sample_ases(g, 40, 11);
    auto dests = sample_ases(g, 40, 22);
    SecureConfig secure = SecureConfig::none(g.num_ases());
    for (AsId v = 0; v < g.num_ases(); v += 3) secure.secure[v] = 1;
    PolicyModel model{SecurityRank::SecuritySecond, 0};

    auto t0 = Clock::now();
    MetricReport serial = metric(g, attackers, dests, secure, model, /*jobs=*/1);
    auto t1 = Clock::now();
    MetricReport parallel = metric(g, attackers, dests, secure, model, /*jobs=*/8);
    auto t2 = Clock::now();

    double serial_s = std::chrono::duration<double>(t1 - t0).count();
    double parallel_s = std::chrono::duration<double>(t2 - t1).count();
    std::printf("pairs: %llu\n", static_cast<unsigned long long>(serial.pair_count));
    std::printf("serial:   %.3fs  h=[%.6f, %.6f]\n", serial_s, serial.h_lower, serial.h_upper);
    std::printf("parallel: %.3fs  h=[%.6f, %.6f]  speedup %.2fx\n", parallel_s, parallel.h_lower,
                parallel.h_upper, serial_s / parallel_s);
    bool same = serial.h_lower == parallel.h_lower && serial.h_upper == parallel.h_upper &&
                serial.baseline_lower == parallel.baseline_lower &&
                serial.baseline_upper == parallel.baseline_upper;
    std::printf("results identical: %s\n", same ? "yes" : "NO");
    return same ? 0 : 1;
}
