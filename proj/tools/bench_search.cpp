// Benchmark: sequential reference search vs the OpenMP-parallel search on the
// same instances. The verdicts must agree; only wall time and (for falsified
// runs) node counts may differ.
#include "lrc/search.hpp"

#include <cstdlib>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

namespace {

struct Case {
    int k;
    long long p;
};

lrc::PrimeCertificate timed(int k, long long p, int workers) {
    lrc::SearchConfig cfg;
    cfg.parallel_width = workers;
    cfg.deterministic = workers <= 1;
    return lrc::verify_prime(k, p, cfg);
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<Case> cases;
    int workers = static_cast<int>(std::thread::hardware_concurrency());
    if (workers < 2) workers = 2;

    for (int i = 1; i < argc; ++i) {
        std::string arg = argv[i];
        if (arg == "--workers" && i + 1 < argc) {
            workers = std::atoi(argv[++i]);
            continue;
        }
        auto colon = arg.find(':');
        if (colon == std::string::npos) {
            std::cerr << "usage: bench_search [--workers N] [k:p ...]\n";
            return 2;
        }
        cases.push_back({std::atoi(arg.substr(0, colon).c_str()),
                         std::atoll(arg.substr(colon + 1).c_str())});
    }
    if (cases.empty()) cases = {{5, 23}, {5, 31}, {5, 71}, {6, 19}};

    std::cout << "k     p   verdict     serial-ms   serial-nodes    par-ms (" << workers
              << "w)   speedup\n";
    bool agree = true;
    for (const auto& c : cases) {
        auto serial = timed(c.k, c.p, 1);
        auto parallel = timed(c.k, c.p, workers);
        if (serial.verdict != parallel.verdict) agree = false;
        const double speedup =
            parallel.wall_ms > 0 ? static_cast<double>(serial.wall_ms) / parallel.wall_ms : 0.0;
        std::printf("%-4d %4lld  %-11s %9lld %14llu %12lld      %.2f%s\n", c.k, c.p,
                    lrc::to_string(serial.verdict).c_str(), serial.wall_ms,
                    serial.nodes_explored, parallel.wall_ms, speedup,
                    serial.verdict == parallel.verdict ? "" : "  ** VERDICT MISMATCH **");
    }
    if (!agree) {
        std::cout << "verdict disagreement between serial and parallel runs\n";
        return 1;
    }
    return 0;
}
