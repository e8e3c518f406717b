// Exhaustive backtracking search for a "bad cover": a k-tuple of candidates
// (repetitions allowed) that covers every position in {1..half_range} while
// every size k-1 index subset together with the modulus has gcd 1. Absence of
// such a tuple for (k, p) certifies that p divides the speed product of any
// counterexample with k runners-plus-one.
#pragma once

#include "lrc/cover.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace lrc {

struct BadCover {
    std::vector<long long> tuple;  // nondecreasing candidate values
};

// Branch-cutting rules. All on by default; the switches exist so tests can
// show that each rule changes node counts but never the verdict.
struct PruneToggles {
    bool bound = true;      // uncovered > slots * best new coverage => cut
    bool sibling = true;    // drop an exhausted candidate for later siblings
    bool forced = true;     // branch only on candidates covering the rarest position
    bool gcd_early = true;  // check the first k-1 chosen elements' gcd at once

    std::string canonical() const;
    static PruneToggles parse(const std::string& text);
    bool operator==(const PruneToggles&) const = default;
};

struct SearchConfig {
    int parallel_width = 0;     // 0 or 1: sequential; >= 2: worker threads
    bool deterministic = true;  // forces sequential exploration order
    std::optional<unsigned long long> node_budget;
    std::optional<std::string> checkpoint_path;
    PruneToggles prunes;

    bool sequential() const { return deterministic || parallel_width <= 1; }
};

struct SearchStats {
    unsigned long long nodes = 0;  // includes nodes replayed from a checkpoint
    int root_branches = 0;
    int resumed_branches = 0;
};

enum class Verdict { Verified, Falsified, Inconclusive };

std::string to_string(Verdict v);
Verdict verdict_from_string(const std::string& s);

struct PrimeCertificate {
    int k = 0;
    long long p = 0;
    Verdict verdict = Verdict::Inconclusive;
    std::optional<BadCover> witness;  // present iff Falsified
    unsigned long long nodes_explored = 0;
    long long wall_ms = 0;
    std::string engine_version;
    std::string pruning;
    int workers = 1;
    std::string provenance = "computed";  // computed | stored
};

struct BudgetExhausted : std::runtime_error {
    BudgetExhausted() : std::runtime_error("node budget exhausted") {}
};

struct CheckpointError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Exhaustive: returns a witness iff one exists, nullopt when the whole tree
// was cut or explored. Throws BudgetExhausted when the node budget runs out
// (stats are still filled in). A checkpoint path makes completed first-level
// branches resumable across runs.
std::optional<BadCover> search_bad_cover(const CoverInstance& inst, const SearchConfig& cfg,
                                         SearchStats* stats = nullptr);

// Independent recheck of a witness: candidate membership, gcd side condition
// and full coverage, recomputed from the covers() arithmetic rather than the
// search's tables.
bool validate_bad_cover(const BadCover& w, const CoverInstance& inst);

// build_instance + search_bad_cover, wrapped into a certificate.
PrimeCertificate verify_prime(int k, long long p, const SearchConfig& cfg);

}  // namespace lrc
