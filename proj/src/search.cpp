#include "lrc/search.hpp"

#include "lrc/version.hpp"

#include <algorithm>
#include <atomic>
#include <cassert>
#include <chrono>
#include <climits>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <sstream>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace lrc {

std::string PruneToggles::canonical() const {
    std::string s;
    auto add = [&s](bool on, const char* name) {
        if (!on) return;
        if (!s.empty()) s += ',';
        s += name;
    };
    add(bound, "bound");
    add(sibling, "sibling");
    add(forced, "forced");
    add(gcd_early, "gcd-early");
    return s.empty() ? "none" : s;
}

PruneToggles PruneToggles::parse(const std::string& text) {
    PruneToggles t{false, false, false, false};
    if (text == "none") return t;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item == "bound")
            t.bound = true;
        else if (item == "sibling")
            t.sibling = true;
        else if (item == "forced")
            t.forced = true;
        else if (item == "gcd-early")
            t.gcd_early = true;
        else
            throw std::invalid_argument("unknown pruning rule '" + item + "'");
    }
    return t;
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::Verified: return "verified";
        case Verdict::Falsified: return "falsified";
        case Verdict::Inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

Verdict verdict_from_string(const std::string& s) {
    if (s == "verified") return Verdict::Verified;
    if (s == "falsified") return Verdict::Falsified;
    if (s == "inconclusive") return Verdict::Inconclusive;
    throw std::invalid_argument("unknown verdict '" + s + "'");
}

namespace {

struct CancelSearch {};  // unwinds a worker once the verdict is settled elsewhere

struct SharedState {
    std::atomic<bool> found{false};
    std::atomic<bool> budget_hit{false};
    std::atomic<unsigned long long> nodes{0};
    unsigned long long budget = 0;  // 0 = unlimited
    std::mutex witness_mu;
    std::optional<BadCover> witness;

    void record_witness(std::vector<long long> tuple) {
        std::scoped_lock lock(witness_mu);
        if (!witness) witness = BadCover{std::move(tuple)};
        found.store(true, std::memory_order_release);
    }
};

// Checkpoint file: completed first-level branches plus their node counts.
// Self-describing text, append-only while a run is in flight.
class Checkpoint {
  public:
    Checkpoint() = default;

    static Checkpoint open(const std::string& path, const CoverInstance& inst,
                           const PruneToggles& prunes, int branch_count) {
        Checkpoint ck;
        ck.path_ = path;
        ck.active_ = true;
        std::ifstream in(path);
        if (in) {
            ck.parse_existing(in, inst, prunes, branch_count);
        } else {
            std::ofstream out(path);
            if (!out) throw CheckpointError("cannot create checkpoint file " + path);
            out << "lrc-checkpoint v1\n"
                << "k " << inst.k << "\n"
                << "p " << inst.p << "\n"
                << "engine " << kEngineVersion << "\n"
                << "pruning " << prunes.canonical() << "\n"
                << "branches " << branch_count << "\n";
            if (!out) throw CheckpointError("cannot write checkpoint file " + path);
        }
        return ck;
    }

    bool done(int branch) const { return done_.count(branch) != 0; }
    int done_count() const { return static_cast<int>(done_.size()); }
    unsigned long long resumed_nodes() const { return resumed_nodes_; }

    // Completed branches are recorded with the candidate value they descend
    // on, so a resume can verify it is walking the same branch list.
    void check_branches(const std::vector<std::pair<int, int>>& branches,
                        const CoverInstance& inst) const {
        for (const auto& [branch, record] : done_) {
            const int candidate = inst.candidates[branches[branch].first];
            if (record.candidate != candidate)
                throw CheckpointError(
                    "checkpoint: branch " + std::to_string(branch) + " descends on candidate " +
                    std::to_string(candidate) + ", file says " + std::to_string(record.candidate));
        }
    }

    void mark_done(int branch, int candidate, unsigned long long nodes) {
        if (!active_) return;
        std::scoped_lock lock(*mu_);
        std::ofstream out(path_, std::ios::app);
        if (!out) throw CheckpointError("cannot append to checkpoint file " + path_);
        out << "done " << branch << ' ' << candidate << ' ' << nodes << '\n';
        out.flush();
    }

  private:
    void parse_existing(std::istream& in, const CoverInstance& inst, const PruneToggles& prunes,
                        int branch_count) {
        std::string line;
        if (!std::getline(in, line) || line != "lrc-checkpoint v1")
            throw CheckpointError("checkpoint: unrecognized header");
        std::map<std::string, std::string> header;
        while (std::getline(in, line)) {
            std::istringstream ls(line);
            std::string key;
            ls >> key;
            if (key == "done") {
                int branch = -1, candidate = -1;
                unsigned long long nodes = 0;
                if (!(ls >> branch >> candidate >> nodes))
                    throw CheckpointError("checkpoint: bad done line");
                if (branch < 0 || branch >= branch_count)
                    throw CheckpointError("checkpoint: branch index out of range");
                if (done_.insert({branch, {candidate, nodes}}).second) resumed_nodes_ += nodes;
            } else if (!key.empty()) {
                std::string rest;
                std::getline(ls, rest);
                if (!rest.empty() && rest.front() == ' ') rest.erase(0, 1);
                header[key] = rest;
            }
        }
        auto expect = [&header](const std::string& key, const std::string& want) {
            auto it = header.find(key);
            if (it == header.end() || it->second != want)
                throw CheckpointError("checkpoint: field '" + key + "' does not match this run (have '" +
                                      (it == header.end() ? std::string("<missing>") : it->second) +
                                      "', expected '" + want + "')");
        };
        expect("k", std::to_string(inst.k));
        expect("p", std::to_string(inst.p));
        expect("engine", std::string(kEngineVersion));
        expect("pruning", prunes.canonical());
        expect("branches", std::to_string(branch_count));
    }

    struct DoneRecord {
        int candidate = -1;
        unsigned long long nodes = 0;
    };

    std::string path_;
    bool active_ = false;
    std::shared_ptr<std::mutex> mu_ = std::make_shared<std::mutex>();
    std::map<int, DoneRecord> done_;
    unsigned long long resumed_nodes_ = 0;
};

// One walker per worker; owns all mutable path state, indexed by depth.
class Walker {
  public:
    Walker(const CoverInstance& inst, const PruneToggles& prunes, SharedState& shared)
        : inst_(inst), prunes_(prunes), shared_(shared) {
        const int k = inst.k;
        const int nc = static_cast<int>(inst.candidates.size());
        const int h = inst.half_range;
        avail_.assign(k + 1, std::vector<std::uint8_t>(nc, 1));
        poscnt_.assign(k + 1, std::vector<int>(h + 1, 0));
        covered_.assign(k + 1, WordBitset(h));
        uncovered_.assign(k + 1, h);
        gcds_.assign(k + 1, inst.modulus);
        chosen_.reserve(k);
    }

    // Fills the depth-0 availability tables (all candidates, nothing covered).
    void init_base() {
        auto& cnt = poscnt_[0];
        std::fill(cnt.begin(), cnt.end(), 0);
        for (const WordBitset& cov : inst_.coverage)
            cov.for_each_set([&cnt](int bit) { ++cnt[bit + 1]; });
    }

    // Expands the root node. Returns the ordered branch list (candidate
    // indices with their new-coverage counts); empty means the root prunes
    // and no cover exists at all.
    std::vector<std::pair<int, int>> analyze_root() {
        count_node();
        auto plan = make_plan(0);
        return plan.prune ? std::vector<std::pair<int, int>>{} : std::move(plan.branch);
    }

    // Explores the subtree of branches[index] with every earlier sibling
    // eliminated. Returns true when a witness was recorded.
    bool run_root_branch(const std::vector<std::pair<int, int>>& branches, int index) {
        branch_nodes_ = 0;
        avail_[1] = avail_[0];
        poscnt_[1] = poscnt_[0];
        if (prunes_.sibling)
            for (int j = 0; j < index; ++j) eliminate(1, branches[j].first);
        const auto [ci, newcov] = branches[index];
        covered_[1] = covered_[0];
        covered_[1].or_with(inst_.coverage[ci]);
        uncovered_[1] = uncovered_[0] - newcov;
        gcds_[1] = std::gcd(gcds_[0], static_cast<long long>(inst_.candidates[ci]));
        chosen_.clear();
        chosen_.push_back(ci);
        return dfs(1);
    }

    unsigned long long branch_nodes() const { return branch_nodes_; }

  private:
    struct NodePlan {
        bool prune = false;
        std::vector<std::pair<int, int>> branch;  // (candidate index, new coverage)
    };

    void count_node() {
        ++branch_nodes_;
        if (shared_.found.load(std::memory_order_relaxed)) throw CancelSearch{};
        if (shared_.budget_hit.load(std::memory_order_relaxed)) throw CancelSearch{};
        const auto n = shared_.nodes.fetch_add(1, std::memory_order_relaxed) + 1;
        if (shared_.budget != 0 && n > shared_.budget) {
            shared_.budget_hit.store(true, std::memory_order_relaxed);
            throw CancelSearch{};
        }
    }

    void eliminate(int depth, int ci) {
        avail_[depth][ci] = 0;
        auto& cnt = poscnt_[depth];
        inst_.coverage[ci].for_each_set([&cnt](int bit) { --cnt[bit + 1]; });
    }

    NodePlan make_plan(int depth) {
        NodePlan plan;
        const int k = inst_.k;
        const int h = inst_.half_range;
        const auto& avail = avail_[depth];
        const auto& covered = covered_[depth];

        int forced_pos = 0;  // 0 = branch on every available candidate
        if (uncovered_[depth] > 0 && prunes_.forced) {
            const auto& cnt = poscnt_[depth];
            int best = INT_MAX;
            for (int pos = 1; pos <= h; ++pos) {
                if (covered.test(pos - 1)) continue;
                if (cnt[pos] < best) {
                    best = cnt[pos];
                    forced_pos = pos;
                    if (best == 0) break;
                }
            }
            if (best == 0) {  // some position can never be covered
                plan.prune = true;
                return plan;
            }
        }

        const int nc = static_cast<int>(inst_.candidates.size());
        int max_new = 0;
        for (int ci = 0; ci < nc; ++ci) {
            if (!avail[ci]) continue;
            const int newcov = inst_.coverage[ci].count_and_not(covered);
            if (newcov > max_new) max_new = newcov;
            if (forced_pos == 0 || inst_.coverage[ci].test(forced_pos - 1))
                plan.branch.emplace_back(ci, newcov);
        }

        if (uncovered_[depth] > 0 && prunes_.bound &&
            static_cast<long long>(uncovered_[depth]) >
                static_cast<long long>(k - depth) * max_new) {
            plan.prune = true;
            plan.branch.clear();
            return plan;
        }

        // new coverage descending; stable keeps ties in ascending value order
        std::stable_sort(plan.branch.begin(), plan.branch.end(),
                         [](const auto& a, const auto& b) { return a.second > b.second; });
        return plan;
    }

    bool accept() {
        std::vector<long long> values;
        values.reserve(chosen_.size());
        for (int ci : chosen_) values.push_back(inst_.candidates[ci]);
        std::sort(values.begin(), values.end());
        if (!gcd_condition(values, inst_.modulus)) return false;
        shared_.record_witness(std::move(values));
        return true;
    }

    bool dfs(int depth) {
        count_node();
        const int k = inst_.k;
        if (depth == k) return uncovered_[depth] == 0 && accept();
        if (prunes_.gcd_early && depth == k - 1 && gcds_[depth] != 1) return false;

        NodePlan plan = make_plan(depth);
        if (plan.prune) return false;

        avail_[depth + 1] = avail_[depth];
        poscnt_[depth + 1] = poscnt_[depth];
        for (const auto& [ci, newcov] : plan.branch) {
            covered_[depth + 1] = covered_[depth];
            covered_[depth + 1].or_with(inst_.coverage[ci]);
            uncovered_[depth + 1] = uncovered_[depth] - newcov;
            assert(uncovered_[depth + 1] <= uncovered_[depth]);
            gcds_[depth + 1] = std::gcd(gcds_[depth], static_cast<long long>(inst_.candidates[ci]));
            chosen_.push_back(ci);
            if (dfs(depth + 1)) return true;
            chosen_.pop_back();
            if (prunes_.sibling) eliminate(depth + 1, ci);
        }
        return false;
    }

    const CoverInstance& inst_;
    const PruneToggles prunes_;
    SharedState& shared_;

    std::vector<std::vector<std::uint8_t>> avail_;  // per depth, per candidate index
    std::vector<std::vector<int>> poscnt_;          // per depth: available candidates covering pos
    std::vector<WordBitset> covered_;               // per depth
    std::vector<int> uncovered_;                    // per depth
    std::vector<long long> gcds_;                   // per depth: gcd(modulus, chosen values)
    std::vector<int> chosen_;                       // candidate indices along the path
    unsigned long long branch_nodes_ = 0;
};

}  // namespace

std::optional<BadCover> search_bad_cover(const CoverInstance& inst, const SearchConfig& cfg,
                                         SearchStats* stats) {
    SharedState shared;
    shared.budget = cfg.node_budget.value_or(0);

    Walker root(inst, cfg.prunes, shared);
    root.init_base();
    std::vector<std::pair<int, int>> branches;
    bool root_cancelled = false;
    try {
        branches = root.analyze_root();
    } catch (const CancelSearch&) {
        root_cancelled = true;  // budget smaller than the root node
    }

    Checkpoint ck;
    if (cfg.checkpoint_path) {
        ck = Checkpoint::open(*cfg.checkpoint_path, inst, cfg.prunes,
                              static_cast<int>(branches.size()));
        ck.check_branches(branches, inst);
    }

    const int nb = static_cast<int>(branches.size());
    auto branch_candidate = [&](int i) { return inst.candidates[branches[i].first]; };
    if (!root_cancelled) {
        if (cfg.sequential()) {
            for (int i = 0; i < nb; ++i) {
                if (ck.done(i)) continue;
                try {
                    if (root.run_root_branch(branches, i)) break;
                    ck.mark_done(i, branch_candidate(i), root.branch_nodes());
                } catch (const CancelSearch&) {
                    break;
                }
            }
        } else {
#if defined(_OPENMP)
            const int width = cfg.parallel_width;
#pragma omp parallel for schedule(dynamic, 1) num_threads(width)
            for (int i = 0; i < nb; ++i) {
                if (ck.done(i)) continue;
                if (shared.found.load(std::memory_order_relaxed) ||
                    shared.budget_hit.load(std::memory_order_relaxed))
                    continue;
                Walker w(inst, cfg.prunes, shared);
                w.init_base();
                try {
                    if (!w.run_root_branch(branches, i))
                        ck.mark_done(i, branch_candidate(i), w.branch_nodes());
                } catch (const CancelSearch&) {
                }
            }
#else
            for (int i = 0; i < nb; ++i) {
                if (ck.done(i)) continue;
                try {
                    if (root.run_root_branch(branches, i)) break;
                    ck.mark_done(i, branch_candidate(i), root.branch_nodes());
                } catch (const CancelSearch&) {
                    break;
                }
            }
#endif
        }
    }

    if (stats) {
        stats->nodes = shared.nodes.load() + ck.resumed_nodes();
        stats->root_branches = nb;
        stats->resumed_branches = ck.done_count();
    }

    if (shared.witness) return shared.witness;
    if (shared.budget_hit.load() || root_cancelled) throw BudgetExhausted{};
    return std::nullopt;
}

bool validate_bad_cover(const BadCover& w, const CoverInstance& inst) {
    if (static_cast<int>(w.tuple.size()) != inst.k) return false;
    if (!std::is_sorted(w.tuple.begin(), w.tuple.end())) return false;
    for (long long v : w.tuple) {
        if (v < 1 || v > inst.half_range || v % inst.p == 0) return false;
    }
    if (!gcd_condition(w.tuple, inst.modulus)) return false;
    // fresh coverage scan straight from the arithmetic, no search tables
    for (int j = 1; j <= inst.half_range; ++j) {
        bool hit = false;
        for (long long v : w.tuple) {
            if (covers(v, j, inst.k, inst.p)) {
                hit = true;
                break;
            }
        }
        if (!hit) return false;
    }
    return true;
}

PrimeCertificate verify_prime(int k, long long p, const SearchConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    const CoverInstance inst = build_instance(k, p);

    PrimeCertificate cert;
    cert.k = k;
    cert.p = p;
    cert.engine_version = kEngineVersion;
    cert.pruning = cfg.prunes.canonical();
    cert.workers = cfg.sequential() ? 1 : cfg.parallel_width;

    SearchStats stats;
    try {
        auto witness = search_bad_cover(inst, cfg, &stats);
        if (witness) {
            if (!validate_bad_cover(*witness, inst))
                throw std::logic_error("search produced a witness that does not revalidate");
            cert.verdict = Verdict::Falsified;
            cert.witness = std::move(witness);
        } else {
            cert.verdict = Verdict::Verified;
        }
    } catch (const BudgetExhausted&) {
        cert.verdict = Verdict::Inconclusive;
    }
    cert.nodes_explored = stats.nodes;
    cert.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::steady_clock::now() - t0)
                       .count();
    return cert;
}

}  // namespace lrc
