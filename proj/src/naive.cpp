#include "lrc/naive.hpp"

#include "lrc/cover.hpp"
#include "lrc/rational.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace lrc {

namespace {

// number of nondecreasing k-tuples over n values, exact
BigInt multiset_count(long long n, int k) {
    BigInt num = 1, den = 1;
    for (int i = 0; i < k; ++i) {
        num *= n + i;
        den *= i + 1;
    }
    return num / den;
}

}  // namespace

bool naive_verify(int k, long long p, unsigned long long limit_guard) {
    if (k < 3) throw std::invalid_argument("naive_verify: k must be >= 3");
    if (p < 2) throw std::invalid_argument("naive_verify: p must be >= 2");
    const long long m = static_cast<long long>(k + 1) * p;

    // residues 0..m-1 minus the k+1 multiples of p
    const long long n_values = m - (k + 1);
    const BigInt tuples = multiset_count(n_values, k);
    if (tuples > limit_guard)
        throw EnumerationGuard("naive_verify: " + tuples.str() + " tuples exceed the guard of " +
                               std::to_string(limit_guard));

    // good_t[v] bit t set iff (k+1) * min(tv mod m, m - tv mod m) >= m
    const int words = static_cast<int>((m + 63) / 64);
    std::vector<std::vector<std::uint64_t>> good(m, std::vector<std::uint64_t>(words, 0));
    for (long long v = 1; v < m; ++v) {
        if (v % p == 0) continue;
        for (long long t = 0; t < m; ++t) {
            const long long r = t * v % m;
            const long long d = r < m - r ? r : m - r;
            if (static_cast<long long>(k + 1) * d >= m)
                good[v][t >> 6] |= std::uint64_t{1} << (t & 63);
        }
    }

    std::vector<long long> tuple(k);
    std::vector<std::vector<std::uint64_t>> good_acc(k + 1,
                                                     std::vector<std::uint64_t>(words, 0));
    // all times are good for the empty tuple
    for (int w = 0; w < words; ++w) good_acc[0][w] = ~std::uint64_t{0};

    bool ok = true;
    auto enumerate = [&](auto&& self, int depth, long long min_value) -> void {
        if (!ok) return;
        if (depth == k) {
            if (!gcd_condition(tuple, m)) return;
            for (int w = 0; w < words; ++w)
                if (good_acc[k][w] != 0) return;  // some good t exists
            ok = false;                           // admissible tuple with no good time
            return;
        }
        for (long long v = min_value; v < m; ++v) {
            if (v % p == 0) continue;
            tuple[depth] = v;
            for (int w = 0; w < words; ++w) good_acc[depth + 1][w] = good_acc[depth][w] & good[v][w];
            self(self, depth + 1, v);
            if (!ok) return;
        }
    };
    enumerate(enumerate, 0, 1);
    return ok;
}

}  // namespace lrc
