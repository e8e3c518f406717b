#include "lrc/cover.hpp"

#include <numeric>
#include <stdexcept>
#include <string>

namespace lrc {

bool covers(long long v, long long j, int k, long long p) {
    const long long m = (k + 1) * p;
    long long r = (v % m) * (j % m) % m;
    if (r < 0) r += m;
    const long long d = r < m - r ? r : m - r;
    return (k + 1) * d < m;
}

CoverInstance build_instance(int k, long long p) {
    if (k < 3) throw std::invalid_argument("build_instance: k must be >= 3");
    if (p < 2) throw std::invalid_argument("build_instance: p must be >= 2");
    CoverInstance inst;
    inst.k = k;
    inst.p = p;
    inst.modulus = static_cast<long long>(k + 1) * p;
    inst.half_range = static_cast<int>(inst.modulus / 2);

    const int h = inst.half_range;
    if (h > 65536)
        throw std::invalid_argument("build_instance: half range " + std::to_string(h) +
                                    " exceeds the supported table size");

    for (int v = 1; v <= h; ++v)
        if (v % p != 0) inst.candidates.push_back(v);

    inst.coverage.reserve(inst.candidates.size());
    for (int v : inst.candidates) {
        WordBitset bits(h);
        for (int j = 1; j <= h; ++j)
            if (covers(v, j, k, p)) bits.set(j - 1);
        inst.coverage.push_back(std::move(bits));
    }
    return inst;
}

bool gcd_condition(std::span<const long long> tuple, long long modulus) {
    constexpr int kMaxTuple = 32;
    const int n = static_cast<int>(tuple.size());
    if (n == 0) return false;
    if (n > kMaxTuple) throw std::invalid_argument("gcd_condition: tuple too long");
    // prefix[i] = gcd(modulus, tuple[0..i)), suffix[i] = gcd(modulus, tuple[i..n))
    long long prefix[kMaxTuple + 1], suffix[kMaxTuple + 1];
    prefix[0] = modulus;
    for (int i = 0; i < n; ++i) prefix[i + 1] = std::gcd(prefix[i], tuple[i]);
    suffix[n] = modulus;
    for (int i = n - 1; i >= 0; --i) suffix[i] = std::gcd(suffix[i + 1], tuple[i]);
    for (int drop = 0; drop < n; ++drop)
        if (std::gcd(prefix[drop], suffix[drop + 1]) != 1) return false;
    return true;
}

}  // namespace lrc
