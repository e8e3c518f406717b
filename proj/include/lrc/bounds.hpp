// The two closed-form bounds used by the certificate pipeline.
#pragma once

#include "lrc/rational.hpp"

#include <stdexcept>

namespace lrc {

// lcm(2, 3, ..., k+1). Divides the speed product of any counterexample.
inline BigInt lcm_small_divisors(int k) {
    if (k < 1) throw std::invalid_argument("lcm_small_divisors: k must be >= 1");
    BigInt acc = 1;
    for (int j = 2; j <= k + 1; ++j) acc = big_lcm(acc, BigInt(j));
    return acc;
}

// (binomial(k+1,2)^(k-1) / k)^k, exact. Integer for some k, a proper
// rational for others (e.g. k=6), so the return type is Rational.
inline Rational product_bound(int k) {
    if (k < 2) throw std::invalid_argument("product_bound: k must be >= 2");
    BigInt choose2 = BigInt(k) * (k + 1) / 2;
    Rational base(big_pow(choose2, static_cast<unsigned>(k - 1)), BigInt(k));
    return pow(base, static_cast<unsigned>(k));
}

}  // namespace lrc
