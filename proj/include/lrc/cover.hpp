// Coverage tables for the bad-cover search modulo M = (k+1)p.
//
// Candidate v covers position j when ||jv/M|| < 1/(k+1), i.e. time j/M is bad
// for speed v. By the reflection j <-> M-j (and v <-> M-v) both candidates and
// positions are folded into {1, ..., floor(M/2)}; position 0 is always covered
// and excluded. Candidates divisible by p are excluded.
#pragma once

#include "lrc/word_bitset.hpp"

#include <span>
#include <vector>

namespace lrc {

// Exact integer form of ||v j / M|| < 1/(k+1):  (k+1) * min(r, M-r) < M
// with r = v j mod M. Inputs are reduced mod M, so reflection identities
// hold verbatim: covers(v, j) == covers(v, M-j) == covers(M-v, j).
bool covers(long long v, long long j, int k, long long p);

struct CoverInstance {
    int k = 0;
    long long p = 0;
    long long modulus = 0;  // (k+1) * p
    int half_range = 0;     // floor(modulus / 2)

    std::vector<int> candidates;       // {1..half_range} \ pN, ascending
    std::vector<WordBitset> coverage;  // per candidate; bit j-1 <-> position j
};

// Precomputes the per-candidate coverage bit arrays. Rejects k < 3 and p < 2.
CoverInstance build_instance(int k, long long p);

// True iff every index subset of size |tuple|-1, together with the modulus,
// has gcd 1. Index subsets, so repeated values are handled per copy.
bool gcd_condition(std::span<const long long> tuple, long long modulus);

}  // namespace lrc
