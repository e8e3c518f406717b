// Direct statement check, used as the slow cross-validation oracle for the
// cover search: enumerate every k-tuple of residues (with repetition) that
// meets the gcd side condition and avoids multiples of p, and check that each
// has a time t in {0..M-1} keeping every residue at distance >= 1/(k+1).
#pragma once

#include <stdexcept>

namespace lrc {

struct EnumerationGuard : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Returns true iff every admissible tuple has a good t. Throws
// EnumerationGuard when the multiset count exceeds limit_guard.
bool naive_verify(int k, long long p, unsigned long long limit_guard = 20'000'000);

}  // namespace lrc
