// Brute-force witness oracle for the lonely runner property: find a time t
// with ||t v|| >= threshold for every speed v, or report that none exists.
#pragma once

#include "lrc/rational.hpp"
#include "lrc/speed_set.hpp"

#include <optional>

namespace lrc {

struct LrWitness {
    Rational t;       // witness time, in (0, 1)
    Rational margin;  // min over speeds of ||t v||
};

// min over speeds of ||t v||, exact.
Rational lr_margin(const SpeedSet& s, const Rational& t);

// Searches the candidate set T = {(c + threshold)/v : v in s, c in 0..v-1}.
// The good set of each speed is a finite union of closed intervals whose left
// endpoints all have this form, and a nonempty intersection of closed
// interval unions contains the left endpoint of one of its components, so
// scanning T ascending is complete and returns the smallest valid t.
std::optional<LrWitness> lr_witness(const SpeedSet& s, const Rational& threshold);

// Default threshold 1/(k+1).
inline std::optional<LrWitness> lr_witness(const SpeedSet& s) {
    return lr_witness(s, Rational(1, s.k() + 1));
}

}  // namespace lrc
