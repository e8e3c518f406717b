#include "lrc/lr_oracle.hpp"

#include <algorithm>

namespace lrc {

Rational lr_margin(const SpeedSet& s, const Rational& t) {
    if (s.speeds.empty()) throw std::invalid_argument("lr_margin: empty speed set");
    Rational best(1, 2);
    for (long long v : s.speeds) {
        Rational d = fractional_distance(t.num() * v, t.den());
        if (d < best) best = d;
    }
    return best;
}

std::optional<LrWitness> lr_witness(const SpeedSet& s, const Rational& threshold) {
    if (s.speeds.empty()) throw std::invalid_argument("lr_witness: empty speed set");
    if (!(threshold > Rational(0) && threshold <= Rational(1, 2)))
        throw std::invalid_argument("lr_witness: threshold must be in (0, 1/2]");

    std::vector<Rational> candidates;
    long long total = 0;
    for (long long v : s.speeds) total += v;
    candidates.reserve(static_cast<size_t>(total));
    for (long long v : s.speeds)
        for (long long c = 0; c < v; ++c)
            candidates.emplace_back(threshold.num() + c * threshold.den(), threshold.den() * v);

    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    for (const Rational& t : candidates) {
        Rational m = lr_margin(s, t);
        if (m >= threshold) return LrWitness{t, m};
    }
    return std::nullopt;
}

}  // namespace lrc
