// Runner speed sets: strictly increasing positive integers.
#pragma once

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace lrc {

struct SpeedSet {
    std::vector<long long> speeds;  // strictly increasing, all >= 1

    // Sorts the input and validates positivity/distinctness.
    static SpeedSet of(std::vector<long long> values) {
        if (values.empty()) throw std::invalid_argument("SpeedSet: empty");
        std::sort(values.begin(), values.end());
        if (values.front() < 1) throw std::invalid_argument("SpeedSet: speeds must be >= 1");
        if (std::adjacent_find(values.begin(), values.end()) != values.end())
            throw std::invalid_argument("SpeedSet: speeds must be distinct");
        return SpeedSet{std::move(values)};
    }

    int k() const { return static_cast<int>(speeds.size()); }
};

// Divides every speed by the gcd of the whole set.
inline SpeedSet reduce_by_gcd(const SpeedSet& s) {
    if (s.speeds.empty()) throw std::invalid_argument("reduce_by_gcd: empty speed set");
    long long g = 0;
    for (long long v : s.speeds) g = std::gcd(g, v);
    SpeedSet out = s;
    for (long long& v : out.speeds) v /= g;
    return out;
}

}  // namespace lrc
