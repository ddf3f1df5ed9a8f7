#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <vector>

namespace pir2 {

// All submasks of `universe` in ascending mask order, the canonical
// composition order used for segment allocation and placement. Includes the
// empty mask when include_empty is set.
inline std::vector<std::uint32_t> submasks_ascending(std::uint32_t universe,
                                                     bool include_empty) {
    std::vector<std::uint32_t> out;
    std::uint32_t s = universe;
    for (;;) {
        out.push_back(s);
        if (s == 0) break;
        s = (s - 1) & universe;
    }
    if (!include_empty) out.pop_back();  // descending order ends with 0
    std::reverse(out.begin(), out.end());
    return out;
}

inline int popcount32(std::uint32_t m) { return std::popcount(m); }

inline std::vector<int> mask_members(std::uint32_t mask) {
    std::vector<int> out;
    for (int b = 0; b < 32; ++b)
        if (mask & (1u << b)) out.push_back(b + 1);
    return out;
}

}  // namespace pir2
