#ifndef CODEDLAB_CORE_COMBINATORICS_HPP
#define CODEDLAB_CORE_COMBINATORICS_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include "core/error.hpp"

namespace codedlab {

// C(n, k) with saturation at a large sentinel to keep budget checks simple.
inline uint64_t binomial(size_t n, size_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    uint64_t result = 1;
    for (size_t i = 1; i <= k; ++i) {
        const uint64_t num = static_cast<uint64_t>(n - k + i);
        if (result > (~0ULL / 2) / std::max<uint64_t>(num, 1)) return ~0ULL / 2;
        result = result * num / i;
    }
    return result;
}

// Calls fn on every k-subset of {0..n-1} in lexicographic order.
inline void for_each_combination(size_t n, size_t k,
                                 const std::function<void(const std::vector<size_t>&)>& fn) {
    require(k <= n, ErrorKind::InvalidParameter, "combination size exceeds ground set");
    std::vector<size_t> comb(k);
    for (size_t i = 0; i < k; ++i) comb[i] = i;
    for (;;) {
        fn(comb);
        if (k == 0) return;
        size_t pos = k;
        while (pos > 0) {
            --pos;
            if (comb[pos] != pos + n - k) {
                ++comb[pos];
                for (size_t q = pos + 1; q < k; ++q) comb[q] = comb[q - 1] + 1;
                break;
            }
            if (pos == 0) return;
        }
    }
}

// Complement of a sorted subset within {0..n-1}.
inline std::vector<size_t> complement_set(size_t n, const std::vector<size_t>& subset) {
    std::vector<size_t> out;
    out.reserve(n - subset.size());
    size_t p = 0;
    for (size_t i = 0; i < n; ++i) {
        if (p < subset.size() && subset[p] == i) {
            ++p;
        } else {
            out.push_back(i);
        }
    }
    return out;
}

}  // namespace codedlab

#endif
