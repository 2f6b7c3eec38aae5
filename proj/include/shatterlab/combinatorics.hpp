#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace shatterlab {

// Visits every k-subset of [n] in lexicographic order as an ascending index
// list. The visitor returns false to stop early; the function returns false
// iff it was stopped.
template <class Visitor>
bool for_each_combination(std::size_t n, std::size_t k, Visitor&& visit) {
    if (k > n) return true;
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    while (true) {
        if (!visit(std::span<const std::size_t>(idx))) return false;
        std::size_t i = k;
        while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
        if (i == 0) return true;
        ++idx[i - 1];
        for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

// All k-subsets of [n] as bitmasks, in lexicographic order of their index lists.
std::vector<std::uint64_t> combinations_as_masks(std::size_t n, std::size_t k);

// base^exp for small machine integers; the caller guarantees no overflow.
constexpr std::uint64_t upow(std::uint64_t base, std::size_t exp) {
    std::uint64_t r = 1;
    for (std::size_t i = 0; i < exp; ++i) r *= base;
    return r;
}

}  // namespace shatterlab
