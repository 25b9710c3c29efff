#ifndef FCIPLUS_COMBINATIONS_HPP
#define FCIPLUS_COMBINATIONS_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace fciplus {

/// Visits every size-`k` subset of `pool` in lexicographic order of positions.
/// The visitor receives the subset as a vector and returns true to stop early.
/// Returns true if the visitor stopped the enumeration.
template <typename T, typename Visitor>
bool for_each_combination(std::span<const T> pool, std::size_t k, Visitor&& visit) {
    const std::size_t n = pool.size();
    if (k > n) return false;
    std::vector<std::size_t> pos(k);
    for (std::size_t i = 0; i < k; ++i) pos[i] = i;
    std::vector<T> current(k);
    while (true) {
        for (std::size_t i = 0; i < k; ++i) current[i] = pool[pos[i]];
        if (visit(static_cast<const std::vector<T>&>(current))) return true;
        // advance the rightmost position that still has room
        std::size_t i = k;
        while (i > 0 && pos[i - 1] == n - k + (i - 1)) --i;
        if (i == 0) return false;
        ++pos[i - 1];
        for (std::size_t j = i; j < k; ++j) pos[j] = pos[j - 1] + 1;
    }
}

template <typename T, typename Visitor>
bool for_each_combination(const std::vector<T>& pool, std::size_t k, Visitor&& visit) {
    return for_each_combination(std::span<const T>(pool), k, std::forward<Visitor>(visit));
}

/// All subsets of `pool` in ascending size, lexicographic within a size.
template <typename T, typename Visitor>
bool for_each_subset_by_size(const std::vector<T>& pool, std::size_t max_size, Visitor&& visit) {
    for (std::size_t k = 0; k <= max_size && k <= pool.size(); ++k) {
        if (for_each_combination(pool, k, visit)) return true;
    }
    return false;
}

}  // namespace fciplus

#endif  // FCIPLUS_COMBINATIONS_HPP
