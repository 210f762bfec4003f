/* proth.hpp -- the integer family N(e) = 3*2^e + 1 */

#pragma once

#include <cstdint>
#include <shared_mutex>
#include <unordered_map>

#include "proth3/natural.hpp"

namespace proth3::family {

// Family multiplier. The whole toolkit is specific to k = 3; generalizing
// to other k*2^e + 1 families is a non-goal.
inline constexpr uint64_t kMultiplier = 3;

/// N(e) = 3*2^e + 1, materialized exactly.
Natural value(uint64_t e);

/// Bit length of N(e): e + 2 for e >= 1, 3 for e = 0.
uint64_t bit_length(uint64_t e);

/// Exact decimal digit count of N(e).
uint64_t decimal_digits(uint64_t e);

// Cache of ord_p(2) keyed by p, shared across many exponents of a filter
// set. Populate-once; safe for concurrent readers.
class OrderCache {
public:
    uint64_t order_of_two(uint64_t p);

private:
    std::shared_mutex mutex_;
    std::unordered_map<uint64_t, uint64_t> orders_;
};

/// N(e) mod p for odd prime p, computed through 2^(e mod ord_p(2));
/// never materializes N(e).
uint64_t residue_mod(uint64_t e, uint64_t p, OrderCache& cache);
uint64_t residue_mod(uint64_t e, uint64_t p);

} // namespace proth3::family
