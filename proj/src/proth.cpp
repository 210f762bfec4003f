/* proth.cpp -- the integer family N(e) = 3*2^e + 1 */

#include "proth3/proth.hpp"

#include <mutex>
#include <stdexcept>

#include "proth3/smallmod.hpp"

namespace proth3::family {

Natural value(uint64_t e) {
    Natural v = kMultiplier;
    mpz_mul_2exp(v.get_mpz_t(), v.get_mpz_t(), e);
    v += 1;
    return v;
}

uint64_t bit_length(uint64_t e) {
    // 2^(e+1) <= 3*2^e < 2^(e+2) and the +1 never carries for e >= 1;
    // N(0) = 4 needs 3 bits as well
    return e == 0 ? 3 : e + 2;
}

uint64_t decimal_digits(uint64_t e) {
    const Natural n = value(e);
    size_t digits = mpz_sizeinbase(n.get_mpz_t(), 10); // exact or one high
    if (digits > 1) {
        Natural pow10;
        mpz_ui_pow_ui(pow10.get_mpz_t(), 10, digits - 1);
        if (n < pow10)
            --digits;
    }
    return digits;
}

uint64_t OrderCache::order_of_two(uint64_t p) {
    {
        std::shared_lock lock(mutex_);
        if (auto it = orders_.find(p); it != orders_.end())
            return it->second;
    }
    std::unique_lock lock(mutex_);
    if (auto it = orders_.find(p); it != orders_.end())
        return it->second;
    const uint64_t order = smallmod::order_mod(2, p);
    orders_.emplace(p, order);
    return order;
}

uint64_t residue_mod(uint64_t e, uint64_t p, OrderCache& cache) {
    if (p < 3 || (p & 1) == 0)
        throw std::domain_error("residue_mod: p must be an odd prime");
    const uint64_t order = cache.order_of_two(p);
    const uint64_t pow2 = smallmod::powmod(2, e % order, p);
    return static_cast<uint64_t>((static_cast<unsigned __int128>(kMultiplier) * pow2 + 1) % p);
}

uint64_t residue_mod(uint64_t e, uint64_t p) {
    OrderCache cache;
    return residue_mod(e, p, cache);
}

} // namespace proth3::family
