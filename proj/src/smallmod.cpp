/* smallmod.cpp -- machine-word modular arithmetic */

#include "proth3/smallmod.hpp"

#include <stdexcept>

namespace proth3::smallmod {

uint64_t mulmod(uint64_t a, uint64_t b, uint64_t m) {
    return static_cast<uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

uint64_t powmod(uint64_t a, uint64_t e, uint64_t m) {
    if (m == 0)
        throw std::domain_error("powmod: zero modulus");
    if (m == 1)
        return 0;
    uint64_t result = 1;
    a %= m;
    while (e > 0) {
        if (e & 1)
            result = mulmod(result, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return result;
}

uint64_t inverse(uint64_t a, uint64_t m) {
    // extended Euclid on signed 128-bit accumulators
    __int128 t = 0, new_t = 1;
    __int128 r = m, new_r = a % m;
    while (new_r != 0) {
        const __int128 q = r / new_r;
        __int128 tmp = t - q * new_t;
        t = new_t;
        new_t = tmp;
        tmp = r - q * new_r;
        r = new_r;
        new_r = tmp;
    }
    if (r != 1)
        throw std::domain_error("inverse: argument not invertible");
    if (t < 0)
        t += m;
    return static_cast<uint64_t>(t);
}

namespace {

// Strong-probable-prime check; n odd >= 3, d*2^s = n-1 with d odd.
bool strong_prp(uint64_t n, uint64_t base, uint64_t d, int s) {
    const uint64_t a = base % n;
    if (a <= 1 || a == n - 1)
        return true; // collapsed base proves nothing
    uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1)
        return true;
    for (int i = 1; i < s; ++i) {
        x = mulmod(x, x, n);
        if (x == n - 1)
            return true;
    }
    return false;
}

// First 12 primes: deterministic below 3.3*10^24, so exact for uint64_t.
constexpr uint64_t kSmallBases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

} // namespace

bool is_prime(uint64_t n) {
    if (n < 2)
        return false;
    for (uint64_t p : kSmallBases) {
        if (n % p == 0)
            return n == p;
    }
    uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (uint64_t base : kSmallBases) {
        if (!strong_prp(n, base, d, s))
            return false;
    }
    return true;
}

std::vector<uint32_t> primes_up_to(uint32_t bound) {
    std::vector<uint32_t> primes;
    if (bound < 2)
        return primes;
    // odd-only sieve; composite[i] marks 2i+1
    const size_t half = static_cast<size_t>(bound) / 2 + 1;
    std::vector<bool> composite(half, false);
    for (size_t i = 1; i < half; ++i) {
        if (composite[i])
            continue;
        const uint64_t p = 2 * i + 1;
        if (p * p > bound)
            break;
        for (uint64_t j = (p * p) / 2; j < half; j += p)
            composite[j] = true;
    }
    primes.push_back(2);
    for (size_t i = 1; i < half; ++i) {
        const uint64_t p = 2 * i + 1;
        if (p > bound)
            break;
        if (!composite[i])
            primes.push_back(static_cast<uint32_t>(p));
    }
    return primes;
}

std::vector<std::pair<uint64_t, int>> factorize(uint64_t n) {
    std::vector<std::pair<uint64_t, int>> factors;
    if (n < 2)
        return factors;
    int twos = 0;
    while ((n & 1) == 0) {
        n >>= 1;
        ++twos;
    }
    if (twos > 0)
        factors.emplace_back(2, twos);
    for (uint64_t f = 3; f * f <= n; f += 2) {
        if (n % f != 0)
            continue;
        int count = 0;
        do {
            n /= f;
            ++count;
        } while (n % f == 0);
        factors.emplace_back(f, count);
    }
    if (n > 1)
        factors.emplace_back(n, 1);
    return factors;
}

uint64_t order_mod(uint64_t a, uint64_t p) {
    if (p < 3 || (p & 1) == 0)
        throw std::domain_error("order_mod: modulus must be an odd prime");
    a %= p;
    if (a == 0)
        throw std::domain_error("order_mod: argument not invertible");
    // a^(p-1) = 1 by Fermat; strip prime factors of p-1 while the power
    // stays 1.
    uint64_t d = p - 1;
    for (const auto& [q, mult] : factorize(p - 1)) {
        (void)mult;
        while (d % q == 0 && powmod(a, d / q, p) == 1)
            d /= q;
    }
    return d;
}

} // namespace proth3::smallmod
