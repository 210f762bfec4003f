/* smallmod.hpp -- machine-word modular arithmetic for the sieving side */

#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace proth3::smallmod {

uint64_t mulmod(uint64_t a, uint64_t b, uint64_t m);
uint64_t powmod(uint64_t a, uint64_t e, uint64_t m);

/// Modular inverse of a mod m; gcd(a, m) must be 1.
uint64_t inverse(uint64_t a, uint64_t m);

/// Exact primality below 2^64 (deterministic Miller-Rabin base set).
bool is_prime(uint64_t n);

std::vector<uint32_t> primes_up_to(uint32_t bound);

/// Prime factorization by trial division, ascending factors.
std::vector<std::pair<uint64_t, int>> factorize(uint64_t n);

/// Multiplicative order of a mod p for odd prime p, gcd(a, p) = 1.
uint64_t order_mod(uint64_t a, uint64_t p);

} // namespace proth3::smallmod
