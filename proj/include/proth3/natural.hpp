/* natural.hpp -- arbitrary-precision modular arithmetic kernel */

#pragma once

#include <gmpxx.h>

#include <cstdint>

namespace proth3 {

// Arbitrary-precision non-negative integer. GMP keeps the representation
// canonical; the operations below validate their domains instead of
// wrapping, so a Natural never goes negative through this interface.
using Natural = mpz_class;

/// base^exponent mod modulus by binary square-and-multiply.
/// modulus must be >= 2; result is in [0, modulus).
Natural modpow(const Natural& base, const Natural& exponent, const Natural& modulus);

/// Greatest common divisor; gcd(0, 0) = 0.
Natural gcd(const Natural& a, const Natural& b);

/// Jacobi symbol (a/n) in {-1, 0, +1} for odd n >= 3, by the standard
/// quadratic-reciprocity recursion.
int jacobi(const Natural& a, const Natural& n);

/// Least d >= 1 with a^d = 1 (mod p), for odd prime p and gcd(a, p) = 1.
/// Factors p - 1 by trial division, so p is expected to stay within the
/// filter-discovery range (millions), not cryptographic sizes.
Natural multiplicative_order(const Natural& a, const Natural& p);

} // namespace proth3
