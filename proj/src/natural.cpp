/* natural.cpp -- arbitrary-precision modular arithmetic kernel */

#include "proth3/natural.hpp"

#include <stdexcept>
#include <utility>
#include <vector>

#include "proth3/smallmod.hpp"

namespace proth3 {

Natural modpow(const Natural& base, const Natural& exponent, const Natural& modulus) {
    if (modulus < 2)
        throw std::domain_error("modpow: modulus must be >= 2");
    Natural result = 1;
    const Natural b = base % modulus;
    Natural t;
    // left-to-right square-and-multiply; sizeinbase(0, 2) is 1, which
    // degenerates to a single no-op squaring, so exponent 0 yields 1
    const mp_bitcnt_t nbits = mpz_sizeinbase(exponent.get_mpz_t(), 2);
    for (mp_bitcnt_t i = nbits; i-- > 0;) {
        t = result * result;
        result = t % modulus;
        if (mpz_tstbit(exponent.get_mpz_t(), i)) {
            t = result * b;
            result = t % modulus;
        }
    }
    return result;
}

Natural gcd(const Natural& a, const Natural& b) {
    Natural g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

int jacobi(const Natural& a_in, const Natural& n_in) {
    if (n_in < 3 || mpz_even_p(n_in.get_mpz_t()))
        throw std::domain_error("jacobi: modulus must be odd and >= 3");
    Natural a = a_in % n_in;
    Natural n = n_in;
    int sign = 1;
    while (a != 0) {
        while (mpz_even_p(a.get_mpz_t())) {
            a >>= 1;
            const unsigned long n_mod_8 = mpz_fdiv_ui(n.get_mpz_t(), 8);
            if (n_mod_8 == 3 || n_mod_8 == 5)
                sign = -sign; // (2/n) = -1 for n = 3, 5 (mod 8)
        }
        std::swap(a, n);
        // quadratic reciprocity: flip iff both are 3 (mod 4)
        if (mpz_fdiv_ui(a.get_mpz_t(), 4) == 3 && mpz_fdiv_ui(n.get_mpz_t(), 4) == 3)
            sign = -sign;
        a %= n;
    }
    return n == 1 ? sign : 0;
}

namespace {

std::vector<Natural> distinct_prime_factors(const Natural& n) {
    std::vector<Natural> factors;
    if (n.fits_ulong_p()) {
        for (const auto& [q, mult] : smallmod::factorize(mpz_get_ui(n.get_mpz_t()))) {
            (void)mult;
            factors.emplace_back(q);
        }
        return factors;
    }
    // generic trial division; only reached for p beyond the intended range
    Natural rest = n;
    Natural f = 2;
    while (f * f <= rest) {
        if (mpz_divisible_p(rest.get_mpz_t(), f.get_mpz_t())) {
            factors.push_back(f);
            do {
                rest /= f;
            } while (mpz_divisible_p(rest.get_mpz_t(), f.get_mpz_t()));
        }
        if (f == 2)
            f = 3;
        else
            f += 2;
    }
    if (rest > 1)
        factors.push_back(rest);
    return factors;
}

} // namespace

Natural multiplicative_order(const Natural& a, const Natural& p) {
    if (p < 3 || mpz_even_p(p.get_mpz_t()))
        throw std::domain_error("multiplicative_order: p must be an odd prime");
    if (gcd(a, p) != 1)
        throw std::domain_error("multiplicative_order: argument not invertible mod p");
    const Natural p_minus_1 = p - 1;
    if (modpow(a, p_minus_1, p) != 1)
        throw std::domain_error("multiplicative_order: p is not prime (Fermat check failed)");
    Natural d = p_minus_1;
    for (const Natural& q : distinct_prime_factors(p_minus_1)) {
        while (mpz_divisible_p(d.get_mpz_t(), q.get_mpz_t()) && modpow(a, d / q, p) == 1)
            d /= q;
    }
    return d;
}

} // namespace proth3
