/* test_family.cpp -- N(e) evaluation and residue arithmetic */

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <thread>

#include "proth3/proth.hpp"
#include "proth3/smallmod.hpp"

using namespace proth3;

TEST_CASE("value known members") {
    CHECK(family::value(0) == 4);
    CHECK(family::value(1) == 7);
    CHECK(family::value(2) == 13);
    CHECK(family::value(3) == 25);
    CHECK(family::value(7) == 385);
    CHECK(family::value(20) == 3145729);
}

TEST_CASE("value handles very large exponents") {
    const Natural n = family::value(200000);
    CHECK(mpz_sizeinbase(n.get_mpz_t(), 2) == 200002);
    CHECK(mpz_fdiv_ui(n.get_mpz_t(), 3) == 1);
}

TEST_CASE("residue_mod known values") {
    CHECK(family::residue_mod(3, 5) == 0);
    CHECK(family::residue_mod(40, 7) == 0);
    CHECK(family::residue_mod(24, 61) == 0);
    CHECK(family::residue_mod(2, 5) == 3);
}

TEST_CASE("residue_mod rejects p = 2") {
    CHECK_THROWS_AS(family::residue_mod(5, 2), std::domain_error);
}

TEST_CASE("residue_mod agrees with full evaluation for e <= 2000, p <= 10^4") {
    const auto primes = smallmod::primes_up_to(10000);
    family::OrderCache cache;
    for (uint64_t e = 0; e <= 2000; ++e) {
        const Natural n = family::value(e);
        CHECK(mpz_fdiv_ui(n.get_mpz_t(), 3) == 1); // 3 never divides N(e)
        for (uint32_t p : primes) {
            if (p == 2)
                continue;
            CHECK(family::residue_mod(e, p, cache) == mpz_fdiv_ui(n.get_mpz_t(), p));
        }
    }
}

TEST_CASE("bit_length is e + 2 from e = 1 on") {
    CHECK(family::bit_length(0) == 3);
    CHECK(family::bit_length(1) == 3);
    CHECK(family::bit_length(20) == 22);
    for (uint64_t e = 1; e <= 10000; ++e)
        CHECK(family::bit_length(e) == e + 2);
    for (uint64_t e = 0; e <= 300; ++e) {
        const Natural n = family::value(e);
        CHECK(family::bit_length(e) == mpz_sizeinbase(n.get_mpz_t(), 2));
    }
}

TEST_CASE("decimal_digits matches the printed value") {
    CHECK(family::decimal_digits(0) == 1);  // 4
    CHECK(family::decimal_digits(1) == 1);  // 7
    CHECK(family::decimal_digits(2) == 2);  // 13
    CHECK(family::decimal_digits(20) == 7); // 3145729
    for (uint64_t e = 0; e <= 300; ++e)
        CHECK(family::decimal_digits(e) == family::value(e).get_str().size());
}

TEST_CASE("order cache is stable under concurrent readers") {
    family::OrderCache cache;
    const auto primes = smallmod::primes_up_to(2000);
    std::vector<std::thread> pool;
    std::atomic<bool> ok{true};
    for (int t = 0; t < 4; ++t) {
        pool.emplace_back([&]() {
            for (uint32_t p : primes) {
                if (p == 2)
                    continue;
                if (cache.order_of_two(p) != smallmod::order_mod(2, p))
                    ok = false;
            }
        });
    }
    for (auto& th : pool)
        th.join();
    CHECK(ok);
}
