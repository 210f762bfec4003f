/* test_filters.cpp -- filter verification, discovery, covering analysis */

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>
#include <sstream>

#include "proth3/filters.hpp"
#include "proth3/smallmod.hpp"

using namespace proth3;
using filters::ExponentClass;
using filters::ResidueFilter;

TEST_CASE("verify_filter accepts the three proved filters") {
    const auto v1 = filters::verify_filter({5, 4, 3});
    CHECK(v1.valid);
    CHECK(v1.order == 4);
    CHECK(v1.pow2_r == 3); // 2^3 = 8 = 3 (mod 5)

    const auto v2 = filters::verify_filter({7, 3, 1});
    CHECK(v2.valid);
    CHECK(v2.order == 3);
    CHECK(v2.pow2_r == 2);

    const auto v3 = filters::verify_filter({61, 60, 24});
    CHECK(v3.valid);
    CHECK(v3.order == 60);
    CHECK(v3.pow2_r == 20); // 2^24 = 20 (mod 61), 1 + 3*20 = 0 (mod 61)
}

TEST_CASE("verify_filter accepts any multiple of the order as period") {
    CHECK(filters::verify_filter({7, 60, 40}).valid); // 2^40 = 2 (mod 7)
    CHECK(filters::verify_filter({7, 60, 4}).valid);
    CHECK(filters::verify_filter({5, 8, 7}).valid);
}

TEST_CASE("verify_filter names the failing condition") {
    const auto bad_residue = filters::verify_filter({5, 4, 2}); // N(2) = 13, 5 does not divide
    CHECK_FALSE(bad_residue.valid);
    CHECK(bad_residue.reason.find("residue fact") != std::string::npos);

    const auto bad_order = filters::verify_filter({5, 6, 3}); // ord_5(2) = 4 does not divide 6
    CHECK_FALSE(bad_order.valid);
    CHECK(bad_order.reason.find("order fact") != std::string::npos);

    const auto bad_range = filters::verify_filter({5, 4, 4});
    CHECK_FALSE(bad_range.valid);
    CHECK(bad_range.reason.find("out of range") != std::string::npos);
}

TEST_CASE("verify_filter rejects non-prime p") {
    CHECK_THROWS_AS(filters::verify_filter({9, 6, 1}), std::invalid_argument);
    CHECK_THROWS_AS(filters::verify_filter({2, 1, 0}), std::invalid_argument);
}

TEST_CASE("find_filter_for_prime known answers") {
    CHECK(filters::find_filter_for_prime(5) == ResidueFilter{5, 4, 3});
    CHECK(filters::find_filter_for_prime(7) == ResidueFilter{7, 3, 1});
    CHECK(filters::find_filter_for_prime(11) == ResidueFilter{11, 10, 7});
    CHECK(filters::find_filter_for_prime(13) == ResidueFilter{13, 12, 2});
    CHECK_FALSE(filters::find_filter_for_prime(41).has_value());
    CHECK_FALSE(filters::find_filter_for_prime(3).has_value());
    CHECK_THROWS_AS(filters::find_filter_for_prime(9), std::invalid_argument);
    CHECK_THROWS_AS(filters::find_filter_for_prime(4), std::invalid_argument);
}

TEST_CASE("discover_filters ascending and exact at small bounds") {
    const std::vector<ResidueFilter> expected13 = {
        {5, 4, 3}, {7, 3, 1}, {11, 10, 7}, {13, 12, 2}};
    CHECK(filters::discover_filters(13) == expected13);
    const std::vector<ResidueFilter> expected7 = {{5, 4, 3}, {7, 3, 1}};
    CHECK(filters::discover_filters(7) == expected7);
    CHECK(filters::discover_filters(4).empty());
}

TEST_CASE("discovered filters all pass verification and uniqueness scan") {
    const auto found = filters::discover_filters(10000);
    std::set<uint64_t> primes_with_filter;
    for (const ResidueFilter& f : found) {
        CHECK(filters::verify_filter(f).valid);
        CHECK(f.m == smallmod::order_mod(2, f.p));
        primes_with_filter.insert(f.p);
        // independent scan of the whole period: exactly one solution
        uint64_t solutions = 0;
        uint64_t solution_r = 0;
        uint64_t pow2 = 1;
        for (uint64_t r = 0; r < f.m; ++r) {
            if ((3 * pow2 + 1) % f.p == 0) {
                ++solutions;
                solution_r = r;
            }
            pow2 = pow2 * 2 % f.p;
        }
        CHECK(solutions == 1);
        CHECK(solution_r == f.r);
    }
    // primes without a filter really have no solution over a full period
    for (uint32_t p : smallmod::primes_up_to(500)) {
        if (p < 5 || primes_with_filter.count(p) != 0)
            continue;
        const uint64_t order = smallmod::order_mod(2, p);
        uint64_t pow2 = 1;
        for (uint64_t r = 0; r < order; ++r) {
            CHECK((3 * pow2 + 1) % p != 0);
            pow2 = pow2 * 2 % p;
        }
    }
}

TEST_CASE("filter soundness by exact division") {
    for (const ResidueFilter& f : filters::discover_filters(1000)) {
        for (uint64_t k = 0; k < 20; ++k) {
            const Natural n = family::value(f.r + k * f.m);
            CHECK(mpz_divisible_ui_p(n.get_mpz_t(), f.p));
        }
    }
}

TEST_CASE("apply_filters picks the smallest matching prime") {
    const auto set13 = filters::discover_filters(13);
    const ResidueFilter* hit = filters::apply_filters(43, set13);
    REQUIRE(hit != nullptr);
    CHECK(*hit == ResidueFilter{5, 4, 3});
    hit = filters::apply_filters(40, set13);
    REQUIRE(hit != nullptr);
    CHECK(*hit == ResidueFilter{7, 3, 1});
    CHECK(filters::apply_filters(60, set13) == nullptr);
}

TEST_CASE("covering_gap separates covered from open classes") {
    const auto set13 = filters::discover_filters(13);

    const ExponentClass conj1[] = {{0, 60}, {20, 60}};
    const auto gap = filters::covering_gap(conj1, set13);
    CHECK(gap.combined_modulus == 60);
    CHECK(gap.covered.empty());
    REQUIRE(gap.uncovered.size() == 2);
    CHECK(gap.uncovered[0] == ExponentClass{0, 60});
    CHECK(gap.uncovered[1] == ExponentClass{20, 60});

    const ExponentClass prop2[] = {{40, 60}};
    const auto covered = filters::covering_gap(prop2, set13);
    CHECK(covered.uncovered.empty());
    REQUIRE(covered.covered.size() == 1);
    CHECK(covered.covered[0].cls == ExponentClass{40, 60});
    CHECK(covered.covered[0].by == ResidueFilter{7, 3, 1});

    const ExponentClass prop1[] = {{3, 4}};
    const ResidueFilter only5[] = {{5, 4, 3}};
    const auto p1 = filters::covering_gap(prop1, only5);
    CHECK(p1.combined_modulus == 4);
    CHECK(p1.uncovered.empty());
    REQUIRE(p1.covered.size() == 1);
}

TEST_CASE("covering_gap refines target classes to the combined modulus") {
    // one coarse target, refined mod 12 by filters with periods 4 and 3
    const ExponentClass coarse[] = {{1, 2}};
    const ResidueFilter set[] = {{5, 4, 3}, {7, 3, 1}};
    const auto gap = filters::covering_gap(coarse, set);
    CHECK(gap.combined_modulus == 12);
    CHECK(gap.covered.size() + gap.uncovered.size() == 6);
    std::set<uint64_t> seen;
    for (const auto& c : gap.covered) {
        CHECK(c.cls.m == 12);
        seen.insert(c.cls.r);
    }
    for (const auto& c : gap.uncovered) {
        CHECK(c.m == 12);
        seen.insert(c.r);
    }
    CHECK(seen == std::set<uint64_t>{1, 3, 5, 7, 9, 11});
    // e = 3, 7, 11 (mod 4 -> 3) covered by 5; e = 1 (mod 3) covered by 7
    for (const auto& c : gap.covered)
        CHECK((c.cls.r % 4 == 3 || c.cls.r % 3 == 1));
    for (const auto& c : gap.uncovered) {
        CHECK(c.r % 4 != 3);
        CHECK(c.r % 3 != 1);
    }
}

TEST_CASE("covering_gap enforces the combined modulus bound") {
    const ExponentClass targets[] = {{0, 60}};
    const auto set = filters::discover_filters(100);
    CHECK_THROWS_AS(filters::covering_gap(targets, set, 100), std::overflow_error);
}

TEST_CASE("covering_gap rejects malformed targets") {
    const ExponentClass bad[] = {{4, 4}};
    CHECK_THROWS_AS(filters::covering_gap(bad, {}), std::invalid_argument);
}

TEST_CASE("adding filters never shrinks the covered set") {
    std::mt19937_64 rng(99);
    std::vector<ResidueFilter> pool = filters::discover_filters(13);
    pool.push_back({61, 60, 24});
    const ExponentClass targets[] = {{0, 60}, {20, 60}, {44, 60}, {1, 6}};
    const auto full = filters::covering_gap(targets, pool);
    std::set<uint64_t> covered_full;
    for (const auto& c : full.covered)
        covered_full.insert(c.cls.r);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<ResidueFilter> subset;
        for (const auto& f : pool) {
            if (rng() % 2 == 0)
                subset.push_back(f);
        }
        const auto partial = filters::covering_gap(targets, subset);
        // lift the subset's covered residues to the full combined modulus
        const uint64_t ratio = full.combined_modulus / partial.combined_modulus;
        REQUIRE(partial.combined_modulus * ratio == full.combined_modulus);
        for (const auto& c : partial.covered) {
            for (uint64_t k = 0; k < ratio; ++k)
                CHECK(covered_full.count(c.cls.r + k * partial.combined_modulus) == 1);
        }
    }
}

TEST_CASE("filter set serialization round trip") {
    const auto set = filters::discover_filters(200);
    std::ostringstream out;
    filters::write_filters(out, set);
    std::istringstream in(out.str());
    CHECK(filters::read_filters(in) == set);

    std::istringstream bad_header("#wrong v1\n5,4,3\n");
    CHECK_THROWS_AS(filters::read_filters(bad_header), std::runtime_error);

    std::istringstream unordered("#proth3-filters v1\n7,3,1\n5,4,3\n");
    CHECK_THROWS_AS(filters::read_filters(unordered), std::runtime_error);

    std::istringstream malformed("#proth3-filters v1\n5;4;3\n");
    CHECK_THROWS_AS(filters::read_filters(malformed), std::runtime_error);
}
