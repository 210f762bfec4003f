/* claims.hpp -- first-class encodings of the six statements about N(e):
   four proved divisor claims (P1, P2, P3a, P3b) and two composite
   conjectures (C1, C2) */

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "proth3/filters.hpp"
#include "proth3/primality.hpp"

namespace proth3::claims {

enum class Kind { Divisor, Composite };

// e(n) = base + step*n
struct AffineMap {
    uint64_t base = 0;
    uint64_t step = 1;
    uint64_t e_of(uint64_t n) const { return base + step * n; }
};

struct Claim {
    std::string id; // stable CLI token: P1, P2, P3a, P3b, C1, C2
    AffineMap map;
    std::vector<filters::ExponentClass> n_classes; // congruence classes over n
    Kind kind = Kind::Composite;
    uint64_t divisor = 0;  // set for Kind::Divisor
    std::string statement; // human-readable one-liner
};

/// The six built-in claims, fixed order P1, P2, P3a, P3b, C1, C2.
const std::vector<Claim>& builtin();

/// Lookup by id token; nullptr when unknown.
const Claim* find(std::string_view id);

/// Rewrite the claim's n-classes as classes over e: each (r mod m)
/// becomes (base + step*r) mod (step*m). Ascending by residue.
std::vector<filters::ExponentClass> normalized_exponent_classes(const Claim& c);

/// All n <= n_max lying in the claim's n-classes, ascending.
std::vector<uint64_t> n_values(const Claim& c, uint64_t n_max);

// A divisor claim's soundness certificate is one verified filter per
// normalized e-class, with the two proof facts spelled out.
struct CertificateEntry {
    filters::ResidueFilter filter; // (divisor, m', r')
    uint64_t order = 0;            // ord_p(2)
    uint64_t pow2_r = 0;           // 2^r' mod p
};

struct CertificateResult {
    bool ok = false;
    std::vector<CertificateEntry> entries;
    std::string failure; // names the class and failing condition
};

/// Mechanize the claim's proof: verify (divisor, m', r') for every
/// normalized e-class. Divisor claims only.
CertificateResult divisor_certificate(const Claim& c);

struct NumericConfig {
    uint64_t filter_prime_bound = 100000;
    uint64_t trial_bound = 1000000;
    uint64_t seed = primality::kDefaultSeed;
    unsigned threads = 0; // 0 = hardware parallelism
    // non-empty overrides discovery (a pre-built set from `discover --out`)
    std::vector<filters::ResidueFilter> filter_set;
};

struct Violation {
    uint64_t n = 0;
    uint64_t e = 0;
    std::string detail;
};

struct NumericReport {
    uint64_t checks = 0;
    std::vector<Violation> violations;
    // classification outcome counts, composite claims only
    std::map<std::string, uint64_t> outcome_counts;
};

/// Empirically check the claim for every n <= n_max in its n-classes.
/// Divisor claims check residue_mod(e(n), p) = 0; composite claims run
/// the classification pipeline and require a non-prime outcome.
/// Violations are data, not errors.
NumericReport verify_numeric(const Claim& c, uint64_t n_max,
                             const NumericConfig& config = {});

} // namespace proth3::claims
