/* filters.hpp -- proof-carrying divisibility rules for N(e) and the
   covering analysis that separates proved classes from open ones */

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "proth3/proth.hpp"

namespace proth3::filters {

// "p divides N(e) for every e = r (mod m)". Valid when ord_p(2) | m and
// p | N(r); both facts are machine-checked by verify_filter.
struct ResidueFilter {
    uint64_t p = 0; // odd prime divisor
    uint64_t m = 0; // period
    uint64_t r = 0; // residue, 0 <= r < m

    bool matches(uint64_t e) const { return e % m == r; }
    friend bool operator==(const ResidueFilter&, const ResidueFilter&) = default;
};

// Arithmetic progression of exponents, r mod m with 0 <= r < m.
struct ExponentClass {
    uint64_t r = 0;
    uint64_t m = 1;
    friend bool operator==(const ExponentClass&, const ExponentClass&) = default;
};

struct FilterVerdict {
    bool valid = false;
    std::string reason; // names the failing condition when invalid
    uint64_t order = 0;  // ord_p(2)
    uint64_t pow2_r = 0; // 2^r mod p, so 1 + 3*pow2_r = N(r) (mod p)
};

/// Check the two proof obligations of a filter: ord_p(2) | m and
/// residue_mod(r, p) = 0. Throws if p is not an odd prime.
FilterVerdict verify_filter(const ResidueFilter& f);

/// Solve 3*2^r = -1 (mod p) over one period of 2. At most one r in
/// [0, ord_p(2)) can satisfy it; returns the canonical filter
/// (p, ord_p(2), r) or nullopt. p = 3 always yields nullopt.
std::optional<ResidueFilter> find_filter_for_prime(uint64_t p);

/// All filters for odd primes p <= prime_bound, ascending by p.
/// Empty for prime_bound < 5.
std::vector<ResidueFilter> discover_filters(uint64_t prime_bound, unsigned threads = 0);

/// First filter (filters assumed ascending by p) matching e, or nullptr.
/// A match means f.p | N(e); compositeness additionally needs f.p < N(e),
/// which the caller enforces.
const ResidueFilter* apply_filters(uint64_t e, std::span<const ResidueFilter> filters);

struct CoveredClass {
    ExponentClass cls;
    ResidueFilter by;
};

struct CoverReport {
    std::vector<ExponentClass> targets;
    uint64_t combined_modulus = 1;        // L = lcm of target and filter moduli
    std::vector<CoveredClass> covered;    // ascending by residue
    std::vector<ExponentClass> uncovered; // ascending by residue
};

inline constexpr uint64_t kDefaultLcmBound = 1000000000;

/// Refine the targets mod L and mark every refined class covered (with
/// the first matching filter, ascending p) or uncovered. Throws
/// std::overflow_error when L would exceed lcm_bound.
CoverReport covering_gap(std::span<const ExponentClass> targets,
                         std::span<const ResidueFilter> filters,
                         uint64_t lcm_bound = kDefaultLcmBound);

// Filter set file format: header line "#proth3-filters v1", then one
// "p,m,r" decimal record per line, ascending by p.
inline constexpr std::string_view kFiltersHeader = "#proth3-filters v1";
void write_filters(std::ostream& out, std::span<const ResidueFilter> filters);
std::vector<ResidueFilter> read_filters(std::istream& in);

} // namespace proth3::filters
