/* filters.cpp -- divisibility rules for N(e) and covering analysis */

#include "proth3/filters.hpp"

#include <algorithm>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "proth3/parallel.hpp"
#include "proth3/smallmod.hpp"

namespace proth3::filters {

FilterVerdict verify_filter(const ResidueFilter& f) {
    if (f.p < 3 || (f.p & 1) == 0 || !smallmod::is_prime(f.p))
        throw std::invalid_argument("verify_filter: p = " + std::to_string(f.p) +
                                    " is not an odd prime");
    FilterVerdict v;
    if (f.m == 0 || f.r >= f.m) {
        v.reason = "residue out of range (need 0 <= r < m)";
        return v;
    }
    v.order = smallmod::order_mod(2, f.p);
    v.pow2_r = smallmod::powmod(2, f.r % v.order, f.p);
    if (f.m % v.order != 0) {
        v.reason = "order fact fails: ord_" + std::to_string(f.p) + "(2) = " +
                   std::to_string(v.order) + " does not divide m = " + std::to_string(f.m);
        return v;
    }
    const uint64_t residue = family::residue_mod(f.r, f.p);
    if (residue != 0) {
        v.reason = "residue fact fails: N(" + std::to_string(f.r) + ") = " +
                   std::to_string(residue) + " (mod " + std::to_string(f.p) + "), not 0";
        return v;
    }
    v.valid = true;
    return v;
}

std::optional<ResidueFilter> find_filter_for_prime(uint64_t p) {
    if (p == 3)
        return std::nullopt; // N(e) = 1 (mod 3) for every e
    if (p < 3 || (p & 1) == 0 || !smallmod::is_prime(p))
        throw std::invalid_argument("find_filter_for_prime: p = " + std::to_string(p) +
                                    " is not an odd prime");
    const uint64_t order = smallmod::order_mod(2, p);
    // walk 2^r over one period looking for 3*2^r = -1 (mod p); the walk
    // hits each subgroup element once, so at most one r can match
    uint64_t pow2 = 1;
    for (uint64_t r = 0; r < order; ++r) {
        if ((static_cast<unsigned __int128>(family::kMultiplier) * pow2 + 1) % p == 0)
            return ResidueFilter{p, order, r};
        pow2 += pow2;
        if (pow2 >= p)
            pow2 -= p;
    }
    return std::nullopt;
}

std::vector<ResidueFilter> discover_filters(uint64_t prime_bound, unsigned threads) {
    std::vector<ResidueFilter> found;
    if (prime_bound < 5)
        return found;
    if (prime_bound > 0xffffffffULL)
        throw std::invalid_argument("discover_filters: prime bound above 2^32 is not supported");
    const auto primes = smallmod::primes_up_to(static_cast<uint32_t>(prime_bound));
    std::vector<uint32_t> candidates;
    candidates.reserve(primes.size());
    for (uint32_t p : primes) {
        if (p >= 5)
            candidates.push_back(p);
    }
    parallel_map_ordered<std::optional<ResidueFilter>>(
        candidates.size(), threads,
        [&](uint64_t i) { return find_filter_for_prime(candidates[i]); },
        [&](uint64_t, std::optional<ResidueFilter>&& f) {
            if (f)
                found.push_back(*f);
            return true;
        });
    return found;
}

const ResidueFilter* apply_filters(uint64_t e, std::span<const ResidueFilter> filters) {
    for (const ResidueFilter& f : filters) {
        if (f.matches(e))
            return &f;
    }
    return nullptr;
}

namespace {

uint64_t lcm_checked(uint64_t a, uint64_t b, uint64_t bound) {
    const uint64_t g = std::gcd(a, b);
    const unsigned __int128 l = static_cast<unsigned __int128>(a / g) * b;
    if (l > bound)
        throw std::overflow_error("covering_gap: combined modulus exceeds bound " +
                                  std::to_string(bound));
    return static_cast<uint64_t>(l);
}

} // namespace

CoverReport covering_gap(std::span<const ExponentClass> targets,
                         std::span<const ResidueFilter> filters, uint64_t lcm_bound) {
    CoverReport report;
    report.targets.assign(targets.begin(), targets.end());
    uint64_t combined = 1;
    for (const ExponentClass& t : targets) {
        if (t.m == 0 || t.r >= t.m)
            throw std::invalid_argument("covering_gap: malformed target class");
        combined = lcm_checked(combined, t.m, lcm_bound);
    }
    for (const ResidueFilter& f : filters)
        combined = lcm_checked(combined, f.m, lcm_bound);
    report.combined_modulus = combined;

    std::set<uint64_t> residues;
    for (const ExponentClass& t : targets) {
        for (uint64_t k = 0; k < combined / t.m; ++k)
            residues.insert(t.r + k * t.m);
    }
    for (uint64_t r : residues) {
        const ResidueFilter* f = apply_filters(r, filters);
        if (f != nullptr)
            report.covered.push_back({ExponentClass{r, combined}, *f});
        else
            report.uncovered.push_back(ExponentClass{r, combined});
    }
    return report;
}

void write_filters(std::ostream& out, std::span<const ResidueFilter> filters) {
    out << kFiltersHeader << '\n';
    for (const ResidueFilter& f : filters)
        out << f.p << ',' << f.m << ',' << f.r << '\n';
}

std::vector<ResidueFilter> read_filters(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kFiltersHeader)
        throw std::runtime_error("read_filters: missing header \"" +
                                 std::string(kFiltersHeader) + "\"");
    std::vector<ResidueFilter> filters;
    size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty())
            continue;
        ResidueFilter f;
        char c1 = 0, c2 = 0;
        std::istringstream fields(line);
        if (!(fields >> f.p >> c1 >> f.m >> c2 >> f.r) || c1 != ',' || c2 != ',')
            throw std::runtime_error("read_filters: malformed record at line " +
                                     std::to_string(line_no));
        if (!filters.empty() && filters.back().p >= f.p)
            throw std::runtime_error("read_filters: primes not ascending at line " +
                                     std::to_string(line_no));
        filters.push_back(f);
    }
    return filters;
}

} // namespace proth3::filters
