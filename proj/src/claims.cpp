/* claims.cpp -- the six built-in statements and their verification */

#include "proth3/claims.hpp"

#include <algorithm>
#include <mutex>
#include <stdexcept>

#include "proth3/parallel.hpp"
#include "proth3/search.hpp"
#include "proth3/smallmod.hpp"

namespace proth3::claims {

const std::vector<Claim>& builtin() {
    static const std::vector<Claim> claims = {
        {"P1", {0, 1}, {{3, 4}}, Kind::Divisor, 5,
         "5 divides N(n) for all n = 3 (mod 4)"},
        {"P2", {0, 20}, {{2, 3}}, Kind::Divisor, 7,
         "7 divides N(20n) for all n = 2 (mod 3)"},
        {"P3a", {4, 20}, {{0, 3}}, Kind::Divisor, 7,
         "7 divides N(4+20n) for all n = 0 (mod 3)"},
        {"P3b", {4, 20}, {{1, 3}}, Kind::Divisor, 61,
         "61 divides N(4+20n) for all n = 1 (mod 3)"},
        {"C1", {0, 20}, {{0, 3}, {1, 3}}, Kind::Composite, 0,
         "N(20n) is composite for all n = 0 or 1 (mod 3)"},
        {"C2", {4, 20}, {{2, 3}}, Kind::Composite, 0,
         "N(4+20n) is composite for all n = 2 (mod 3)"},
    };
    return claims;
}

const Claim* find(std::string_view id) {
    for (const Claim& c : builtin()) {
        if (c.id == id)
            return &c;
    }
    return nullptr;
}

std::vector<filters::ExponentClass> normalized_exponent_classes(const Claim& c) {
    std::vector<filters::ExponentClass> classes;
    classes.reserve(c.n_classes.size());
    for (const filters::ExponentClass& ncls : c.n_classes) {
        const uint64_t modulus = c.map.step * ncls.m;
        classes.push_back({c.map.e_of(ncls.r) % modulus, modulus});
    }
    std::sort(classes.begin(), classes.end(),
              [](const auto& a, const auto& b) { return a.r < b.r; });
    return classes;
}

std::vector<uint64_t> n_values(const Claim& c, uint64_t n_max) {
    std::vector<uint64_t> values;
    for (uint64_t n = 0; n <= n_max; ++n) {
        for (const filters::ExponentClass& ncls : c.n_classes) {
            if (n % ncls.m == ncls.r) {
                values.push_back(n);
                break;
            }
        }
    }
    return values;
}

CertificateResult divisor_certificate(const Claim& c) {
    if (c.kind != Kind::Divisor)
        throw std::invalid_argument("divisor_certificate: claim " + c.id +
                                    " asserts compositeness, not a fixed divisor");
    CertificateResult result;
    for (const filters::ExponentClass& cls : normalized_exponent_classes(c)) {
        const filters::ResidueFilter f{c.divisor, cls.m, cls.r};
        const filters::FilterVerdict verdict = filters::verify_filter(f);
        if (!verdict.valid) {
            result.failure = "class e = " + std::to_string(cls.r) + " (mod " +
                             std::to_string(cls.m) + "): " + verdict.reason;
            return result;
        }
        result.entries.push_back({f, verdict.order, verdict.pow2_r});
    }
    result.ok = true;
    return result;
}

NumericReport verify_numeric(const Claim& c, uint64_t n_max, const NumericConfig& config) {
    NumericReport report;
    const std::vector<uint64_t> ns = n_values(c, n_max);
    report.checks = ns.size();

    if (c.kind == Kind::Divisor) {
        family::OrderCache cache;
        for (uint64_t n : ns) {
            const uint64_t e = c.map.e_of(n);
            const uint64_t residue = family::residue_mod(e, c.divisor, cache);
            if (residue != 0) {
                report.violations.push_back(
                    {n, e,
                     std::to_string(c.divisor) + " does not divide N(" + std::to_string(e) +
                         "): residue " + std::to_string(residue)});
            }
        }
        return report;
    }

    const auto filter_set = config.filter_set.empty()
                                ? filters::discover_filters(config.filter_prime_bound,
                                                            config.threads)
                                : config.filter_set;
    const auto trial_primes = smallmod::primes_up_to(
        static_cast<uint32_t>(std::min<uint64_t>(config.trial_bound, 0xffffffffULL)));
    search::ClassifyOptions options;
    options.trial_bound = config.trial_bound;
    options.seed = config.seed;
    options.trial_primes = trial_primes;

    parallel_map_ordered<search::Record>(
        ns.size(), config.threads,
        [&](uint64_t i) { return search::classify_exponent(c.map.e_of(ns[i]), filter_set, options); },
        [&](uint64_t i, search::Record&& rec) {
            ++report.outcome_counts[std::string(search::status_token(rec.status))];
            if (rec.status == search::Status::PrimeCounterexample) {
                report.violations.push_back({ns[i], rec.e,
                                             "N(" + std::to_string(rec.e) +
                                                 ") is prime (method " + rec.method +
                                                 ", witness " + rec.witness + ")"});
            }
            return true;
        });
    return report;
}

} // namespace proth3::claims
