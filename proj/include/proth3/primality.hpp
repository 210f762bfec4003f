/* primality.hpp -- trial division, Miller-Rabin, and the Proth test
   specialized to N(e) = 3*2^e + 1, each emitting a checkable certificate */

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "proth3/natural.hpp"

namespace proth3::primality {

// Default seed for the >= 2^64 Miller-Rabin base generator. N(30), itself
// a prime of the family.
inline constexpr uint64_t kDefaultSeed = 3221225473ULL;

// Candidate-base budget of the Proth witness search before the
// Miller-Rabin fallback kicks in. For prime N roughly half of all bases
// have Jacobi symbol -1, so 50 misses with probability ~2^-50.
inline constexpr std::size_t kProthBaseBudget = 50;

// Number of seeded bases used above 2^64.
inline constexpr std::size_t kPolicyBaseCount = 20;

enum class Verdict { Prime, Composite, ProbablePrime };
enum class Method { TrialDivision, MillerRabin, Proth, EvenSpecialCase };

std::string_view verdict_token(Verdict v);
std::string_view method_token(Method m);

struct Certificate {
    std::optional<uint64_t> exponent; // set when the subject is N(e)
    Natural subject;                  // the value tested
    Verdict verdict = Verdict::Composite;
    Method method = Method::TrialDivision;
    // Proving datum: a factor for composite-by-division, the base a for
    // the Proth paths, the witnessing base for Miller-Rabin composites.
    Natural witness = 0;
    std::vector<uint64_t> bases; // bases behind a PROBABLE_PRIME
    uint64_t seed = 0;
    bool seeded = false;          // bases came from the seeded generator
    Natural extracted_factor = 0; // incidental factor from the Proth path
};

/// Single-line form `e|verdict|method|witness|seed`, absent fields empty.
std::string certificate_line(const Certificate& c);

/// Smallest prime factor of n that is <= min(bound, floor(sqrt(n))),
/// or nullopt. n >= 2.
std::optional<uint64_t> trial_division(const Natural& n, uint64_t bound);
std::optional<uint64_t> trial_division(const Natural& n, uint64_t bound,
                                       std::span<const uint32_t> primes);

struct MrResult {
    bool composite = false;
    uint64_t witness = 0;             // witnessing base when composite
    std::vector<uint64_t> bases_used; // bases actually tested
};

/// Strong-probable-prime test for odd n >= 3. Bases are reduced mod n;
/// bases collapsing to 0 or +-1 are skipped.
MrResult miller_rabin(const Natural& n, std::span<const uint64_t> bases);

/// Base policy: the fixed deterministic set below 2^64 (exact answers),
/// 20 seeded bases above.
std::vector<uint64_t> policy_bases(const Natural& n, uint64_t seed);

/// Deterministic Proth test of N(e) for e >= 2 (Proth condition 3 < 2^e).
/// Walks odd-prime bases a = 3, 5, 7, ... skipping any with
/// jacobi(a, N) != -1; the first base with jacobi -1 decides:
/// a^((N-1)/2) = -1 proves PRIME, anything else proves COMPOSITE by the
/// Euler criterion. Falls back to Miller-Rabin when base_budget bases
/// pass without a jacobi -1 hit.
Certificate proth_test(uint64_t e, uint64_t seed = kDefaultSeed,
                       std::size_t base_budget = kProthBaseBudget);

/// Exact primality below 2^64.
bool is_prime_small(uint64_t n);

/// Re-check a certificate from its witness alone (exact division or a
/// single modpow).
bool reverify(const Certificate& c);

} // namespace proth3::primality
