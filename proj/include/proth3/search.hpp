/* search.hpp -- resumable counterexample search over a conjecture's
   exponent classes */

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "proth3/claims.hpp"
#include "proth3/filters.hpp"
#include "proth3/primality.hpp"

namespace proth3::search {

enum class Status {
    Even,                // e = 0, N(0) = 4
    Factored,            // proper prime factor found (filter or division)
    CompositeProth,      // Proth run branded N composite
    CompositeMr,         // Miller-Rabin fallback witnessed compositeness
    PrimeCounterexample, // certificate-backed prime
    ProbablePrime,       // MR fallback passed; unresolved, never a counterexample
};

std::string_view status_token(Status s);
std::optional<Status> status_from_token(std::string_view token);

struct Record {
    uint64_t n = 0;
    uint64_t e = 0;
    uint64_t digits = 0; // decimal digits of N(e)
    Status status = Status::Factored;
    std::string method;  // even-special-case | residue-filter | trial-division | proth | miller-rabin
    std::string witness; // decimal; space-separated base list for PROBABLE_PRIME
    uint64_t seed = 0;
    uint64_t ms = 0; // reserved, always 0 on disk so record files stay byte-identical
};

inline constexpr std::string_view kRecordsHeader = "n,e,digits,status,method,witness,seed,ms";
std::string record_csv_line(const Record& r);
Record record_from_csv(const std::string& line);

struct Task {
    std::string claim_id = "C1"; // composite claims only (C1, C2)
    uint64_t n_max = 200;
    uint64_t filter_prime_bound = 100000;
    uint64_t trial_bound = 1000000;
    uint64_t seed = primality::kDefaultSeed;
    std::filesystem::path records_path = "proth3-search.csv";
    std::filesystem::path checkpoint_path; // records_path + ".ckpt" when empty
    unsigned threads = 0;

    /// Canonical task identity `claim:n_max:prime_bound:trial_bound:seed`.
    /// Collision-free by construction, and readable, so a mismatch can be
    /// diffed field by field.
    std::string fingerprint() const;
    std::filesystem::path checkpoint_file() const;
};

// Checkpoint file is the single line `fingerprint,last_n,timestamp_iso8601`.
struct Checkpoint {
    std::string fingerprint;
    uint64_t last_n = 0; // last contiguous committed n
    std::string timestamp;
};

std::string checkpoint_line(const Checkpoint& c);
/// nullopt when the file does not exist; throws on a corrupt file.
std::optional<Checkpoint> read_checkpoint(const std::filesystem::path& path);

struct ClassifyOptions {
    uint64_t trial_bound = 1000000;
    uint64_t seed = primality::kDefaultSeed;
    std::size_t proth_base_budget = primality::kProthBaseBudget;
    std::span<const uint32_t> trial_primes; // optional precomputed primes
};

/// Cheapest-sufficient-method pipeline: even special case, residue
/// filters (with the proper-divisor guard p < N(e)), trial division,
/// then the Proth test. Filters must be ascending by p.
Record classify_exponent(uint64_t e, std::span<const filters::ResidueFilter> filters,
                         const ClassifyOptions& options = {});

/// Re-check a record's witness from scratch (division or single modpow).
bool reverify_record(const Record& r);

struct Summary {
    std::string claim_id;
    uint64_t n_max = 0;
    uint64_t records = 0; // total records on disk for the task
    std::map<std::string, uint64_t> counts;
    uint64_t max_e = 0;
    uint64_t elapsed_ms = 0;   // this run only
    uint64_t resumed_records = 0; // records that predate this run
    bool complete = false;
    std::vector<Record> counterexamples;
};

struct RunOptions {
    bool resume = false;
    // Test hook: stop (as if killed) after this many commits this run.
    std::optional<uint64_t> stop_after_commits;
    bool progress = false; // single-line counter on stderr
};

/// Run the task. Fresh runs truncate existing output; resume continues
/// after the last record on disk and refuses fingerprint mismatches and
/// corrupt state. Records are committed in ascending n with the
/// checkpoint renamed into place after every one.
Summary run_search(const Task& task, const RunOptions& options = {});

/// run_search with resume semantics (checkpoint expected, fresh start
/// with a notice when there is none).
Summary resume_search(const Task& task, const RunOptions& options = {});

} // namespace proth3::search
