/* search.cpp -- resumable counterexample search */

#include "proth3/search.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "proth3/parallel.hpp"
#include "proth3/smallmod.hpp"

namespace proth3::search {

namespace fs = std::filesystem;

std::string_view status_token(Status s) {
    switch (s) {
    case Status::Even: return "EVEN";
    case Status::Factored: return "FACTORED";
    case Status::CompositeProth: return "COMPOSITE_PROTH";
    case Status::CompositeMr: return "COMPOSITE_MR";
    case Status::PrimeCounterexample: return "PRIME_COUNTEREXAMPLE";
    case Status::ProbablePrime: return "PROBABLE_PRIME";
    }
    return "?";
}

std::optional<Status> status_from_token(std::string_view token) {
    for (Status s : {Status::Even, Status::Factored, Status::CompositeProth, Status::CompositeMr,
                     Status::PrimeCounterexample, Status::ProbablePrime}) {
        if (status_token(s) == token)
            return s;
    }
    return std::nullopt;
}

std::string record_csv_line(const Record& r) {
    std::ostringstream out;
    out << r.n << ',' << r.e << ',' << r.digits << ',' << status_token(r.status) << ','
        << r.method << ',' << r.witness << ',' << r.seed << ',' << r.ms;
    return out.str();
}

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> fields;
    size_t start = 0;
    for (;;) {
        const size_t pos = line.find(sep, start);
        if (pos == std::string::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

uint64_t parse_u64(const std::string& text, const char* what) {
    if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos)
        throw std::runtime_error(std::string("malformed ") + what + ": \"" + text + "\"");
    return std::stoull(text);
}

} // namespace

Record record_from_csv(const std::string& line) {
    const auto fields = split(line, ',');
    if (fields.size() != 8)
        throw std::runtime_error("malformed record (expected 8 fields): \"" + line + "\"");
    Record r;
    r.n = parse_u64(fields[0], "record n");
    r.e = parse_u64(fields[1], "record e");
    r.digits = parse_u64(fields[2], "record digits");
    const auto status = status_from_token(fields[3]);
    if (!status)
        throw std::runtime_error("malformed record status: \"" + fields[3] + "\"");
    r.status = *status;
    r.method = fields[4];
    r.witness = fields[5];
    r.seed = parse_u64(fields[6], "record seed");
    r.ms = parse_u64(fields[7], "record ms");
    return r;
}

std::string Task::fingerprint() const {
    std::ostringstream out;
    out << claim_id << ':' << n_max << ':' << filter_prime_bound << ':' << trial_bound << ':'
        << seed;
    return out.str();
}

fs::path Task::checkpoint_file() const {
    if (!checkpoint_path.empty())
        return checkpoint_path;
    fs::path p = records_path;
    p += ".ckpt";
    return p;
}

std::string checkpoint_line(const Checkpoint& c) {
    std::ostringstream out;
    out << c.fingerprint << ',' << c.last_n << ',' << c.timestamp;
    return out.str();
}

std::optional<Checkpoint> read_checkpoint(const fs::path& path) {
    std::ifstream in(path);
    if (!in)
        return std::nullopt;
    std::string line;
    if (!std::getline(in, line) || line.empty())
        throw std::runtime_error("corrupt checkpoint " + path.string() +
                                 ": empty file; delete it to start over");
    const auto fields = split(line, ',');
    if (fields.size() != 3 || fields[0].empty())
        throw std::runtime_error("corrupt checkpoint " + path.string() + ": \"" + line +
                                 "\"; delete it to start over");
    Checkpoint c;
    c.fingerprint = fields[0];
    try {
        c.last_n = parse_u64(fields[1], "checkpoint last_n");
    } catch (const std::exception&) {
        throw std::runtime_error("corrupt checkpoint " + path.string() + ": \"" + line +
                                 "\"; delete it to start over");
    }
    c.timestamp = fields[2];
    return c;
}

namespace {

std::string now_iso8601() {
    const std::time_t now = std::time(nullptr);
    std::tm utc{};
    gmtime_r(&now, &utc);
    char buffer[32];
    std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &utc);
    return buffer;
}

void write_checkpoint_atomic(const fs::path& path, const Checkpoint& c) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        out << checkpoint_line(c) << '\n';
        if (!out)
            throw std::runtime_error("cannot write checkpoint " + tmp.string());
    }
    fs::rename(tmp, path);
}

[[noreturn]] void throw_fingerprint_mismatch(const std::string& recorded, const std::string& live) {
    static constexpr const char* kFieldNames[] = {"claim", "n_max", "filter_prime_bound",
                                                  "trial_bound", "seed"};
    const auto old_fields = split(recorded, ':');
    const auto new_fields = split(live, ':');
    std::string diff;
    if (old_fields.size() == 5 && new_fields.size() == 5) {
        for (size_t i = 0; i < 5; ++i) {
            if (old_fields[i] != new_fields[i]) {
                if (!diff.empty())
                    diff += ", ";
                diff += std::string(kFieldNames[i]) + " (" + old_fields[i] + " vs " +
                        new_fields[i] + ")";
            }
        }
    }
    if (diff.empty())
        diff = "unrecognized fingerprint layout";
    throw std::runtime_error("resume refused: checkpoint belongs to a different task\n"
                             "  checkpoint: " +
                             recorded + "\n  task:       " + live + "\n  differs in: " + diff);
}

std::vector<Record> read_records(const fs::path& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open records file " + path.string());
    std::string line;
    if (!std::getline(in, line) || line != kRecordsHeader)
        throw std::runtime_error("corrupt records file " + path.string() + ": bad header");
    std::vector<Record> records;
    size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty())
            continue;
        try {
            records.push_back(record_from_csv(line));
        } catch (const std::exception& err) {
            throw std::runtime_error("corrupt records file " + path.string() + " at line " +
                                     std::to_string(line_no) + ": " + err.what());
        }
    }
    return records;
}

} // namespace

Record classify_exponent(uint64_t e, std::span<const filters::ResidueFilter> filter_set,
                         const ClassifyOptions& options) {
    Record rec;
    rec.e = e;
    rec.digits = family::decimal_digits(e);
    rec.seed = options.seed;

    if (e == 0) { // N(0) = 4, the family's only even member
        rec.status = Status::Even;
        rec.method = "even-special-case";
        rec.witness = "2";
        return rec;
    }

    const Natural n = family::value(e);

    // stage 1: proved residue filters, guarded so p = N(e) never counts
    for (const filters::ResidueFilter& f : filter_set) {
        if (!f.matches(e))
            continue;
        if (Natural(f.p) < n) {
            rec.status = Status::Factored;
            rec.method = "residue-filter";
            rec.witness = std::to_string(f.p);
            return rec;
        }
    }

    // stage 2: trial division
    std::optional<uint64_t> factor;
    if (options.trial_primes.empty())
        factor = primality::trial_division(n, options.trial_bound);
    else
        factor = primality::trial_division(n, options.trial_bound, options.trial_primes);
    if (factor) {
        rec.status = Status::Factored;
        rec.method = "trial-division";
        rec.witness = std::to_string(*factor);
        return rec;
    }

    if (e == 1) {
        // below the Proth condition; N(1) = 7 is prime, decided exactly
        rec.status = Status::PrimeCounterexample;
        rec.method = "miller-rabin";
        rec.witness = "7";
        return rec;
    }

    // stage 3: deterministic Proth test, Miller-Rabin fallback
    const primality::Certificate cert =
        primality::proth_test(e, options.seed, options.proth_base_budget);
    switch (cert.verdict) {
    case primality::Verdict::Prime:
        rec.status = Status::PrimeCounterexample;
        rec.method = std::string(primality::method_token(cert.method));
        // the fallback's exact sub-2^64 PRIME carries the value itself
        rec.witness = cert.method == primality::Method::Proth ? cert.witness.get_str()
                                                              : n.get_str();
        break;
    case primality::Verdict::Composite:
        rec.status = cert.method == primality::Method::Proth ? Status::CompositeProth
                                                             : Status::CompositeMr;
        rec.method = std::string(primality::method_token(cert.method));
        rec.witness = cert.witness.get_str();
        break;
    case primality::Verdict::ProbablePrime: {
        rec.status = Status::ProbablePrime;
        rec.method = "miller-rabin";
        std::string joined;
        for (size_t i = 0; i < cert.bases.size(); ++i)
            joined += (i == 0 ? "" : " ") + std::to_string(cert.bases[i]);
        rec.witness = joined;
        break;
    }
    }
    return rec;
}

bool reverify_record(const Record& r) {
    const Natural n = family::value(r.e);
    switch (r.status) {
    case Status::Even:
        return r.e == 0 && r.witness == "2";
    case Status::Factored: {
        const Natural p(r.witness);
        return p > 1 && p < n && mpz_divisible_p(n.get_mpz_t(), p.get_mpz_t());
    }
    case Status::CompositeProth: {
        const Natural a(r.witness);
        if (a > 1 && a < n && mpz_divisible_p(n.get_mpz_t(), a.get_mpz_t()))
            return true; // jacobi-zero path recorded a factor
        if (jacobi(a, n) != -1)
            return false;
        return modpow(a, (n - 1) >> 1, n) != n - 1;
    }
    case Status::CompositeMr: {
        const uint64_t base = parse_u64(r.witness, "witness");
        const primality::MrResult mr = primality::miller_rabin(n, std::vector<uint64_t>{base});
        return mr.composite;
    }
    case Status::PrimeCounterexample: {
        if (r.method == "proth") {
            if (r.e < 2)
                return false;
            const Natural a(r.witness);
            return modpow(a, (n - 1) >> 1, n) == n - 1;
        }
        // exact small-value path
        return n.fits_ulong_p() && primality::is_prime_small(mpz_get_ui(n.get_mpz_t()));
    }
    case Status::ProbablePrime: {
        for (const std::string& text : split(r.witness, ' ')) {
            if (text.empty())
                continue;
            const uint64_t base = parse_u64(text, "witness base");
            const primality::MrResult mr =
                primality::miller_rabin(n, std::vector<uint64_t>{base});
            if (mr.composite)
                return false;
        }
        return true;
    }
    }
    return false;
}

namespace {

void accumulate(Summary& summary, const Record& rec) {
    ++summary.counts[std::string(status_token(rec.status))];
    if (rec.e > summary.max_e)
        summary.max_e = rec.e;
    if (rec.status == Status::PrimeCounterexample)
        summary.counterexamples.push_back(rec);
}

} // namespace

Summary run_search(const Task& task, const RunOptions& options) {
    const auto t_start = std::chrono::steady_clock::now();

    const claims::Claim* claim = claims::find(task.claim_id);
    if (claim == nullptr)
        throw std::invalid_argument("unknown claim id: " + task.claim_id);
    if (claim->kind != claims::Kind::Composite)
        throw std::invalid_argument("search targets the composite claims (C1, C2); " +
                                    task.claim_id + " asserts a fixed divisor");

    const std::vector<uint64_t> sequence = claims::n_values(*claim, task.n_max);
    const fs::path ckpt_path = task.checkpoint_file();
    const std::string fingerprint = task.fingerprint();

    Summary summary;
    summary.claim_id = task.claim_id;
    summary.n_max = task.n_max;

    // resume bookkeeping: the records file is the source of truth, the
    // checkpoint authenticates it and may lag by one crashed commit
    std::vector<Record> existing;
    bool append = false;
    if (options.resume) {
        const std::optional<Checkpoint> ckpt = read_checkpoint(ckpt_path);
        if (!ckpt) {
            std::fprintf(stderr, "proth3: no checkpoint at %s; starting fresh\n",
                         ckpt_path.string().c_str());
        } else {
            if (ckpt->fingerprint != fingerprint)
                throw_fingerprint_mismatch(ckpt->fingerprint, fingerprint);
            if (!fs::exists(task.records_path))
                throw std::runtime_error("resume refused: checkpoint exists but records file " +
                                         task.records_path.string() +
                                         " is missing; delete the checkpoint to start over");
            existing = read_records(task.records_path);
            if (existing.size() > sequence.size())
                throw std::runtime_error("resume refused: records file has more rows than the task");
            for (size_t i = 0; i < existing.size(); ++i) {
                if (existing[i].n != sequence[i])
                    throw std::runtime_error(
                        "resume refused: records file does not match the task's n sequence at row " +
                        std::to_string(i + 1));
            }
            if (existing.empty() || ckpt->last_n > existing.back().n)
                throw std::runtime_error("resume refused: checkpoint is ahead of the records file");
            append = true;
        }
    }

    std::ofstream out(task.records_path,
                      append ? (std::ios::out | std::ios::app) : (std::ios::out | std::ios::trunc));
    if (!out)
        throw std::runtime_error("cannot open records file " + task.records_path.string());
    if (!append) {
        fs::remove(ckpt_path); // stale checkpoint would lie about the new file
        out << kRecordsHeader << '\n';
        out.flush();
        if (!out)
            throw std::runtime_error("cannot write records file " + task.records_path.string());
    }

    for (const Record& rec : existing)
        accumulate(summary, rec);
    summary.resumed_records = existing.size();

    const auto filter_set = filters::discover_filters(task.filter_prime_bound, task.threads);
    const auto trial_primes = smallmod::primes_up_to(
        static_cast<uint32_t>(std::min<uint64_t>(task.trial_bound, 0xffffffffULL)));
    ClassifyOptions classify_options;
    classify_options.trial_bound = task.trial_bound;
    classify_options.seed = task.seed;
    classify_options.trial_primes = trial_primes;

    const uint64_t start = existing.size();
    const uint64_t remaining = sequence.size() - start;
    uint64_t committed = 0;
    auto progress_stamp = std::chrono::steady_clock::now();

    parallel_map_ordered<Record>(
        remaining, task.threads,
        [&](uint64_t i) {
            const uint64_t n = sequence[start + i];
            Record rec = classify_exponent(claim->map.e_of(n), filter_set, classify_options);
            rec.n = n;
            return rec;
        },
        [&](uint64_t, Record&& rec) {
            out << record_csv_line(rec) << '\n';
            out.flush();
            if (!out)
                throw std::runtime_error("write failed on " + task.records_path.string());
            write_checkpoint_atomic(ckpt_path, {fingerprint, rec.n, now_iso8601()});
            accumulate(summary, rec);
            ++committed;
            if (options.progress) {
                const auto now = std::chrono::steady_clock::now();
                if (now - progress_stamp > std::chrono::milliseconds(300)) {
                    progress_stamp = now;
                    std::fprintf(stderr, "\r%s: n=%llu e=%llu (%llu/%zu)   ",
                                 task.claim_id.c_str(),
                                 static_cast<unsigned long long>(rec.n),
                                 static_cast<unsigned long long>(rec.e),
                                 static_cast<unsigned long long>(start + committed),
                                 sequence.size());
                }
            }
            return !(options.stop_after_commits && committed >= *options.stop_after_commits);
        });

    if (options.progress)
        std::fprintf(stderr, "\r%*s\r", 60, "");

    summary.records = start + committed;
    summary.complete = summary.records == sequence.size();
    summary.elapsed_ms = static_cast<uint64_t>(std::chrono::duration_cast<std::chrono::milliseconds>(
                                                   std::chrono::steady_clock::now() - t_start)
                                                   .count());
    return summary;
}

Summary resume_search(const Task& task, const RunOptions& options) {
    RunOptions with_resume = options;
    with_resume.resume = true;
    return run_search(task, with_resume);
}

} // namespace proth3::search
