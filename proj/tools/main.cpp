/* main.cpp -- proth3 command-line interface */

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <unistd.h>

#include <CLI11.hpp>
#include <json.hpp>

#include "proth3/claims.hpp"
#include "proth3/filters.hpp"
#include "proth3/primality.hpp"
#include "proth3/search.hpp"

using nlohmann::json;

namespace {

unsigned threads_from_env(unsigned flag_value) {
    if (flag_value != 0)
        return flag_value;
    if (const char* env = std::getenv("PROTH3_THREADS")) {
        const long parsed = std::strtol(env, nullptr, 10);
        if (parsed > 0)
            return static_cast<unsigned>(parsed);
    }
    return 0; // hardware parallelism
}

const proth3::claims::Claim& claim_or_die(const std::string& id) {
    const proth3::claims::Claim* claim = proth3::claims::find(id);
    if (claim == nullptr)
        throw CLI::ValidationError("--claim", "unknown claim id \"" + id +
                                                  "\" (expected P1, P2, P3a, P3b, C1 or C2)");
    return *claim;
}

std::string filter_repr(const proth3::filters::ResidueFilter& f) {
    return "(" + std::to_string(f.p) + "," + std::to_string(f.m) + "," + std::to_string(f.r) + ")";
}

// load a filter set written by `discover --out`, re-verifying every rule
std::vector<proth3::filters::ResidueFilter> load_filters(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open filters file " + path);
    auto set = proth3::filters::read_filters(in);
    for (const auto& f : set) {
        const auto verdict = proth3::filters::verify_filter(f);
        if (!verdict.valid)
            throw std::runtime_error("filters file " + path + " holds an invalid rule " +
                                     filter_repr(f) + ": " + verdict.reason);
    }
    return set;
}

std::string class_repr(const proth3::filters::ExponentClass& c) {
    return "e = " + std::to_string(c.r) + " (mod " + std::to_string(c.m) + ")";
}

void print_claim_header(const proth3::claims::Claim& claim) {
    std::cout << "claim " << claim.id << ": " << claim.statement << "\n";
    std::cout << "e-classes:";
    for (const auto& cls : proth3::claims::normalized_exponent_classes(claim))
        std::cout << " " << class_repr(cls) << ";";
    std::cout << "\n";
}

void print_certificate(const proth3::claims::CertificateResult& cert) {
    for (const auto& entry : cert.entries) {
        const auto& f = entry.filter;
        std::cout << "certificate: filter " << filter_repr(f) << " VALID: ord_" << f.p
                  << "(2) = " << entry.order << " divides m = " << f.m << "; 2^" << f.r << " = "
                  << entry.pow2_r << " (mod " << f.p << "); 1 + 3*" << entry.pow2_r << " = 0 (mod "
                  << f.p << ")\n";
    }
}

int cmd_verify(const std::string& claim_id, uint64_t n_max,
               const proth3::claims::NumericConfig& config) {
    const auto& claim = claim_or_die(claim_id);
    print_claim_header(claim);

    if (claim.kind == proth3::claims::Kind::Divisor) {
        const auto cert = proth3::claims::divisor_certificate(claim);
        if (!cert.ok) {
            std::cout << "certificate: FAILED: " << cert.failure << "\n";
            return 1;
        }
        print_certificate(cert);
    }

    const auto report = proth3::claims::verify_numeric(claim, n_max, config);
    if (!report.outcome_counts.empty()) {
        std::cout << "outcomes:";
        for (const auto& [token, count] : report.outcome_counts)
            std::cout << " " << token << "=" << count;
        std::cout << "\n";
    }
    std::cout << "checks: " << report.checks << ", violations: " << report.violations.size()
              << "\n";
    for (const auto& v : report.violations)
        std::cout << "violation: n=" << v.n << " e=" << v.e << " " << v.detail << "\n";
    return report.violations.empty() ? 0 : 1;
}

int cmd_discover(uint64_t prime_bound, const std::string& out_path, unsigned threads) {
    const auto filter_set = proth3::filters::discover_filters(prime_bound, threads);
    proth3::filters::write_filters(std::cout, filter_set);
    if (!out_path.empty()) {
        std::ofstream out(out_path, std::ios::trunc);
        if (!out)
            throw std::runtime_error("cannot open " + out_path);
        proth3::filters::write_filters(out, filter_set);
    }
    std::cerr << "discovered " << filter_set.size() << " filters (p <= " << prime_bound << ")\n";
    return 0;
}

int cmd_cover(const std::string& claim_id, uint64_t prime_bound, uint64_t lcm_bound,
              unsigned threads, const std::string& filters_path) {
    const auto& claim = claim_or_die(claim_id);
    print_claim_header(claim);
    const auto filter_set = filters_path.empty()
                                ? proth3::filters::discover_filters(prime_bound, threads)
                                : load_filters(filters_path);
    if (filters_path.empty())
        std::cout << "filters: " << filter_set.size() << " (primes <= " << prime_bound << ")\n";
    else
        std::cout << "filters: " << filter_set.size() << " (from " << filters_path << ")\n";
    const auto targets = proth3::claims::normalized_exponent_classes(claim);
    const auto report = proth3::filters::covering_gap(targets, filter_set, lcm_bound);
    std::cout << "combined modulus L = " << report.combined_modulus << "\n";
    for (const auto& cov : report.covered)
        std::cout << "covered: " << class_repr(cov.cls) << " by " << filter_repr(cov.by) << "\n";
    for (const auto& cls : report.uncovered)
        std::cout << "uncovered: " << class_repr(cls) << "\n";
    std::cout << "covered " << report.covered.size() << "/"
              << report.covered.size() + report.uncovered.size() << " classes, "
              << report.uncovered.size() << " uncovered\n";
    return 0;
}

int cmd_test(uint64_t e, const std::string& method, uint64_t trial_bound, uint64_t seed,
             bool print_value) {
    namespace pr = proth3::primality;
    pr::Certificate cert;
    cert.exponent = e;
    cert.subject = proth3::family::value(e);

    if (e == 0) {
        cert.verdict = pr::Verdict::Composite;
        cert.method = pr::Method::EvenSpecialCase;
        cert.witness = 2;
    } else if (method == "proth") {
        if (e < 2)
            throw CLI::ValidationError("--method",
                                       "the Proth test needs e >= 2; use --method auto");
        cert = pr::proth_test(e, seed);
    } else if (method == "mr") {
        const auto bases = pr::policy_bases(cert.subject, seed);
        const auto mr = pr::miller_rabin(cert.subject, bases);
        cert.method = pr::Method::MillerRabin;
        cert.seeded = cert.subject >= (proth3::Natural(1) << 64);
        cert.seed = seed;
        if (mr.composite) {
            cert.verdict = pr::Verdict::Composite;
            cert.witness = mr.witness;
        } else {
            cert.verdict = cert.seeded ? pr::Verdict::ProbablePrime : pr::Verdict::Prime;
            cert.bases = mr.bases_used;
        }
    } else { // auto
        if (e == 1) {
            cert.verdict = pr::Verdict::Prime; // N(1) = 7, exact below 2^64
            cert.method = pr::Method::MillerRabin;
        } else if (const auto factor = pr::trial_division(cert.subject, trial_bound)) {
            cert.verdict = pr::Verdict::Composite;
            cert.method = pr::Method::TrialDivision;
            cert.witness = *factor;
        } else {
            cert = pr::proth_test(e, seed);
        }
    }

    std::cout << "e=" << e << ": N(e) has " << proth3::family::decimal_digits(e) << " digits\n";
    if (print_value)
        std::cout << "N = " << cert.subject.get_str() << "\n";
    std::cout << "verdict: " << pr::verdict_token(cert.verdict)
              << " method: " << pr::method_token(cert.method);
    if (cert.verdict == pr::Verdict::ProbablePrime) {
        std::cout << " bases:";
        for (uint64_t b : cert.bases)
            std::cout << " " << b;
    } else if (cert.witness != 0) {
        std::cout << " witness: " << cert.witness.get_str();
    }
    std::cout << "\n";
    if (cert.extracted_factor > 1)
        std::cout << "factor: " << cert.extracted_factor.get_str() << "\n";
    std::cout << "certificate: " << pr::certificate_line(cert) << "\n";
    return 0;
}

int cmd_search(proth3::search::Task task, bool resume, bool as_json) {
    proth3::search::RunOptions options;
    options.resume = resume;
    options.progress = isatty(fileno(stderr)) != 0;
    const auto summary = proth3::search::run_search(task, options);

    if (as_json) {
        json counts = json::object();
        for (const auto& [token, count] : summary.counts)
            counts[token] = count;
        json counterexamples = json::array();
        for (const auto& rec : summary.counterexamples)
            counterexamples.push_back({{"n", rec.n},
                                       {"e", rec.e},
                                       {"digits", rec.digits},
                                       {"method", rec.method},
                                       {"witness", rec.witness}});
        const json j = {{"claim", summary.claim_id},
                        {"n_max", summary.n_max},
                        {"records", summary.records},
                        {"resumed_records", summary.resumed_records},
                        {"complete", summary.complete},
                        {"counts", counts},
                        {"max_e", summary.max_e},
                        {"elapsed_ms", summary.elapsed_ms},
                        {"counterexamples", counterexamples},
                        {"records_path", task.records_path.string()},
                        {"checkpoint_path", task.checkpoint_file().string()}};
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "task: claim " << summary.claim_id << ", n_max " << summary.n_max
                  << ", filters p <= " << task.filter_prime_bound << ", trial division <= "
                  << task.trial_bound << ", seed " << task.seed << "\n";
        std::cout << "records: " << summary.records << " in " << task.records_path.string()
                  << " (resumed " << summary.resumed_records << ", complete "
                  << (summary.complete ? "yes" : "no") << ")\n";
        std::cout << "counts:";
        for (const auto& [token, count] : summary.counts)
            std::cout << " " << token << "=" << count;
        std::cout << "\n";
        std::cout << "max e: " << summary.max_e << "\n";
        std::cout << "elapsed: " << summary.elapsed_ms << " ms\n";
        std::cout << "counterexamples: " << summary.counterexamples.size() << "\n";
        for (const auto& rec : summary.counterexamples)
            std::cout << "counterexample: n=" << rec.n << " e=" << rec.e << " witness "
                      << rec.witness << "\n";
    }
    return summary.counterexamples.empty() ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"proth3 -- verifiable claims about the integer family N(e) = 3*2^e + 1"};
    app.require_subcommand(1);

    // verify
    std::string verify_claim;
    uint64_t verify_n_max = 1000;
    proth3::claims::NumericConfig verify_config;
    unsigned verify_threads = 0;
    std::string verify_filters;
    auto* verify = app.add_subcommand("verify", "machine-check a claim over n <= n-max");
    verify->add_option("--claim", verify_claim, "claim id (P1, P2, P3a, P3b, C1, C2)")->required();
    verify->add_option("--n-max", verify_n_max, "inclusive bound on n");
    verify->add_option("--prime-bound", verify_config.filter_prime_bound,
                       "filter discovery bound (composite claims)");
    verify->add_option("--trial-bound", verify_config.trial_bound,
                       "trial division bound (composite claims)");
    verify->add_option("--seed", verify_config.seed, "Miller-Rabin base seed above 2^64");
    verify->add_option("--threads", verify_threads, "worker threads (default: machine)");
    verify->add_option("--filters", verify_filters,
                       "use a filter set file instead of discovery (composite claims)");

    // discover
    uint64_t discover_bound = 100000;
    std::string discover_out;
    unsigned discover_threads = 0;
    auto* discover = app.add_subcommand("discover", "find all residue filters with p <= bound");
    discover->add_option("--prime-bound", discover_bound, "largest prime to try")->required();
    discover->add_option("--out", discover_out, "also write the filter set to this file");
    discover->add_option("--threads", discover_threads, "worker threads (default: machine)");

    // cover
    std::string cover_claim;
    uint64_t cover_bound = 13;
    uint64_t cover_lcm_bound = proth3::filters::kDefaultLcmBound;
    unsigned cover_threads = 0;
    std::string cover_filters;
    auto* cover = app.add_subcommand("cover", "covering-gap analysis of a claim's e-classes");
    cover->add_option("--claim", cover_claim, "claim id")->required();
    cover->add_option("--prime-bound", cover_bound,
                      "filter discovery bound (default 13; larger sets quickly exceed the "
                      "combined-modulus bound)");
    cover->add_option("--lcm-bound", cover_lcm_bound, "refuse combined moduli above this");
    cover->add_option("--threads", cover_threads, "worker threads (default: machine)");
    cover->add_option("--filters", cover_filters, "use a filter set file instead of discovery");

    // test
    uint64_t test_exponent = 0;
    std::string test_method = "auto";
    uint64_t test_trial_bound = 1000000;
    uint64_t test_seed = proth3::primality::kDefaultSeed;
    bool test_print_value = false;
    auto* test = app.add_subcommand("test", "primality of a single N(e) with certificate");
    test->add_option("--exponent", test_exponent, "exponent e")->required();
    test->add_option("--method", test_method, "proth | mr | auto (default auto)")
        ->check(CLI::IsMember({"proth", "mr", "auto"}));
    test->add_option("--trial-bound", test_trial_bound, "trial division bound (auto method)");
    test->add_option("--seed", test_seed, "Miller-Rabin base seed above 2^64");
    test->add_flag("--print-value", test_print_value, "print N(e) in full decimal");

    // search
    proth3::search::Task task;
    std::string search_claim = "C1";
    std::string search_out;
    std::string search_checkpoint;
    unsigned search_threads = 0;
    bool search_resume = false;
    bool search_json = false;
    auto* search = app.add_subcommand("search", "counterexample search over a conjecture class");
    search->add_option("--claim", search_claim, "claim id (C1 or C2)")->required();
    search->add_option("--n-max", task.n_max, "inclusive bound on n (default 200)");
    search->add_option("--prime-bound", task.filter_prime_bound,
                       "filter discovery bound (default 100000)");
    search->add_option("--trial-bound", task.trial_bound, "trial division bound (default 1000000)");
    search->add_option("--seed", task.seed, "Miller-Rabin base seed above 2^64");
    search->add_option("--out", search_out, "records file (default proth3-search-<claim>.csv)");
    search->add_option("--checkpoint", search_checkpoint, "checkpoint file (default <out>.ckpt)");
    search->add_option("--threads", search_threads, "worker threads (default: machine)");
    search->add_flag("--resume", search_resume, "continue after the last record on disk");
    search->add_flag("--json", search_json, "print the summary as a JSON object");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (verify->parsed()) {
            verify_config.threads = threads_from_env(verify_threads);
            if (!verify_filters.empty())
                verify_config.filter_set = load_filters(verify_filters);
            return cmd_verify(verify_claim, verify_n_max, verify_config);
        }
        if (discover->parsed())
            return cmd_discover(discover_bound, discover_out, threads_from_env(discover_threads));
        if (cover->parsed())
            return cmd_cover(cover_claim, cover_bound, cover_lcm_bound,
                             threads_from_env(cover_threads), cover_filters);
        if (test->parsed())
            return cmd_test(test_exponent, test_method, test_trial_bound, test_seed,
                            test_print_value);
        if (search->parsed()) {
            task.claim_id = search_claim;
            task.records_path = search_out.empty() ? "proth3-search-" + search_claim + ".csv"
                                                   : search_out;
            if (!search_checkpoint.empty())
                task.checkpoint_path = search_checkpoint;
            task.threads = threads_from_env(search_threads);
            return cmd_search(task, search_resume, search_json);
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << "proth3: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "proth3: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
