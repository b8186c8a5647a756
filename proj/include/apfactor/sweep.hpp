#pragma once

// Exhaustive grid verification. Enumeration is lexicographic and the writer
// is a single ordered sink, so identical configs produce byte-identical
// output files; for that reason per-record wall-clock timings stay in the
// in-memory records and the stdout summary, never in the files.
//
// Invariant failures never abort a sweep: hunting candidate counterexamples
// is part of the harness's job. Failures of the proved divisibility
// criteria are tallied apart from strict-P/Q strictness candidates, which
// the weakly-supported lcm-condition claim is expected to produce.

#include <gmpxx.h>

#include <chrono>
#include <cstddef>
#include <fstream>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "apfactor/errors.hpp"
#include "apfactor/grimm.hpp"
#include "apfactor/progression.hpp"
#include "apfactor/serialize.hpp"
#include "apfactor/theorems.hpp"

namespace apfactor {

enum class SweepFormat { jsonl, csv };

inline SweepFormat sweep_format_from_string(const std::string& text) {
    if (text == "jsonl") return SweepFormat::jsonl;
    if (text == "csv") return SweepFormat::csv;
    throw precondition_error("format must be jsonl or csv, got \"" + text + "\"");
}

struct SweepConfig {
    // theorem sweep bounds: a in 1..a_max, b in 1..b_max, n in 1..n_max
    unsigned long a_max = 1;
    unsigned long b_max = 1;
    unsigned long n_max = 1;
    // injection sweep bounds: first in 2..first_max, ratio in 1..ratio_max,
    // count in 1..count_max
    unsigned long first_max = 1;
    unsigned long ratio_max = 1;
    unsigned long count_max = 1;
    std::string output_path;
    SweepFormat format = SweepFormat::jsonl;
};

struct TheoremSweepRecord {
    unsigned long a = 0, b = 0, n = 0;
    Thm1Report thm1;
    bool thm2_applicable = false, thm2_valid = false;
    std::optional<CoprimeFactorization> thm2_certificate;
    bool thm3_applicable = false, thm3_valid = false;
    std::optional<std::size_t> distinct_primes;
    bool thm4_applicable = false, thm4_valid = false;
    std::optional<PQRepresentation> thm4_certificate;
    bool strict_pq_applicable = false, strict_pq_valid = false;
    std::vector<std::string> theorem_failures;    // criteria with proofs; expected empty
    std::vector<std::string> strict_pq_failures;  // candidate counterexamples
    double elapsed_ms = 0;                        // in-memory only
};

struct TheoremSweepSummary {
    unsigned long long progressions_checked = 0;
    unsigned long long thm1_consistent = 0;
    unsigned long long thm2_checked = 0, thm2_valid = 0;
    unsigned long long thm3_checked = 0, thm3_valid = 0;
    unsigned long long thm4_checked = 0, thm4_valid = 0;
    unsigned long long strict_pq_checked = 0, strict_pq_valid = 0;
    unsigned long long theorem_failures = 0;
    unsigned long long strict_pq_candidates = 0;
    std::vector<std::string> failure_details;
    double elapsed_ms = 0;

    unsigned long long invariant_failures() const {
        return theorem_failures + strict_pq_candidates;
    }
};

struct GrimmSweepRecord {
    unsigned long first = 0, ratio = 0, count = 0;
    bool injection_found = false;
    std::optional<InjectionResult> result;
    std::optional<bool> langevin;  // set when the terms re-base onto a + b*i with n >= 2
    std::optional<bool> thm3;      // set when they re-base at all
    std::vector<std::string> failures;
    double elapsed_ms = 0;  // in-memory only
};

struct GrimmFailureEntry {
    unsigned long first = 0, ratio = 0, count = 0;
};

struct GrimmSweepSummary {
    unsigned long long progressions_checked = 0;
    unsigned long long injections_found = 0;
    std::vector<GrimmFailureEntry> failing;  // no injection; (count, first, ratio) order
    unsigned long long invariant_failures = 0;
    unsigned long long failures_satisfying_langevin = 0;
    unsigned long long failures_satisfying_thm3 = 0;
    std::vector<std::string> failure_details;
    double elapsed_ms = 0;
};

namespace detail {

inline std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string quoted = "\"";
    for (char c : field) {
        if (c == '"') quoted += '"';
        quoted += c;
    }
    quoted += '"';
    return quoted;
}

inline std::string join(const std::vector<std::string>& parts, const char* sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

inline const char* bool_text(bool v) { return v ? "true" : "false"; }

inline std::ofstream open_sink(const std::string& path) {
    if (path.empty()) throw precondition_error("sweep: output path must not be empty");
    std::ofstream sink(path, std::ios::binary | std::ios::trunc);
    if (!sink) throw precondition_error("sweep: cannot open output file " + path);
    return sink;
}

inline json theorem_record_to_json(const TheoremSweepRecord& record) {
    json thm2{{"applicable", record.thm2_applicable}};
    if (record.thm2_applicable) {
        thm2["valid"] = record.thm2_valid;
        if (record.thm2_certificate) thm2["certificate"] = to_json(*record.thm2_certificate);
    }
    json thm3{{"applicable", record.thm3_applicable}};
    if (record.thm3_applicable) {
        thm3["valid"] = record.thm3_valid;
        if (record.distinct_primes) thm3["distinct_primes"] = *record.distinct_primes;
    }
    json thm4{{"applicable", record.thm4_applicable}};
    if (record.thm4_applicable) {
        thm4["valid"] = record.thm4_valid;
        if (record.thm4_certificate) thm4["certificate"] = to_json(*record.thm4_certificate);
    }
    json strict_pq{{"applicable", record.strict_pq_applicable}};
    if (record.strict_pq_applicable) strict_pq["valid"] = record.strict_pq_valid;
    json failures = json::array();
    for (const std::string& f : record.theorem_failures) failures.push_back(f);
    for (const std::string& f : record.strict_pq_failures) failures.push_back(f);
    return json{{"a", std::to_string(record.a)},
                {"b", std::to_string(record.b)},
                {"n", record.n},
                {"thm1", to_json(record.thm1)},
                {"thm2", std::move(thm2)},
                {"thm3", std::move(thm3)},
                {"thm4", std::move(thm4)},
                {"strict_pq", std::move(strict_pq)},
                {"failures", std::move(failures)}};
}

inline constexpr const char* kTheoremCsvHeader =
    "a,b,n,thm1_divides,thm1_coprime,thm1_consistent,"
    "thm2_applicable,thm2_valid,thm3_applicable,thm3_valid,distinct_primes,"
    "thm4_applicable,thm4_valid,strict_pq_applicable,strict_pq_valid,failures";

inline std::string theorem_record_to_csv(const TheoremSweepRecord& r) {
    std::string row;
    row += std::to_string(r.a) + ',' + std::to_string(r.b) + ',' + std::to_string(r.n) + ',';
    row += std::string(bool_text(r.thm1.divides)) + ',' + bool_text(r.thm1.coprime) + ',' +
           bool_text(r.thm1.consistent) + ',';
    row += std::string(bool_text(r.thm2_applicable)) + ',' +
           (r.thm2_applicable ? bool_text(r.thm2_valid) : "") + ',';
    row += std::string(bool_text(r.thm3_applicable)) + ',' +
           (r.thm3_applicable ? bool_text(r.thm3_valid) : "") + ',';
    row += (r.distinct_primes ? std::to_string(*r.distinct_primes) : "") + std::string(1, ',');
    row += std::string(bool_text(r.thm4_applicable)) + ',' +
           (r.thm4_applicable ? bool_text(r.thm4_valid) : "") + ',';
    row += std::string(bool_text(r.strict_pq_applicable)) + ',' +
           (r.strict_pq_applicable ? bool_text(r.strict_pq_valid) : "") + ',';
    std::vector<std::string> all(r.theorem_failures);
    all.insert(all.end(), r.strict_pq_failures.begin(), r.strict_pq_failures.end());
    row += csv_escape(join(all, "; "));
    return row;
}

inline json grimm_record_to_json(const GrimmSweepRecord& record,
                                 const GeneralProgression& gprog) {
    json out{{"first", std::to_string(record.first)},
             {"ratio", std::to_string(record.ratio)},
             {"count", record.count},
             {"injection_found", record.injection_found}};
    if (record.result) out["result"] = to_json(gprog, *record.result);
    out["langevin_condition"] = record.langevin ? json(*record.langevin) : json(nullptr);
    out["thm3_hypothesis"] = record.thm3 ? json(*record.thm3) : json(nullptr);
    json failures = json::array();
    for (const std::string& f : record.failures) failures.push_back(f);
    out["failures"] = std::move(failures);
    return out;
}

inline constexpr const char* kGrimmCsvHeader =
    "first,ratio,count,injection_found,witness_size,witness_prime_union_size,"
    "langevin_condition,thm3_hypothesis,failures";

inline std::string grimm_record_to_csv(const GrimmSweepRecord& r) {
    std::string row;
    row += std::to_string(r.first) + ',' + std::to_string(r.ratio) + ',' +
           std::to_string(r.count) + ',';
    row += std::string(bool_text(r.injection_found)) + ',';
    if (r.result && !r.result->has_assignment()) {
        row += std::to_string(r.result->witness().term_indices.size()) + ',';
        row += std::to_string(r.result->witness().prime_union.size()) + ',';
    } else {
        row += ",,";
    }
    row += (r.langevin ? bool_text(*r.langevin) : "") + std::string(1, ',');
    row += (r.thm3 ? bool_text(*r.thm3) : "") + std::string(1, ',');
    row += csv_escape(join(r.failures, "; "));
    return row;
}

}  // namespace detail

/// Walks every (a, b, n) with gcd(a, b) = 1 inside the bounds in
/// lexicographic order, runs all certificate constructions that apply, and
/// writes one record per progression.
inline TheoremSweepSummary sweep_theorems(const SweepConfig& config) {
    if (config.a_max < 1 || config.b_max < 1 || config.n_max < 1)
        throw precondition_error("sweep: bounds must be >= 1");
    std::ofstream sink = detail::open_sink(config.output_path);
    if (config.format == SweepFormat::csv) sink << detail::kTheoremCsvHeader << '\n';

    TheoremSweepSummary summary;
    const auto sweep_start = std::chrono::steady_clock::now();
    for (unsigned long a = 1; a <= config.a_max; ++a) {
        for (unsigned long b = 1; b <= config.b_max; ++b) {
            if (std::gcd(a, b) != 1) continue;
            for (unsigned long n = 1; n <= config.n_max; ++n) {
                const auto start = std::chrono::steady_clock::now();
                const Progression prog{mpz_class(a), mpz_class(b), n};
                TheoremSweepRecord record;
                record.a = a;
                record.b = b;
                record.n = n;

                record.thm1 = check_thm1(prog);
                if (!record.thm1.consistent)
                    record.theorem_failures.push_back("divisibility criterion inconsistent");

                record.thm2_applicable = record.thm1.coprime;
                if (record.thm2_applicable) {
                    try {
                        CoprimeFactorization cert = coprime_factorization(prog);
                        record.thm2_valid = check_coprime_factorization(prog, cert).ok;
                        record.thm2_certificate = std::move(cert);
                        if (!record.thm2_valid)
                            record.theorem_failures.push_back(
                                "coprime factorization failed re-validation");
                    } catch (const invariant_failure& e) {
                        record.theorem_failures.push_back(e.what());
                    }
                }

                record.thm3_applicable = thm3_hypothesis(prog);
                if (record.thm3_applicable) {
                    try {
                        CoprimeFactorization cert = strict_factorization(prog);
                        const std::size_t primes = distinct_prime_count(prog);
                        record.distinct_primes = primes;
                        record.thm3_valid =
                            check_coprime_factorization(prog, cert, true).ok && primes >= n;
                        if (!record.thm3_valid)
                            record.theorem_failures.push_back(
                                "strict factorization failed re-validation");
                    } catch (const invariant_failure& e) {
                        record.theorem_failures.push_back(e.what());
                    }
                }

                record.thm4_applicable = n > 1;
                if (record.thm4_applicable) {
                    try {
                        PQRepresentation rep = pq_representation(prog);
                        record.thm4_valid = check_pq_representation(prog, rep).ok;
                        record.thm4_certificate = std::move(rep);
                        if (!record.thm4_valid)
                            record.theorem_failures.push_back(
                                "P/Q representation failed re-validation");
                    } catch (const invariant_failure& e) {
                        record.theorem_failures.push_back(e.what());
                    }
                }

                record.strict_pq_applicable = n > 1 && langevin_condition(prog);
                if (record.strict_pq_applicable) {
                    try {
                        PQRepresentation rep = strict_pq_representation(prog);
                        record.strict_pq_valid = check_pq_representation(prog, rep, true).ok;
                        if (!record.strict_pq_valid)
                            record.strict_pq_failures.push_back(
                                "strict P/Q representation failed re-validation");
                    } catch (const invariant_failure& e) {
                        record.strict_pq_failures.push_back(e.what());
                    }
                }

                record.elapsed_ms =
                    std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                              start)
                        .count();

                summary.progressions_checked += 1;
                summary.thm1_consistent += record.thm1.consistent;
                summary.thm2_checked += record.thm2_applicable;
                summary.thm2_valid += record.thm2_applicable && record.thm2_valid;
                summary.thm3_checked += record.thm3_applicable;
                summary.thm3_valid += record.thm3_applicable && record.thm3_valid;
                summary.thm4_checked += record.thm4_applicable;
                summary.thm4_valid += record.thm4_applicable && record.thm4_valid;
                summary.strict_pq_checked += record.strict_pq_applicable;
                summary.strict_pq_valid += record.strict_pq_applicable && record.strict_pq_valid;
                summary.theorem_failures += record.theorem_failures.size();
                summary.strict_pq_candidates += record.strict_pq_failures.size();
                for (const std::string& f : record.theorem_failures)
                    summary.failure_details.push_back("(" + prog.describe() + ") " + f);
                for (const std::string& f : record.strict_pq_failures)
                    summary.failure_details.push_back("(" + prog.describe() + ") " + f);

                if (config.format == SweepFormat::jsonl)
                    sink << detail::theorem_record_to_json(record).dump() << '\n';
                else
                    sink << detail::theorem_record_to_csv(record) << '\n';
            }
        }
    }
    summary.elapsed_ms = std::chrono::duration<double, std::milli>(
                             std::chrono::steady_clock::now() - sweep_start)
                             .count();
    if (!sink.flush()) throw precondition_error("sweep: write failed on " + config.output_path);
    return summary;
}

/// Walks every (count, first, ratio) with gcd(first, ratio) = 1 inside the
/// bounds, decides injection existence, re-checks each outcome, and
/// cross-tabulates the failing progressions against the two sufficient
/// conditions (a failure satisfying either would contradict them).
inline GrimmSweepSummary sweep_grimm(const SweepConfig& config) {
    if (config.first_max < 1 || config.ratio_max < 1 || config.count_max < 1)
        throw precondition_error("sweep: bounds must be >= 1");
    std::ofstream sink = detail::open_sink(config.output_path);
    if (config.format == SweepFormat::csv) sink << detail::kGrimmCsvHeader << '\n';

    GrimmSweepSummary summary;
    const auto sweep_start = std::chrono::steady_clock::now();
    for (unsigned long count = 1; count <= config.count_max; ++count) {
        for (unsigned long first = 2; first <= config.first_max; ++first) {
            for (unsigned long ratio = 1; ratio <= config.ratio_max; ++ratio) {
                if (std::gcd(first, ratio) != 1) continue;
                const auto start = std::chrono::steady_clock::now();
                const GeneralProgression gprog{mpz_class(first), mpz_class(ratio), count};
                GrimmSweepRecord record;
                record.first = first;
                record.ratio = ratio;
                record.count = count;

                InjectionResult result = find_injection(gprog);
                record.injection_found = result.has_assignment();
                if (record.injection_found) {
                    if (!verify_injection(gprog, result.assignment()))
                        record.failures.push_back("injection failed re-validation");
                } else {
                    const HallWitness& witness = result.witness();
                    // recompute the union of prime divisors over the witness set
                    std::set<mpz_class> primes;
                    for (std::size_t index : witness.term_indices)
                        for (const PrimePower& pp :
                             factorize(gprog.term(static_cast<unsigned long>(index))).entries)
                            primes.insert(pp.prime);
                    const bool sound =
                        primes.size() < witness.term_indices.size() &&
                        std::vector<mpz_class>(primes.begin(), primes.end()) ==
                            witness.prime_union;
                    if (!sound) record.failures.push_back("witness failed re-validation");
                }
                record.result = std::move(result);

                if (const std::optional<Progression> rebased = as_progression(gprog)) {
                    record.thm3 = thm3_hypothesis(*rebased);
                    if (count >= 2) record.langevin = langevin_condition(*rebased);
                }
                if (!record.injection_found) {
                    summary.failing.push_back({first, ratio, count});
                    if (record.langevin && *record.langevin) {
                        summary.failures_satisfying_langevin += 1;
                        record.failures.push_back(
                            "no injection although the lcm condition holds");
                    }
                    if (record.thm3 && *record.thm3) {
                        summary.failures_satisfying_thm3 += 1;
                        record.failures.push_back(
                            "no injection although the strict factorization hypothesis holds");
                    }
                }

                record.elapsed_ms =
                    std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                              start)
                        .count();

                summary.progressions_checked += 1;
                summary.injections_found += record.injection_found;
                summary.invariant_failures += record.failures.size();
                for (const std::string& f : record.failures)
                    summary.failure_details.push_back("(" + gprog.describe() + ") " + f);

                if (config.format == SweepFormat::jsonl)
                    sink << detail::grimm_record_to_json(record, gprog).dump() << '\n';
                else
                    sink << detail::grimm_record_to_csv(record) << '\n';
            }
        }
    }
    summary.elapsed_ms = std::chrono::duration<double, std::milli>(
                             std::chrono::steady_clock::now() - sweep_start)
                             .count();
    if (!sink.flush()) throw precondition_error("sweep: write failed on " + config.output_path);
    return summary;
}

inline json to_json(const TheoremSweepSummary& summary) {
    json details = json::array();
    for (const std::string& f : summary.failure_details) details.push_back(f);
    return json{{"progressions_checked", summary.progressions_checked},
                {"thm1", json{{"checked", summary.progressions_checked},
                              {"consistent", summary.thm1_consistent}}},
                {"thm2", json{{"checked", summary.thm2_checked}, {"valid", summary.thm2_valid}}},
                {"thm3", json{{"checked", summary.thm3_checked}, {"valid", summary.thm3_valid}}},
                {"thm4", json{{"checked", summary.thm4_checked}, {"valid", summary.thm4_valid}}},
                {"strict_pq", json{{"checked", summary.strict_pq_checked},
                                   {"valid", summary.strict_pq_valid},
                                   {"candidate_counterexamples", summary.strict_pq_candidates}}},
                {"theorem_failures", summary.theorem_failures},
                {"invariant_failures", summary.invariant_failures()},
                {"failure_details", std::move(details)},
                {"elapsed_ms", summary.elapsed_ms}};
}

inline json to_json(const GrimmSweepSummary& summary) {
    json failing = json::array();
    for (const GrimmFailureEntry& e : summary.failing)
        failing.push_back(json{{"first", e.first}, {"ratio", e.ratio}, {"count", e.count}});
    json details = json::array();
    for (const std::string& f : summary.failure_details) details.push_back(f);
    return json{{"progressions_checked", summary.progressions_checked},
                {"injections_found", summary.injections_found},
                {"no_injection", summary.failing.size()},
                {"failing", std::move(failing)},
                {"failures_satisfying_langevin", summary.failures_satisfying_langevin},
                {"failures_satisfying_thm3", summary.failures_satisfying_thm3},
                {"invariant_failures", summary.invariant_failures},
                {"failure_details", std::move(details)},
                {"elapsed_ms", summary.elapsed_ms}};
}

}  // namespace apfactor
