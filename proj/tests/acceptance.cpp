// Acceptance suite: one criterion per function, one PASS/FAIL line each,
// exit code = number of failed criteria. Run with no argument for the whole
// suite or with a criterion number (1..10) for a single one.
//
// Grid criteria walk every progression with 1 <= a, b <= 30, gcd(a, b) = 1,
// 1 <= n <= 12. All tolerances are exact: these are integer identities.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "apfactor/cli.hpp"
#include "apfactor/grimm.hpp"
#include "apfactor/progression.hpp"
#include "apfactor/sweep.hpp"
#include "apfactor/theorems.hpp"

using namespace apfactor;

namespace {

constexpr unsigned long kAMax = 30;
constexpr unsigned long kBMax = 30;
constexpr unsigned long kNMax = 12;

void for_each_grid_progression(const std::function<void(const Progression&)>& body) {
    for (unsigned long a = 1; a <= kAMax; ++a)
        for (unsigned long b = 1; b <= kBMax; ++b) {
            if (std::gcd(a, b) != 1) continue;
            for (unsigned long n = 1; n <= kNMax; ++n) body(Progression(a, b, n));
        }
}

// --- criterion 1: the divisibility criterion holds on the whole grid ------

bool criterion_divisibility(std::string& note) {
    unsigned long long checked = 0, inconsistent = 0;
    for_each_grid_progression([&](const Progression& prog) {
        ++checked;
        if (!check_thm1(prog).consistent) ++inconsistent;
    });
    note = std::to_string(checked) + " progressions, " + std::to_string(inconsistent) +
           " inconsistent";
    return inconsistent == 0 && checked > 5000;
}

// --- criterion 2: coprime factorization certificates validate -------------

bool criterion_coprime_factorization(std::string& note) {
    unsigned long long checked = 0, failures = 0;
    for_each_grid_progression([&](const Progression& prog) {
        if (!check_thm1(prog).coprime) return;
        ++checked;
        try {
            const CoprimeFactorization cert = coprime_factorization(prog);
            if (!check_coprime_factorization(prog, cert).ok) ++failures;
        } catch (const std::exception&) {
            ++failures;
        }
    });
    note = std::to_string(checked) + " certificates, " + std::to_string(failures) + " failures";
    return failures == 0 && checked > 0;
}

// --- criterion 3: strict factorization under its hypothesis ---------------

bool criterion_strict_factorization(std::string& note) {
    unsigned long long checked = 0, failures = 0;
    for_each_grid_progression([&](const Progression& prog) {
        if (!thm3_hypothesis(prog)) return;
        ++checked;
        try {
            const CoprimeFactorization cert = strict_factorization(prog);
            if (!check_coprime_factorization(prog, cert, true).ok) ++failures;
            if (distinct_prime_count(prog) < prog.n()) ++failures;
        } catch (const std::exception&) {
            ++failures;
        }
    });
    note = std::to_string(checked) + " certificates, " + std::to_string(failures) + " failures";
    return failures == 0 && checked > 0;
}

// --- criterion 4: P/Q representation for every n > 1 ----------------------

bool criterion_pq_representation(std::string& note) {
    unsigned long long checked = 0, failures = 0;
    for_each_grid_progression([&](const Progression& prog) {
        if (prog.n() <= 1) return;
        ++checked;
        try {
            const PQRepresentation rep = pq_representation(prog);
            if (!check_pq_representation(prog, rep).ok) ++failures;
        } catch (const std::exception&) {
            ++failures;
        }
    });
    note = std::to_string(checked) + " certificates, " + std::to_string(failures) + " failures";
    return failures == 0 && checked > 0;
}

// --- criterion 5: strict P/Q under the lcm condition ----------------------
//
// The expectation written into this criterion is zero strictness failures.
// The claim is false: a=1, b=1, n=2 satisfies the lcm condition yet its
// quotient 3 can only be split as 1 * 3 across the terms 2 and 3, so every
// failure below is a verified counterexample, not an implementation bug.
// They are printed and counted; the criterion reports honestly.

bool criterion_strict_pq(std::string& note) {
    unsigned long long checked = 0, valid = 0;
    std::vector<std::string> candidates;
    for_each_grid_progression([&](const Progression& prog) {
        if (prog.n() <= 1 || !langevin_condition(prog)) return;
        ++checked;
        try {
            const PQRepresentation rep = strict_pq_representation(prog);
            if (check_pq_representation(prog, rep, true).ok) ++valid;
        } catch (const invariant_failure& e) {
            candidates.push_back(e.progression());
        }
    });
    std::ostringstream os;
    os << checked << " applicable, " << valid << " strict, " << candidates.size()
       << " flagged candidate counterexamples";
    if (!candidates.empty()) {
        os << " (first: ";
        for (std::size_t i = 0; i < candidates.size() && i < 3; ++i) {
            if (i) os << "; ";
            os << candidates[i];
        }
        os << ")";
    }
    note = os.str();
    return candidates.empty() && checked > 0;
}

// --- criterion 6: the ratio-13 counterexample ------------------------------

bool criterion_langevin_example(std::string& note) {
    const GeneralProgression gprog(12, 13, 7);
    const InjectionResult result = find_injection(gprog);
    if (result.has_assignment()) {
        note = "unexpected injection";
        return false;
    }
    const HallWitness& witness = result.witness();
    std::vector<mpz_class> witness_terms;
    for (std::size_t index : witness.term_indices)
        witness_terms.push_back(gprog.term(static_cast<unsigned long>(index)));
    const bool sets_match =
        witness_terms == std::vector<mpz_class>{12, 25, 64, 90} &&
        witness.prime_union == std::vector<mpz_class>{2, 3, 5};

    // the CLI surface must agree, including the exit code
    std::ostringstream sink;
    std::streambuf* old = std::cout.rdbuf(sink.rdbuf());
    const int exit_code = cli::run({"grimm", "12", "13", "7"});
    std::cout.rdbuf(old);

    note = "witness terms " + std::to_string(witness.term_indices.size()) + ", prime union " +
           std::to_string(witness.prime_union.size()) + ", cli exit " +
           std::to_string(exit_code);
    return witness.term_indices.size() == 4 && witness.prime_union.size() == 3 && sets_match &&
           exit_code == 1;
}

// --- criterion 7: matching equals brute force ------------------------------

std::vector<std::uint64_t> oracle_prime_divisors(std::uint64_t m) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t p = 2; p * p <= m; ++p) {
        if (m % p) continue;
        out.push_back(p);
        while (m % p == 0) m /= p;
    }
    if (m > 1) out.push_back(m);
    return out;
}

bool oracle_injection_exists(const std::vector<std::uint64_t>& terms_in) {
    std::vector<std::vector<std::uint64_t>> options;
    for (std::uint64_t t : terms_in) options.push_back(oracle_prime_divisors(t));
    std::vector<std::uint64_t> used;
    auto rec = [&](auto&& self, std::size_t i) -> bool {
        if (i == options.size()) return true;
        for (std::uint64_t p : options[i]) {
            if (std::find(used.begin(), used.end(), p) != used.end()) continue;
            used.push_back(p);
            if (self(self, i + 1)) return true;
            used.pop_back();
        }
        return false;
    };
    return rec(rec, 0);
}

bool criterion_matching_oracle(std::string& note) {
    unsigned long long checked = 0, mismatches = 0, recheck_failures = 0;
    for (unsigned long first = 2; first <= 60; ++first)
        for (unsigned long ratio = 1; ratio <= 10; ++ratio) {
            if (std::gcd(first, ratio) != 1) continue;
            for (unsigned long count = 1; count <= 6; ++count) {
                ++checked;
                const GeneralProgression gprog(first, ratio, count);
                const InjectionResult result = find_injection(gprog);
                std::vector<std::uint64_t> ts;
                for (const mpz_class& t : terms(gprog)) ts.push_back(t.get_ui());
                if (result.has_assignment() != oracle_injection_exists(ts)) ++mismatches;
                if (result.has_assignment()) {
                    if (!verify_injection(gprog, result.assignment())) ++recheck_failures;
                } else {
                    const HallWitness& witness = result.witness();
                    std::set<std::uint64_t> primes;
                    for (std::size_t index : witness.term_indices)
                        for (std::uint64_t p : oracle_prime_divisors(
                                 ts[static_cast<std::size_t>(index)]))
                            primes.insert(p);
                    if (primes.size() >= witness.term_indices.size()) ++recheck_failures;
                }
            }
        }
    note = std::to_string(checked) + " progressions, " + std::to_string(mismatches) +
           " existence mismatches, " + std::to_string(recheck_failures) + " re-check failures";
    return mismatches == 0 && recheck_failures == 0 && checked > 0;
}

// --- criterion 8: modular transport -----------------------------------------

bool criterion_transport(std::string& note) {
    unsigned long long checked = 0, mismatches = 0;
    const std::vector<unsigned long> small_primes = primes_upto(12);
    for_each_grid_progression([&](const Progression& prog) {
        const unsigned long n = prog.n();
        const unsigned long b = prog.b().get_ui();
        const unsigned long a = prog.a().get_ui();
        for (unsigned long p : small_primes) {
            if (b % p == 0) continue;
            const mpz_class pz(p);
            const unsigned long e = legendre(pz, n);
            const mpz_class modulus = pow_ui(pz, e);
            if (modulus == 1) continue;
            ++checked;
            const mpz_class x = mod_inverse(prog.b(), modulus);
            mpz_class lhs = 1, rhs = 1;
            for (unsigned long i = 1; i <= n; ++i) {
                lhs = lhs * (prog.term(i) % modulus) % modulus;
                rhs = rhs * ((mpz_class(a) * x + i) % modulus) % modulus;
            }
            if ((lhs == 0) != (rhs == 0)) ++mismatches;
        }
    });
    note = std::to_string(checked) + " (progression, prime) pairs, " +
           std::to_string(mismatches) + " mismatches";
    return mismatches == 0 && checked > 0;
}

// --- criterion 9: binomial valuation bound ----------------------------------

bool criterion_binomial_bound(std::string& note) {
    unsigned long long checked = 0, violations = 0;
    for (unsigned long p : {2ul, 3ul, 5ul, 7ul, 11ul, 13ul}) {
        const mpz_class pz(p);
        for (unsigned long m = 1; m <= 200; ++m)
            for (unsigned long n = 1; n <= 50; ++n) {
                ++checked;
                const unsigned long binom_val =
                    legendre(pz, m + n) - legendre(pz, m) - legendre(pz, n);
                unsigned long max_val = 0;
                for (unsigned long i = 1; i <= n; ++i) {
                    unsigned long v = 0, t = m + i;
                    while (t % p == 0) {
                        t /= p;
                        ++v;
                    }
                    if (v > max_val) max_val = v;
                }
                if (binom_val > max_val) ++violations;
            }
    }
    note = std::to_string(checked) + " triples, " + std::to_string(violations) + " violations";
    return violations == 0;
}

// --- criterion 10: sweep determinism ----------------------------------------

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

bool criterion_determinism(std::string& note) {
    namespace fs = std::filesystem;
    const std::string base = (fs::temp_directory_path() / "apfactor_acceptance_").string();
    bool ok = true;
    for (const SweepFormat format : {SweepFormat::jsonl, SweepFormat::csv}) {
        SweepConfig config;
        config.a_max = 6;
        config.b_max = 6;
        config.n_max = 6;
        config.format = format;
        config.output_path = base + "thm_a";
        sweep_theorems(config);
        config.output_path = base + "thm_b";
        sweep_theorems(config);
        if (slurp(base + "thm_a") != slurp(base + "thm_b")) ok = false;
        if (slurp(base + "thm_a").empty()) ok = false;
        fs::remove(base + "thm_a");
        fs::remove(base + "thm_b");

        config.first_max = 20;
        config.ratio_max = 6;
        config.count_max = 4;
        config.output_path = base + "grimm_a";
        sweep_grimm(config);
        config.output_path = base + "grimm_b";
        sweep_grimm(config);
        if (slurp(base + "grimm_a") != slurp(base + "grimm_b")) ok = false;
        fs::remove(base + "grimm_a");
        fs::remove(base + "grimm_b");
    }
    note = ok ? "byte-identical repeat runs (jsonl and csv)" : "outputs differ between runs";
    return ok;
}

struct Criterion {
    int id;
    const char* title;
    bool (*run)(std::string&);
};

}  // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> criteria = {
        {1, "divisibility criterion consistent on the full grid", criterion_divisibility},
        {2, "coprime factorization certificates validate", criterion_coprime_factorization},
        {3, "strict factorization yields parts > 1 and n distinct primes",
         criterion_strict_factorization},
        {4, "P/Q representation validates with q supported on b", criterion_pq_representation},
        {5, "strict P/Q under the lcm condition (zero-failure expectation)",
         criterion_strict_pq},
        {6, "ratio-13 progression reproduces the 3-prime Hall witness",
         criterion_langevin_example},
        {7, "matching existence equals brute-force enumeration", criterion_matching_oracle},
        {8, "modular transport preserves prime-power divisibility", criterion_transport},
        {9, "binomial valuation bound", criterion_binomial_bound},
        {10, "sweeps are deterministic byte for byte", criterion_determinism},
    };

    int selected = 0;
    if (argc > 1) {
        selected = std::atoi(argv[1]);
        if (selected < 1 || selected > 10) {
            std::fprintf(stderr, "usage: %s [criterion 1..10]\n", argv[0]);
            return 64;
        }
    }

    int failed = 0;
    for (const Criterion& criterion : criteria) {
        if (selected != 0 && criterion.id != selected) continue;
        std::string note;
        bool ok = false;
        try {
            ok = criterion.run(note);
        } catch (const std::exception& e) {
            note = std::string("exception: ") + e.what();
        }
        std::printf("[%s] criterion %2d: %s (%s)\n", ok ? "PASS" : "FAIL", criterion.id,
                    criterion.title, note.c_str());
        std::fflush(stdout);
        if (!ok) ++failed;
    }
    return failed;
}
