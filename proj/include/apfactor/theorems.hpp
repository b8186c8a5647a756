#pragma once

// Constructive certificates for the divisibility of (a+b)...(a+nb) by n!
// and for the coprime factorizations of the resulting quotient, plus the
// lcm-based sufficient condition for the strict variant. Every constructor
// validates its certificate through an independent checker before returning;
// a construction that cannot satisfy its own invariants throws
// invariant_failure and thereby flags a candidate counterexample.

#include <gmpxx.h>

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "apfactor/arith.hpp"
#include "apfactor/errors.hpp"
#include "apfactor/progression.hpp"

namespace apfactor {

/// Both sides of the divisibility criterion, computed independently:
/// `divides` from per-prime valuations, `coprime` from gcd(n!, b) = 1.
struct Thm1Report {
    bool divides = false;
    bool coprime = false;
    bool consistent = false;  // divides == coprime; the criterion itself
};

/// One certificate entry: the factor assigned to term a + b*index.
struct IndexedFactor {
    unsigned long index = 0;  // 1-based term index
    mpz_class factor;
};

/// Certificate that the integer quotient (a+b)...(a+nb) / n! splits into
/// pairwise coprime divisors of the individual terms. Entries cover every
/// index 1..n; unassigned indices carry factor 1.
struct CoprimeFactorization {
    std::vector<IndexedFactor> factors;

    mpz_class product() const {
        mpz_class p = 1;
        for (const IndexedFactor& f : factors) p *= f.factor;
        return p;
    }
};

/// Certificate that the (not necessarily integral) quotient equals P/q in
/// lowest terms, with P split into pairwise coprime term divisors and every
/// prime of q dividing b.
struct PQRepresentation {
    std::vector<IndexedFactor> p_factors;
    mpz_class q = 1;

    mpz_class p_value() const {
        mpz_class p = 1;
        for (const IndexedFactor& f : p_factors) p *= f.factor;
        return p;
    }
};

struct CheckResult {
    bool ok = true;
    std::string reason;
};

// ---------------------------------------------------------------------------
// independent checkers
//
// These share no code with the constructions below: terms are recomputed by
// direct arithmetic, products are compared against n! cross-multiplied, and
// q's prime support is tested by iterated gcd stripping. They exist so that
// certificates from any source (including other tools) can be validated.

inline CheckResult check_coprime_factorization(const Progression& prog,
                                               const CoprimeFactorization& cert,
                                               bool require_strict = false) {
    const unsigned long n = prog.n();
    if (n > kMaxFactorialTerms) return {false, "n exceeds the factorial materialization bound"};
    if (cert.factors.size() != n) return {false, "certificate must have one entry per index 1..n"};
    mpz_class product = 1;
    for (unsigned long i = 0; i < n; ++i) {
        const IndexedFactor& f = cert.factors[i];
        if (f.index != i + 1) return {false, "indices must be exactly 1..n in order"};
        if (f.factor < 1) return {false, "factor below 1 at index " + std::to_string(f.index)};
        if (require_strict && f.factor == 1)
            return {false, "factor 1 at index " + std::to_string(f.index)};
        const mpz_class term = prog.a() + prog.b() * f.index;
        if (!mpz_divisible_p(term.get_mpz_t(), f.factor.get_mpz_t()))
            return {false, "factor does not divide its term at index " + std::to_string(f.index)};
        product *= f.factor;
    }
    for (std::size_t i = 0; i < cert.factors.size(); ++i)
        for (std::size_t j = i + 1; j < cert.factors.size(); ++j)
            if (gcd(cert.factors[i].factor, cert.factors[j].factor) != 1)
                return {false, "factors at indices " + std::to_string(i + 1) + " and " +
                                   std::to_string(j + 1) + " are not coprime"};
    mpz_class factorial;
    mpz_fac_ui(factorial.get_mpz_t(), n);
    mpz_class rhs = 1;
    for (unsigned long i = 1; i <= n; ++i) rhs *= prog.a() + prog.b() * i;
    if (product * factorial != rhs) return {false, "product of factors != quotient"};
    return {};
}

inline CheckResult check_pq_representation(const Progression& prog,
                                           const PQRepresentation& rep,
                                           bool require_strict = false) {
    const unsigned long n = prog.n();
    if (n > kMaxFactorialTerms) return {false, "n exceeds the factorial materialization bound"};
    if (rep.p_factors.size() != n) return {false, "certificate must have one entry per index 1..n"};
    if (rep.q < 1) return {false, "q must be >= 1"};
    mpz_class p_value = 1;
    for (unsigned long i = 0; i < n; ++i) {
        const IndexedFactor& f = rep.p_factors[i];
        if (f.index != i + 1) return {false, "indices must be exactly 1..n in order"};
        if (f.factor < 1) return {false, "factor below 1 at index " + std::to_string(f.index)};
        if (require_strict && f.factor == 1)
            return {false, "factor 1 at index " + std::to_string(f.index)};
        const mpz_class term = prog.a() + prog.b() * f.index;
        if (!mpz_divisible_p(term.get_mpz_t(), f.factor.get_mpz_t()))
            return {false, "factor does not divide its term at index " + std::to_string(f.index)};
        p_value *= f.factor;
    }
    for (std::size_t i = 0; i < rep.p_factors.size(); ++i)
        for (std::size_t j = i + 1; j < rep.p_factors.size(); ++j)
            if (gcd(rep.p_factors[i].factor, rep.p_factors[j].factor) != 1)
                return {false, "factors at indices " + std::to_string(i + 1) + " and " +
                                   std::to_string(j + 1) + " are not coprime"};
    if (gcd(p_value, rep.q) != 1) return {false, "gcd(P, q) != 1"};
    mpz_class factorial;
    mpz_fac_ui(factorial.get_mpz_t(), n);
    mpz_class product = 1;
    for (unsigned long i = 1; i <= n; ++i) product *= prog.a() + prog.b() * i;
    // P/q must equal the quotient as an exact ratio
    if (p_value * factorial != rep.q * product) return {false, "P/q != product/n!"};
    // every prime of q must divide b: strip common factors until none remain
    mpz_class residue = rep.q;
    while (true) {
        const mpz_class g = gcd(residue, prog.b());
        if (g == 1) break;
        residue /= g;
    }
    if (residue != 1) return {false, "q has a prime factor that does not divide b"};
    return {};
}

// ---------------------------------------------------------------------------
// constructions

/// Checks n! | (a+b)...(a+nb) against gcd(n!, b) = 1, each side computed on
/// its own, and reports whether they agree.
inline Thm1Report check_thm1(const Progression& prog) {
    const unsigned long n = prog.n();
    const std::vector<unsigned long> primes = primes_upto(n);
    bool divides = true;
    for (unsigned long p : primes) {
        const mpz_class pz(p);
        unsigned long have = 0;
        for (unsigned long i = 1; i <= n; ++i)
            have += detail::valuation_unchecked(pz, prog.term(i));
        if (have < detail::legendre_unchecked(pz, n)) {
            divides = false;
            break;
        }
    }
    bool coprime = true;
    for (unsigned long p : primes)
        if (mpz_divisible_ui_p(prog.b().get_mpz_t(), p)) {
            coprime = false;
            break;
        }
    return {divides, coprime, divides == coprime};
}

namespace detail {

struct QuotientAssignment {
    std::vector<mpz_class> parts;  // per index 1..n; unassigned stay 1
    mpz_class q = 1;               // factorial share of the primes dividing b
};

// Canonical greedy split of the quotient's prime powers. For every prime p
// not dividing b, the quotient carries e_p = sum_i v_p(a+bi) - v_p(n!); the
// whole power p^{e_p} goes to the smallest index attaining the maximal
// v_p(a+bi). Primes dividing b never divide a term (gcd(a, b) = 1), so
// their factorial share p^{v_p(n!)} accumulates in q instead. e_p < 0 or
// e_p above the maximal term valuation cannot happen if the divisibility
// relations hold; both raise invariant_failure and identify the prime.
inline QuotientAssignment assign_quotient_prime_powers(const Progression& prog) {
    const unsigned long n = prog.n();
    std::vector<std::map<mpz_class, unsigned long>> term_exponents(n);
    std::set<mpz_class> candidates;
    for (unsigned long i = 0; i < n; ++i) {
        for (const PrimePower& pp : factorize(prog.term(i + 1)).entries) {
            term_exponents[i][pp.prime] = pp.exponent;
            candidates.insert(pp.prime);
        }
    }
    for (unsigned long p : primes_upto(n)) candidates.insert(mpz_class(p));

    QuotientAssignment out;
    out.parts.assign(n, mpz_class(1));
    for (const mpz_class& p : candidates) {
        if (mpz_divisible_p(prog.b().get_mpz_t(), p.get_mpz_t())) {
            // only sieve primes (p <= n) can land here; term primes are coprime to b
            out.q *= pow_ui(p, legendre_unchecked(p, n));
            continue;
        }
        unsigned long total = 0, max_exp = 0;
        unsigned long max_index = 0;  // 0 = none seen yet; indices are 1-based
        for (unsigned long i = 0; i < n; ++i) {
            const auto it = term_exponents[i].find(p);
            const unsigned long e = it == term_exponents[i].end() ? 0 : it->second;
            total += e;
            if (e > max_exp) {
                max_exp = e;
                max_index = i + 1;
            }
        }
        const unsigned long factorial_share = p <= n ? legendre_unchecked(p, n) : 0;
        if (total < factorial_share)
            throw invariant_failure(
                "quotient valuation is negative: sum of term valuations " +
                    std::to_string(total) + " is below the factorial exponent " +
                    std::to_string(factorial_share),
                prog.describe(), p.get_str());
        const unsigned long excess = total - factorial_share;
        if (excess == 0) continue;
        if (excess > max_exp)
            throw invariant_failure(
                "quotient valuation " + std::to_string(excess) +
                    " exceeds the maximal term valuation " + std::to_string(max_exp),
                prog.describe(), p.get_str());
        out.parts[max_index - 1] *= pow_ui(p, excess);
    }
    return out;
}

inline std::vector<IndexedFactor> indexed(const std::vector<mpz_class>& parts) {
    std::vector<IndexedFactor> out;
    out.reserve(parts.size());
    for (std::size_t i = 0; i < parts.size(); ++i)
        out.push_back({static_cast<unsigned long>(i + 1), parts[i]});
    return out;
}

inline bool factorial_coprime_to_ratio(const Progression& prog) {
    for (unsigned long p : primes_upto(prog.n()))
        if (mpz_divisible_ui_p(prog.b().get_mpz_t(), p)) return false;
    return true;
}

}  // namespace detail

/// Splits the integer quotient (a+b)...(a+nb) / n! into pairwise coprime
/// divisors of the terms. Requires gcd(n!, b) = 1 (which makes the quotient
/// an integer); validates the certificate before returning it.
inline CoprimeFactorization coprime_factorization(const Progression& prog) {
    if (!detail::factorial_coprime_to_ratio(prog))
        throw precondition_error("coprime_factorization requires gcd(n!, b) = 1");
    detail::QuotientAssignment assignment = detail::assign_quotient_prime_powers(prog);
    CoprimeFactorization cert{detail::indexed(assignment.parts)};
    const CheckResult check = check_coprime_factorization(prog, cert);
    if (!check.ok)
        throw invariant_failure("certificate failed independent validation: " + check.reason,
                                prog.describe());
    return cert;
}

/// gcd(n!, b) = 1 and a + b > lcm(1..n): the hypothesis under which the
/// strict factorization is guaranteed.
inline bool thm3_hypothesis(const Progression& prog) {
    if (!detail::factorial_coprime_to_ratio(prog)) return false;
    return prog.a() + prog.b() > lcm_upto(prog.n());
}

/// Coprime factorization with every part > 1. A part equal to 1 under the
/// hypothesis would contradict the strict factorization claim, so it is
/// surfaced as invariant_failure, never repaired.
inline CoprimeFactorization strict_factorization(const Progression& prog) {
    if (!thm3_hypothesis(prog))
        throw precondition_error(
            "strict_factorization requires gcd(n!, b) = 1 and a + b > lcm(1..n)");
    CoprimeFactorization cert = coprime_factorization(prog);
    for (const IndexedFactor& f : cert.factors)
        if (f.factor == 1)
            throw invariant_failure("strict factorization failed: factor 1 at index " +
                                        std::to_string(f.index),
                                    prog.describe());
    return cert;
}

/// Number of distinct primes dividing (a+b)...(a+nb), by factoring each term
/// and taking the union.
inline std::size_t distinct_prime_count(const Progression& prog) {
    std::set<mpz_class> primes;
    for (unsigned long i = 1; i <= prog.n(); ++i)
        for (const PrimePower& pp : factorize(prog.term(i)).entries) primes.insert(pp.prime);
    return primes.size();
}

/// Lowest-terms representation quotient = P/q with P split into pairwise
/// coprime term divisors and q carrying exactly the factorial prime powers
/// of the primes dividing b. Defined for n > 1.
inline PQRepresentation pq_representation(const Progression& prog) {
    if (prog.n() <= 1) throw precondition_error("pq_representation requires n > 1");
    detail::QuotientAssignment assignment = detail::assign_quotient_prime_powers(prog);
    PQRepresentation rep{detail::indexed(assignment.parts), assignment.q};
    const CheckResult check = check_pq_representation(prog, rep);
    if (!check.ok)
        throw invariant_failure("certificate failed independent validation: " + check.reason,
                                prog.describe());
    return rep;
}

/// True when no term a + b*i divides lcm(1..n-1). Needs n >= 2; the empty
/// lcm range below that has no sensible reading.
inline bool langevin_condition(const Progression& prog) {
    if (prog.n() < 2) throw precondition_error("langevin_condition requires n >= 2");
    const mpz_class bound = lcm_upto(prog.n() - 1);
    for (unsigned long i = 1; i <= prog.n(); ++i) {
        const mpz_class t = prog.term(i);
        if (mpz_divisible_p(bound.get_mpz_t(), t.get_mpz_t())) return false;
    }
    return true;
}

/// P/q representation with every P-factor > 1, attempted under the lcm
/// condition. The strictness claim is checked, not assumed: progressions
/// where the canonical construction leaves a factor at 1 are reported via
/// invariant_failure as candidate counterexamples.
inline PQRepresentation strict_pq_representation(const Progression& prog) {
    if (prog.n() <= 1) throw precondition_error("strict_pq_representation requires n > 1");
    if (!langevin_condition(prog))
        throw precondition_error(
            "strict_pq_representation requires that no term divides lcm(1..n-1)");
    PQRepresentation rep = pq_representation(prog);
    for (const IndexedFactor& f : rep.p_factors)
        if (f.factor == 1)
            throw invariant_failure("strict P/Q representation failed: factor 1 at index " +
                                        std::to_string(f.index),
                                    prog.describe());
    return rep;
}

}  // namespace apfactor
