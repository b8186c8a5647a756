#pragma once

// Exact integer primitives: p-adic valuations, factorial prime exponents,
// lcm(1..n), modular inverses, deterministic primality and factorization.
// Arbitrary-precision values are GMP's mpz_class; every function here is a
// pure function of its inputs and safe to call concurrently.

#include <gmpxx.h>

#include <cstddef>
#include <iterator>
#include <map>
#include <vector>

#include "apfactor/errors.hpp"

namespace apfactor {

/// One prime-power entry of an exact factorization.
struct PrimePower {
    mpz_class prime;
    unsigned long exponent = 0;
};

/// Canonical factorization: primes strictly ascending, exponents >= 1,
/// empty for m = 1. The product of the entries reconstructs m.
struct PrimeFactorization {
    std::vector<PrimePower> entries;

    mpz_class value() const {
        mpz_class v = 1;
        for (const PrimePower& pp : entries) {
            mpz_class power;
            mpz_pow_ui(power.get_mpz_t(), pp.prime.get_mpz_t(), pp.exponent);
            v *= power;
        }
        return v;
    }
};

inline mpz_class pow_ui(const mpz_class& base, unsigned long exponent) {
    mpz_class r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exponent);
    return r;
}

// ---------------------------------------------------------------------------
// primality

namespace detail {

inline constexpr unsigned long kMillerRabinBases[] = {
    2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37, 41,  // complete below the proven bound
    43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97};     // extra battery beyond it

// The first 13 prime bases decide primality exactly for every
// m < 3317044064679887385961981 (~2^81.5), which covers the whole 64-bit
// range with a wide margin. Above the bound the verdict is a 25-base
// strong-pseudoprime test, not a proof.
inline const mpz_class& exact_primality_bound() {
    static const mpz_class bound("3317044064679887385961981");
    return bound;
}

// true when `base` witnesses compositeness of odd m = 2^two_exp * odd_part + 1
inline bool mr_composite(const mpz_class& m, unsigned long base,
                         const mpz_class& odd_part, unsigned long two_exp) {
    mpz_class a(base);
    a %= m;
    if (a == 0) return false;
    mpz_class x;
    mpz_powm(x.get_mpz_t(), a.get_mpz_t(), odd_part.get_mpz_t(), m.get_mpz_t());
    if (x == 1 || x == m - 1) return false;
    for (unsigned long i = 1; i < two_exp; ++i) {
        x = x * x % m;
        if (x == m - 1) return false;
        if (x == 1) return true;
    }
    return true;
}

}  // namespace detail

/// Deterministic primality. Exact for all inputs below ~3.3e24 (documented
/// in detail::exact_primality_bound); larger inputs get a fixed
/// strong-pseudoprime battery, so the answer is still deterministic.
inline bool is_prime(const mpz_class& m) {
    if (m < 2) return false;
    for (unsigned long p : detail::kMillerRabinBases) {
        if (m == p) return true;
        if (mpz_divisible_ui_p(m.get_mpz_t(), p)) return false;
    }
    if (m < 10201) return true;  // 101^2: no factor <= 97 remains
    mpz_class odd_part = m - 1;
    const unsigned long two_exp =
        static_cast<unsigned long>(mpz_scan1(odd_part.get_mpz_t(), 0));
    mpz_fdiv_q_2exp(odd_part.get_mpz_t(), odd_part.get_mpz_t(), two_exp);
    const std::size_t base_count =
        m < detail::exact_primality_bound() ? 13 : std::size(detail::kMillerRabinBases);
    for (std::size_t i = 0; i < base_count; ++i)
        if (detail::mr_composite(m, detail::kMillerRabinBases[i], odd_part, two_exp))
            return false;
    return true;
}

namespace detail {

// valuation for callers that already know p is prime
inline unsigned long valuation_unchecked(const mpz_class& p, const mpz_class& m) {
    mpz_class reduced;
    return static_cast<unsigned long>(
        mpz_remove(reduced.get_mpz_t(), m.get_mpz_t(), p.get_mpz_t()));
}

inline unsigned long legendre_unchecked(const mpz_class& p, unsigned long n) {
    unsigned long total = 0;
    mpz_class pk = p;
    while (pk <= n) {
        mpz_class term = n / pk;
        total += term.get_ui();
        pk *= p;
    }
    return total;
}

}  // namespace detail

/// Largest e with p^e | m. Rejects m = 0 (the valuation would be infinite)
/// and non-prime p.
inline unsigned long valuation(const mpz_class& p, const mpz_class& m) {
    if (m < 1) throw precondition_error("valuation: m must be a positive integer");
    if (!is_prime(p)) throw precondition_error("valuation: p must be prime");
    return detail::valuation_unchecked(p, m);
}

/// Exponent of p in n! by the floor sum; n! itself is never formed.
inline unsigned long legendre(const mpz_class& p, unsigned long n) {
    if (n == 0) throw precondition_error("legendre: n must be >= 1");
    if (!is_prime(p)) throw precondition_error("legendre: p must be prime");
    return detail::legendre_unchecked(p, n);
}

/// Ascending primes <= n via sieve of Eratosthenes.
inline std::vector<unsigned long> primes_upto(unsigned long n) {
    std::vector<unsigned long> primes;
    if (n < 2) return primes;
    std::vector<char> composite(n + 1, 0);
    for (unsigned long i = 2; i <= n; ++i) {
        if (composite[i]) continue;
        primes.push_back(i);
        if (i <= n / i)
            for (unsigned long j = i * i; j <= n; j += i) composite[j] = 1;
    }
    return primes;
}

/// lcm(1..n) as the product over primes p <= n of the maximal power p^k <= n.
/// The exponent is found by exact integer comparison; floating-point logs
/// would misplace ties at exact powers.
inline mpz_class lcm_upto(unsigned long n) {
    if (n == 0) throw precondition_error("lcm_upto: n must be >= 1");
    mpz_class result = 1;
    for (unsigned long p : primes_upto(n)) {
        unsigned long pk = p;
        while (pk <= n / p) pk *= p;
        result *= pk;
    }
    return result;
}

/// Unique x in [1, m-1] with b*x == 1 (mod m).
inline mpz_class mod_inverse(const mpz_class& b, const mpz_class& m) {
    if (b < 1) throw precondition_error("mod_inverse: b must be positive");
    if (m < 2) throw precondition_error("mod_inverse: modulus must be >= 2");
    mpz_class inverse;
    if (mpz_invert(inverse.get_mpz_t(), b.get_mpz_t(), m.get_mpz_t()) == 0)
        throw precondition_error("mod_inverse: not invertible, gcd(b, m) > 1");
    return inverse;
}

// ---------------------------------------------------------------------------
// factorization

// Strategy: trial division by sieved primes up to kTrialDivisionBound, exact
// primality on the remainder, perfect-power reduction, then Pollard's rho
// with deterministic parameters. Inputs are desk scale (a few hundred bits);
// no sub-exponential machinery.
inline constexpr unsigned long kTrialDivisionBound = 100000;

namespace detail {

inline const std::vector<unsigned long>& trial_primes() {
    // built once, immutable afterwards: race-free for concurrent readers
    static const std::vector<unsigned long> primes = primes_upto(kTrialDivisionBound);
    return primes;
}

// n odd, composite, no prime factor below the trial bound. Deterministic:
// iterate x^2 + c with c = 1, 2, ... until a proper divisor shows up.
inline mpz_class pollard_rho(const mpz_class& n) {
    for (unsigned long c = 1;; ++c) {
        mpz_class tortoise = 2, hare = 2;
        while (true) {
            tortoise = (tortoise * tortoise + c) % n;
            hare = (hare * hare + c) % n;
            hare = (hare * hare + c) % n;
            if (tortoise == hare) break;  // cycle closed without a divisor; bump c
            mpz_class d = gcd(mpz_class(tortoise - hare), n);
            if (d > 1) {
                if (d < n) return d;
                break;
            }
        }
    }
}

inline void factor_recursive(const mpz_class& m, std::map<mpz_class, unsigned long>& out) {
    if (m == 1) return;
    if (is_prime(m)) {
        out[m] += 1;
        return;
    }
    if (mpz_perfect_power_p(m.get_mpz_t())) {
        for (unsigned long k = 2;; ++k) {
            mpz_class root, rem;
            mpz_rootrem(root.get_mpz_t(), rem.get_mpz_t(), m.get_mpz_t(), k);
            if (root <= 1) break;
            if (rem == 0) {
                std::map<mpz_class, unsigned long> sub;
                factor_recursive(root, sub);
                for (const auto& [p, e] : sub) out[p] += e * k;
                return;
            }
        }
    }
    const mpz_class d = pollard_rho(m);
    factor_recursive(d, out);
    factor_recursive(m / d, out);
}

}  // namespace detail

/// Canonical prime factorization; empty for m = 1, rejects m = 0.
inline PrimeFactorization factorize(const mpz_class& m) {
    if (m < 1) throw precondition_error("factorize: m must be a positive integer");
    std::map<mpz_class, unsigned long> acc;
    mpz_class rest = m;
    for (unsigned long p : detail::trial_primes()) {
        if (mpz_class(p) * p > rest) break;
        if (!mpz_divisible_ui_p(rest.get_mpz_t(), p)) continue;
        unsigned long e = 0;
        do {
            mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), p);
            ++e;
        } while (mpz_divisible_ui_p(rest.get_mpz_t(), p));
        acc[mpz_class(p)] = e;
    }
    if (rest > 1) detail::factor_recursive(rest, acc);
    PrimeFactorization result;
    result.entries.reserve(acc.size());
    for (const auto& [p, e] : acc) result.entries.push_back({p, e});
    return result;
}

}  // namespace apfactor
