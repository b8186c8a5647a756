#pragma once

// The arithmetic progressions under study and their exact products and
// quotients. Two distinct types on purpose: Progression indexes terms from
// i = 1 (a + b, ..., a + bn, with a >= 1), GeneralProgression indexes from
// its first term (first, first + ratio, ...), which is what the injection
// machinery wants. Conversion between them is explicit, never implicit.

#include <gmpxx.h>

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "apfactor/errors.hpp"

namespace apfactor {

// n! (and therefore quotients and certificate checks) is materialized only
// up to this many terms; beyond it the operations refuse to run.
inline constexpr unsigned long kMaxFactorialTerms = 5000;

/// Terms a + b*i for i = 1..n with gcd(a, b) = 1, a, b >= 1.
class Progression {
public:
    Progression(mpz_class a, mpz_class b, unsigned long n)
        : a_(std::move(a)), b_(std::move(b)), n_(n) {
        if (a_ < 1) throw precondition_error("progression: a must be >= 1");
        if (b_ < 1) throw precondition_error("progression: b must be >= 1");
        if (n_ < 1) throw precondition_error("progression: n must be >= 1");
        if (gcd(a_, b_) != 1) throw precondition_error("progression: gcd(a, b) must be 1");
    }

    const mpz_class& a() const noexcept { return a_; }
    const mpz_class& b() const noexcept { return b_; }
    unsigned long n() const noexcept { return n_; }

    /// i-th term, i in 1..n.
    mpz_class term(unsigned long i) const {
        if (i < 1 || i > n_) throw precondition_error("progression: term index out of range");
        return a_ + b_ * i;
    }

    std::string describe() const {
        std::ostringstream os;
        os << "a=" << a_ << ", b=" << b_ << ", n=" << n_;
        return os.str();
    }

    /// Parses the CLI form "a,b,n".
    static Progression parse(const std::string& text) {
        std::istringstream is(text);
        std::string fa, fb, fn;
        if (!std::getline(is, fa, ',') || !std::getline(is, fb, ',') ||
            !std::getline(is, fn) || is.rdbuf()->in_avail() > 0)
            throw precondition_error("progression: expected \"a,b,n\", got \"" + text + "\"");
        try {
            mpz_class a(fa), b(fb), n(fn);
            if (n < 1 || !n.fits_ulong_p())
                throw precondition_error("progression: n out of range in \"" + text + "\"");
            return Progression(a, b, n.get_ui());
        } catch (const std::invalid_argument&) {
            throw precondition_error("progression: invalid integer in \"" + text + "\"");
        }
    }

private:
    mpz_class a_;
    mpz_class b_;
    unsigned long n_;
};

/// Terms first + ratio*k for k = 0..count-1 with first >= 2 and
/// gcd(first, ratio) = 1. Every term is >= 2 by construction.
class GeneralProgression {
public:
    GeneralProgression(mpz_class first, mpz_class ratio, unsigned long count)
        : first_(std::move(first)), ratio_(std::move(ratio)), count_(count) {
        if (first_ < 2) throw precondition_error("general progression: first term must be >= 2");
        if (ratio_ < 1) throw precondition_error("general progression: ratio must be >= 1");
        if (count_ < 1) throw precondition_error("general progression: count must be >= 1");
        if (gcd(first_, ratio_) != 1)
            throw precondition_error("general progression: gcd(first, ratio) must be 1");
    }

    const mpz_class& first() const noexcept { return first_; }
    const mpz_class& ratio() const noexcept { return ratio_; }
    unsigned long count() const noexcept { return count_; }

    /// k-th term, k in 0..count-1.
    mpz_class term(unsigned long k) const {
        if (k >= count_) throw precondition_error("general progression: term index out of range");
        return first_ + ratio_ * k;
    }

    std::string describe() const {
        std::ostringstream os;
        os << "first=" << first_ << ", ratio=" << ratio_ << ", count=" << count_;
        return os.str();
    }

private:
    mpz_class first_;
    mpz_class ratio_;
    unsigned long count_;
};

inline std::vector<mpz_class> terms(const Progression& prog) {
    std::vector<mpz_class> out;
    out.reserve(prog.n());
    for (unsigned long i = 1; i <= prog.n(); ++i) out.push_back(prog.term(i));
    return out;
}

inline std::vector<mpz_class> terms(const GeneralProgression& gprog) {
    std::vector<mpz_class> out;
    out.reserve(gprog.count());
    for (unsigned long k = 0; k < gprog.count(); ++k) out.push_back(gprog.term(k));
    return out;
}

/// Re-bases first + ratio*k onto a + b*i with i starting at 1; only possible
/// when first > ratio (so a = first - ratio stays positive).
inline std::optional<Progression> as_progression(const GeneralProgression& gprog) {
    if (gprog.first() <= gprog.ratio()) return std::nullopt;
    return Progression(gprog.first() - gprog.ratio(), gprog.ratio(), gprog.count());
}

/// Exact product (a+b)(a+2b)...(a+nb).
inline mpz_class numerator_product(const Progression& prog) {
    mpz_class product = 1;
    for (unsigned long i = 1; i <= prog.n(); ++i) product *= prog.term(i);
    return product;
}

/// A fraction held in lowest terms.
struct ExactRatio {
    mpz_class numerator;
    mpz_class denominator;  // >= 1, gcd(numerator, denominator) == 1
};

/// (a+b)...(a+nb) / n! reduced to lowest terms.
inline ExactRatio quotient(const Progression& prog) {
    if (prog.n() > kMaxFactorialTerms)
        throw precondition_error("quotient: n exceeds the factorial materialization bound");
    mpz_class num = numerator_product(prog);
    mpz_class den;
    mpz_fac_ui(den.get_mpz_t(), prog.n());
    const mpz_class g = gcd(num, den);
    num /= g;
    den /= g;
    return {num, den};
}

}  // namespace apfactor
