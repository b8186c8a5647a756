#pragma once

// JSON wire formats. All big integers travel as decimal strings so no
// consumer ever rounds them through a double; indices and counts are plain
// JSON numbers. Parsing accepts either form for robustness.

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

#include "json.hpp"

#include "apfactor/errors.hpp"
#include "apfactor/grimm.hpp"
#include "apfactor/progression.hpp"
#include "apfactor/theorems.hpp"

namespace apfactor {

using json = nlohmann::ordered_json;

namespace detail {

inline mpz_class mpz_from_json(const json& j, const char* what) {
    try {
        if (j.is_string()) return mpz_class(j.get<std::string>());
        if (j.is_number_unsigned())
            return mpz_class(static_cast<unsigned long>(j.get<std::uint64_t>()));
        if (j.is_number_integer()) return mpz_class(static_cast<long>(j.get<std::int64_t>()));
    } catch (const std::invalid_argument&) {
        throw precondition_error(std::string(what) + ": invalid decimal integer");
    }
    throw precondition_error(std::string(what) + ": expected a decimal string or integer");
}

inline unsigned long ulong_from_json(const json& j, const char* what) {
    const mpz_class v = mpz_from_json(j, what);
    if (v < 0 || !v.fits_ulong_p())
        throw precondition_error(std::string(what) + ": out of range");
    return v.get_ui();
}

}  // namespace detail

inline json to_json(const PrimeFactorization& factorization) {
    json out = json::array();
    for (const PrimePower& pp : factorization.entries)
        out.push_back(json::array({pp.prime.get_str(), pp.exponent}));
    return out;
}

inline json to_json(const ExactRatio& ratio) {
    return json{{"numerator", ratio.numerator.get_str()},
                {"denominator", ratio.denominator.get_str()}};
}

inline json to_json(const Progression& prog) {
    return json{{"a", prog.a().get_str()},
                {"b", prog.b().get_str()},
                {"n", std::to_string(prog.n())}};
}

inline Progression progression_from_json(const json& j) {
    if (!j.is_object() || !j.contains("a") || !j.contains("b") || !j.contains("n"))
        throw precondition_error("progression: expected {\"a\":..., \"b\":..., \"n\":...}");
    return Progression(detail::mpz_from_json(j.at("a"), "progression a"),
                       detail::mpz_from_json(j.at("b"), "progression b"),
                       detail::ulong_from_json(j.at("n"), "progression n"));
}

inline json to_json(const GeneralProgression& gprog) {
    return json{{"first", gprog.first().get_str()},
                {"ratio", gprog.ratio().get_str()},
                {"count", gprog.count()}};
}

inline json to_json(const Thm1Report& report) {
    return json{{"divides", report.divides},
                {"coprime", report.coprime},
                {"consistent", report.consistent}};
}

inline json to_json(const CoprimeFactorization& cert) {
    json factors = json::array();
    for (const IndexedFactor& f : cert.factors)
        factors.push_back(json::array({f.index, f.factor.get_str()}));
    return json{{"factors", std::move(factors)}};
}

inline CoprimeFactorization coprime_factorization_from_json(const json& j) {
    if (!j.is_object() || !j.contains("factors") || !j.at("factors").is_array())
        throw precondition_error("certificate: expected {\"factors\": [[index, \"a_i\"], ...]}");
    CoprimeFactorization cert;
    for (const json& entry : j.at("factors")) {
        if (!entry.is_array() || entry.size() != 2)
            throw precondition_error("certificate: each factor must be [index, \"a_i\"]");
        cert.factors.push_back({detail::ulong_from_json(entry.at(0), "certificate index"),
                                detail::mpz_from_json(entry.at(1), "certificate factor")});
    }
    return cert;
}

inline json to_json(const PQRepresentation& rep) {
    json factors = json::array();
    for (const IndexedFactor& f : rep.p_factors)
        factors.push_back(json::array({f.index, f.factor.get_str()}));
    return json{{"p_factors", std::move(factors)}, {"q", rep.q.get_str()}};
}

inline PQRepresentation pq_representation_from_json(const json& j) {
    if (!j.is_object() || !j.contains("p_factors") || !j.at("p_factors").is_array() ||
        !j.contains("q"))
        throw precondition_error(
            "certificate: expected {\"p_factors\": [[index, \"a_i\"], ...], \"q\": \"...\"}");
    PQRepresentation rep;
    for (const json& entry : j.at("p_factors")) {
        if (!entry.is_array() || entry.size() != 2)
            throw precondition_error("certificate: each factor must be [index, \"a_i\"]");
        rep.p_factors.push_back({detail::ulong_from_json(entry.at(0), "certificate index"),
                                 detail::mpz_from_json(entry.at(1), "certificate factor")});
    }
    rep.q = detail::mpz_from_json(j.at("q"), "certificate q");
    return rep;
}

/// Assignments are keyed by term value (not index) on the wire, which keeps
/// the document meaningful without the progression at hand.
inline json to_json(const GeneralProgression& gprog, const InjectionResult& result) {
    if (result.has_assignment()) {
        json entries = json::array();
        for (const auto& [index, prime] : result.assignment().entries)
            entries.push_back(json::array(
                {gprog.term(static_cast<unsigned long>(index)).get_str(), prime.get_str()}));
        return json{{"assignment", std::move(entries)}};
    }
    const HallWitness& witness = result.witness();
    json terms = json::array();
    for (std::size_t index : witness.term_indices)
        terms.push_back(gprog.term(static_cast<unsigned long>(index)).get_str());
    json primes = json::array();
    for (const mpz_class& p : witness.prime_union) primes.push_back(p.get_str());
    return json{{"witness", json{{"terms", std::move(terms)}, {"prime_union", std::move(primes)}}}};
}

inline InjectionAssignment injection_assignment_from_json(const GeneralProgression& gprog,
                                                          const json& j) {
    if (!j.is_object() || !j.contains("assignment") || !j.at("assignment").is_array())
        throw precondition_error("injection: expected {\"assignment\": [[term, \"prime\"], ...]}");
    InjectionAssignment assignment;
    for (const json& entry : j.at("assignment")) {
        if (!entry.is_array() || entry.size() != 2)
            throw precondition_error("injection: each entry must be [term, \"prime\"]");
        const mpz_class term = detail::mpz_from_json(entry.at(0), "injection term");
        const mpz_class prime = detail::mpz_from_json(entry.at(1), "injection prime");
        // map the term value back onto its index
        const mpz_class offset = term - gprog.first();
        if (offset < 0 || !mpz_divisible_p(offset.get_mpz_t(), gprog.ratio().get_mpz_t()))
            throw precondition_error("injection: " + term.get_str() +
                                     " is not a term of the progression");
        const mpz_class k = offset / gprog.ratio();
        if (!k.fits_ulong_p() || k.get_ui() >= gprog.count())
            throw precondition_error("injection: " + term.get_str() +
                                     " is not a term of the progression");
        assignment.entries.emplace_back(static_cast<std::size_t>(k.get_ui()), prime);
    }
    return assignment;
}

}  // namespace apfactor
