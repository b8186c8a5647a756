#pragma once

// Injection from progression terms to distinct prime divisors, decided by
// maximum bipartite matching. When no injection exists the result carries a
// Hall-violation witness: a set of terms whose union of prime divisors is
// strictly smaller than the set.

#include <gmpxx.h>

#include <cstddef>
#include <map>
#include <set>
#include <stdexcept>
#include <variant>
#include <vector>

#include "apfactor/arith.hpp"
#include "apfactor/errors.hpp"
#include "apfactor/progression.hpp"

namespace apfactor {

/// Distinct prime divisors per term, ascending, 0-based term indexing.
struct DivisorGraph {
    std::size_t term_count = 0;
    std::vector<std::vector<mpz_class>> adjacency;
};

/// Term index -> chosen prime, one entry per index, primes pairwise distinct.
struct InjectionAssignment {
    std::vector<std::pair<std::size_t, mpz_class>> entries;
};

/// Term indices whose prime divisors union to fewer elements than the set.
struct HallWitness {
    std::vector<std::size_t> term_indices;  // ascending
    std::vector<mpz_class> prime_union;     // ascending, strictly smaller
};

struct InjectionResult {
    std::variant<InjectionAssignment, HallWitness> outcome;

    bool has_assignment() const noexcept {
        return std::holds_alternative<InjectionAssignment>(outcome);
    }
    const InjectionAssignment& assignment() const {
        return std::get<InjectionAssignment>(outcome);
    }
    const HallWitness& witness() const { return std::get<HallWitness>(outcome); }
};

/// Factorizes every term into its ascending distinct prime divisors.
inline DivisorGraph build_graph(const GeneralProgression& gprog) {
    DivisorGraph graph;
    graph.term_count = gprog.count();
    graph.adjacency.reserve(gprog.count());
    for (unsigned long k = 0; k < gprog.count(); ++k) {
        std::vector<mpz_class> primes;
        for (const PrimePower& pp : factorize(gprog.term(k)).entries)
            primes.push_back(pp.prime);
        graph.adjacency.push_back(std::move(primes));
    }
    return graph;
}

namespace detail {

inline bool augment(std::size_t term, const std::vector<std::vector<std::size_t>>& adj,
                    std::vector<char>& visited, std::vector<std::ptrdiff_t>& match_of_prime) {
    for (std::size_t prime : adj[term]) {
        if (visited[prime]) continue;
        visited[prime] = 1;
        if (match_of_prime[prime] < 0 ||
            augment(static_cast<std::size_t>(match_of_prime[prime]), adj, visited,
                    match_of_prime)) {
            match_of_prime[prime] = static_cast<std::ptrdiff_t>(term);
            return true;
        }
    }
    return false;
}

}  // namespace detail

/// Augmenting-path maximum matching on the divisor graph. Saturating all
/// terms yields the injection; otherwise alternating reachability from the
/// smallest unmatched term gives a set S of terms whose neighbourhood has
/// exactly |S| - 1 primes, the Hall-violation witness.
inline InjectionResult find_injection(const GeneralProgression& gprog) {
    const DivisorGraph graph = build_graph(gprog);
    const std::size_t n = graph.term_count;

    std::map<mpz_class, std::size_t> prime_id;
    std::vector<mpz_class> prime_of_id;
    std::vector<std::vector<std::size_t>> adj(n);
    for (std::size_t t = 0; t < n; ++t) {
        for (const mpz_class& p : graph.adjacency[t]) {
            auto [it, inserted] = prime_id.emplace(p, prime_of_id.size());
            if (inserted) prime_of_id.push_back(p);
            adj[t].push_back(it->second);
        }
    }

    std::vector<std::ptrdiff_t> match_of_prime(prime_of_id.size(), -1);
    std::vector<std::ptrdiff_t> match_of_term(n, -1);
    for (std::size_t t = 0; t < n; ++t) {
        std::vector<char> visited(prime_of_id.size(), 0);
        detail::augment(t, adj, visited, match_of_prime);
    }
    for (std::size_t p = 0; p < match_of_prime.size(); ++p)
        if (match_of_prime[p] >= 0) match_of_term[match_of_prime[p]] = static_cast<std::ptrdiff_t>(p);

    std::size_t unmatched = n;
    for (std::size_t t = 0; t < n; ++t)
        if (match_of_term[t] < 0) {
            unmatched = t;
            break;
        }

    if (unmatched == n) {
        InjectionAssignment assignment;
        assignment.entries.reserve(n);
        for (std::size_t t = 0; t < n; ++t)
            assignment.entries.emplace_back(t, prime_of_id[match_of_term[t]]);
        return {assignment};
    }

    // Koenig-style witness: depth-first alternating reachability starting at
    // the unmatched term. Every reachable prime is matched (otherwise an
    // augmenting path would exist), and the matching pairs the reachable
    // primes with the reachable terms minus the start, so |primes| = |S| - 1.
    std::vector<char> term_seen(n, 0), prime_seen(prime_of_id.size(), 0);
    std::vector<std::size_t> stack{unmatched};
    term_seen[unmatched] = 1;
    while (!stack.empty()) {
        const std::size_t t = stack.back();
        stack.pop_back();
        for (std::size_t p : adj[t]) {
            if (prime_seen[p]) continue;
            prime_seen[p] = 1;
            if (match_of_prime[p] < 0)
                throw std::logic_error("free prime reachable from an unmatched term");
            const std::size_t owner = static_cast<std::size_t>(match_of_prime[p]);
            if (!term_seen[owner]) {
                term_seen[owner] = 1;
                stack.push_back(owner);
            }
        }
    }
    HallWitness witness;
    for (std::size_t t = 0; t < n; ++t)
        if (term_seen[t]) witness.term_indices.push_back(t);
    for (std::size_t p = 0; p < prime_of_id.size(); ++p)
        if (prime_seen[p]) witness.prime_union.push_back(prime_of_id[p]);
    std::set<mpz_class> ordered(witness.prime_union.begin(), witness.prime_union.end());
    witness.prime_union.assign(ordered.begin(), ordered.end());
    if (witness.prime_union.size() >= witness.term_indices.size())
        throw std::logic_error("witness extraction produced a non-violating set");
    return {witness};
}

/// Independent re-check of an injection: exact index coverage is a
/// structural requirement (violations are rejected), then each value must
/// divide its term and all values must be pairwise distinct. Shares nothing
/// with the matching machinery; terms are recomputed directly.
inline bool verify_injection(const GeneralProgression& gprog,
                             const InjectionAssignment& assignment) {
    const std::size_t n = gprog.count();
    if (assignment.entries.size() != n)
        throw precondition_error("verify_injection: assignment must cover every term index");
    std::vector<char> seen(n, 0);
    for (const auto& [index, value] : assignment.entries) {
        if (index >= n || seen[index])
            throw precondition_error("verify_injection: malformed term index set");
        seen[index] = 1;
        if (value < 1) throw precondition_error("verify_injection: values must be positive");
    }
    std::set<mpz_class> used;
    for (const auto& [index, value] : assignment.entries) {
        const mpz_class term = gprog.first() + gprog.ratio() * index;
        if (!mpz_divisible_p(term.get_mpz_t(), value.get_mpz_t())) return false;
        if (!used.insert(value).second) return false;
    }
    return true;
}

}  // namespace apfactor
