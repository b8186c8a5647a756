#pragma once

// Command-line surface. Exit codes: 0 success / condition true, 1 condition
// false or invariant failures recorded, 2 invalid input or unmet
// precondition, 3 internal error.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "apfactor/errors.hpp"
#include "apfactor/grimm.hpp"
#include "apfactor/progression.hpp"
#include "apfactor/serialize.hpp"
#include "apfactor/sweep.hpp"
#include "apfactor/theorems.hpp"

namespace apfactor::cli {

namespace detail {

inline mpz_class parse_mpz(const std::string& text, const char* what) {
    try {
        return mpz_class(text);
    } catch (const std::invalid_argument&) {
        throw precondition_error(std::string(what) + ": invalid decimal integer \"" + text +
                                 "\"");
    }
}

inline unsigned long parse_ulong(const std::string& text, const char* what) {
    const mpz_class v = parse_mpz(text, what);
    if (v < 0 || !v.fits_ulong_p())
        throw precondition_error(std::string(what) + ": out of range \"" + text + "\"");
    return v.get_ui();
}

inline Progression parse_progression(const std::string& a, const std::string& b,
                                     const std::string& n) {
    return Progression(parse_mpz(a, "a"), parse_mpz(b, "b"), parse_ulong(n, "n"));
}

inline void print_progression_header(const Progression& prog) {
    std::cout << "progression: " << prog.describe() << "\n";
    std::cout << "terms:";
    for (unsigned long i = 1; i <= prog.n(); ++i) std::cout << ' ' << prog.term(i);
    std::cout << "\n";
    const ExactRatio ratio = quotient(prog);
    std::cout << "quotient: " << ratio.numerator;
    if (ratio.denominator != 1) std::cout << '/' << ratio.denominator;
    std::cout << "\n";
}

inline void print_factor_table(const Progression& prog,
                               const std::vector<IndexedFactor>& factors) {
    std::cout << "certificate (index, term, factor):\n";
    for (const IndexedFactor& f : factors)
        std::cout << "  " << f.index << "  " << prog.term(f.index) << "  " << f.factor << "\n";
}

inline json load_json_file(const std::string& path) {
    std::ifstream input(path);
    if (!input) throw precondition_error("cannot open certificate file " + path);
    try {
        return json::parse(input);
    } catch (const nlohmann::json::parse_error& e) {
        throw precondition_error("certificate file " + path + " is not valid JSON: " + e.what());
    }
}

inline int report_check(const CheckResult& check, bool json_mode) {
    if (json_mode) {
        json out{{"valid", check.ok}};
        if (!check.ok) out["reason"] = check.reason;
        std::cout << out.dump(2) << "\n";
    } else if (check.ok) {
        std::cout << "certificate valid\n";
    } else {
        std::cout << "certificate invalid: " << check.reason << "\n";
    }
    return check.ok ? 0 : 1;
}

enum class CertKind { factor, strict_factor, pq, strict_pq };

inline int run_certificate_command(CertKind kind, const std::string& a, const std::string& b,
                                   const std::string& n, bool json_mode,
                                   const std::string& verify_path) {
    const Progression prog = parse_progression(a, b, n);
    const bool strict = kind == CertKind::strict_factor || kind == CertKind::strict_pq;
    const bool pq_kind = kind == CertKind::pq || kind == CertKind::strict_pq;

    if (!verify_path.empty()) {
        // verification always goes through the independent checker, never
        // through the construction path
        const json doc = load_json_file(verify_path);
        if (pq_kind)
            return report_check(
                check_pq_representation(prog, pq_representation_from_json(doc), strict),
                json_mode);
        return report_check(
            check_coprime_factorization(prog, coprime_factorization_from_json(doc), strict),
            json_mode);
    }

    try {
        if (pq_kind) {
            const PQRepresentation rep =
                kind == CertKind::strict_pq ? strict_pq_representation(prog)
                                            : pq_representation(prog);
            if (json_mode) {
                std::cout << to_json(rep).dump(2) << "\n";
            } else {
                print_progression_header(prog);
                print_factor_table(prog, rep.p_factors);
                std::cout << "q: " << rep.q << "\n";
            }
        } else {
            const CoprimeFactorization cert = kind == CertKind::strict_factor
                                                  ? strict_factorization(prog)
                                                  : coprime_factorization(prog);
            if (json_mode) {
                std::cout << to_json(cert).dump(2) << "\n";
            } else {
                print_progression_header(prog);
                print_factor_table(prog, cert.factors);
            }
        }
        return 0;
    } catch (const invariant_failure& e) {
        if (json_mode) {
            json out{{"invariant_failure",
                      json{{"detail", e.detail()},
                           {"progression", e.progression()},
                           {"prime", e.prime()}}}};
            std::cout << out.dump(2) << "\n";
        }
        std::cerr << "invariant failure (candidate counterexample): " << e.what() << "\n";
        return 1;
    }
}

}  // namespace detail

/// Dispatches one invocation; args exclude the program name.
inline int run(const std::vector<std::string>& args) {
    CLI::App app{"exact certificates for the divisibility of (a+b)(a+2b)...(a+nb) by n!"};
    app.require_subcommand(1);

    std::string arg_a, arg_b, arg_n, arg_p, arg_first, arg_ratio, arg_count;
    std::string verify_path;
    bool json_mode = false;

    auto add_progression_args = [&](CLI::App* cmd, bool with_verify) {
        cmd->add_option("a", arg_a, "offset a (decimal, unbounded)")->required();
        cmd->add_option("b", arg_b, "ratio b (decimal, unbounded)")->required();
        cmd->add_option("n", arg_n, "term count n")->required();
        cmd->add_flag("--json", json_mode, "emit JSON instead of text");
        if (with_verify)
            cmd->add_option("--verify", verify_path,
                            "re-check a certificate file instead of constructing one");
    };

    CLI::App* check_cmd = app.add_subcommand(
        "check-thm1", "check n! | (a+b)...(a+nb) against gcd(n!, b) = 1");
    add_progression_args(check_cmd, false);

    CLI::App* factor_cmd =
        app.add_subcommand("factor", "coprime factorization certificate for the quotient");
    add_progression_args(factor_cmd, true);

    CLI::App* strict_factor_cmd = app.add_subcommand(
        "strict-factor", "coprime factorization with every part > 1");
    add_progression_args(strict_factor_cmd, true);

    CLI::App* pq_cmd =
        app.add_subcommand("pq", "lowest-terms P/Q certificate for the quotient");
    add_progression_args(pq_cmd, true);

    CLI::App* strict_pq_cmd = app.add_subcommand(
        "strict-pq", "P/Q certificate with every P factor > 1 under the lcm condition");
    add_progression_args(strict_pq_cmd, true);

    CLI::App* langevin_cmd = app.add_subcommand(
        "langevin", "does no term divide lcm(1..n-1)?");
    add_progression_args(langevin_cmd, false);

    CLI::App* grimm_cmd = app.add_subcommand(
        "grimm", "injection from terms to distinct prime divisors, or a Hall witness");
    grimm_cmd->add_option("first", arg_first, "first term (>= 2)")->required();
    grimm_cmd->add_option("ratio", arg_ratio, "common difference (>= 1)")->required();
    grimm_cmd->add_option("count", arg_count, "term count")->required();
    grimm_cmd->add_flag("--json", json_mode, "emit JSON instead of text");

    CLI::App* legendre_cmd = app.add_subcommand("legendre", "exponent of prime p in n!");
    legendre_cmd->add_option("p", arg_p, "prime p")->required();
    legendre_cmd->add_option("n", arg_n, "n")->required();
    legendre_cmd->add_flag("--json", json_mode, "emit JSON instead of text");

    CLI::App* lcm_cmd = app.add_subcommand("lcm-upto", "least common multiple of 1..n");
    lcm_cmd->add_option("n", arg_n, "n")->required();
    lcm_cmd->add_flag("--json", json_mode, "emit JSON instead of text");

    SweepConfig sweep_config;
    std::string format_text = "jsonl";
    CLI::App* sweep_thm_cmd = app.add_subcommand(
        "sweep-theorems", "exhaustive certificate verification over an (a, b, n) grid");
    sweep_thm_cmd->add_option("--a-max", sweep_config.a_max, "largest offset a")->required();
    sweep_thm_cmd->add_option("--b-max", sweep_config.b_max, "largest ratio b")->required();
    sweep_thm_cmd->add_option("--n-max", sweep_config.n_max, "largest term count n")->required();
    sweep_thm_cmd->add_option("--out", sweep_config.output_path, "record file path")->required();
    sweep_thm_cmd->add_option("--format", format_text, "jsonl or csv");

    CLI::App* sweep_grimm_cmd = app.add_subcommand(
        "sweep-grimm", "exhaustive injection search over a (first, ratio, count) grid");
    sweep_grimm_cmd->add_option("--first-max", sweep_config.first_max, "largest first term")
        ->required();
    sweep_grimm_cmd->add_option("--ratio-max", sweep_config.ratio_max, "largest ratio")
        ->required();
    sweep_grimm_cmd->add_option("--count-max", sweep_config.count_max, "largest term count")
        ->required();
    sweep_grimm_cmd->add_option("--out", sweep_config.output_path, "record file path")
        ->required();
    sweep_grimm_cmd->add_option("--format", format_text, "jsonl or csv");

    try {
        std::vector<const char*> argv;
        argv.reserve(args.size() + 1);
        argv.push_back("apfactor");
        for (const std::string& s : args) argv.push_back(s.c_str());
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*check_cmd) {
            const Progression prog = detail::parse_progression(arg_a, arg_b, arg_n);
            const Thm1Report report = check_thm1(prog);
            if (json_mode) {
                std::cout << to_json(report).dump(2) << "\n";
            } else {
                std::cout << "n! divides the product: " << (report.divides ? "yes" : "no")
                          << "\n";
                std::cout << "gcd(n!, b) = 1: " << (report.coprime ? "yes" : "no") << "\n";
                std::cout << "consistent: " << (report.consistent ? "yes" : "no") << "\n";
            }
            return report.consistent ? 0 : 1;
        }
        if (*factor_cmd)
            return detail::run_certificate_command(detail::CertKind::factor, arg_a, arg_b,
                                                   arg_n, json_mode, verify_path);
        if (*strict_factor_cmd)
            return detail::run_certificate_command(detail::CertKind::strict_factor, arg_a,
                                                   arg_b, arg_n, json_mode, verify_path);
        if (*pq_cmd)
            return detail::run_certificate_command(detail::CertKind::pq, arg_a, arg_b, arg_n,
                                                   json_mode, verify_path);
        if (*strict_pq_cmd)
            return detail::run_certificate_command(detail::CertKind::strict_pq, arg_a, arg_b,
                                                   arg_n, json_mode, verify_path);
        if (*langevin_cmd) {
            const Progression prog = detail::parse_progression(arg_a, arg_b, arg_n);
            const bool holds = langevin_condition(prog);
            if (json_mode)
                std::cout << json{{"holds", holds}}.dump(2) << "\n";
            else
                std::cout << (holds ? "holds: no term divides lcm(1..n-1)"
                                    : "does not hold: some term divides lcm(1..n-1)")
                          << "\n";
            return holds ? 0 : 1;
        }
        if (*grimm_cmd) {
            const GeneralProgression gprog(detail::parse_mpz(arg_first, "first"),
                                           detail::parse_mpz(arg_ratio, "ratio"),
                                           detail::parse_ulong(arg_count, "count"));
            const InjectionResult result = find_injection(gprog);
            if (json_mode) {
                std::cout << to_json(gprog, result).dump(2) << "\n";
            } else {
                std::cout << "terms:";
                for (unsigned long k = 0; k < gprog.count(); ++k)
                    std::cout << ' ' << gprog.term(k);
                std::cout << "\n";
                if (result.has_assignment()) {
                    std::cout << "injection:\n";
                    for (const auto& [index, prime] : result.assignment().entries)
                        std::cout << "  " << gprog.term(static_cast<unsigned long>(index))
                                  << " -> " << prime << "\n";
                } else {
                    const HallWitness& witness = result.witness();
                    std::cout << "no injection; Hall violation witness:\n  terms:";
                    for (std::size_t index : witness.term_indices)
                        std::cout << ' ' << gprog.term(static_cast<unsigned long>(index));
                    std::cout << "\n  prime union:";
                    for (const mpz_class& p : witness.prime_union) std::cout << ' ' << p;
                    std::cout << "\n";
                }
            }
            return result.has_assignment() ? 0 : 1;
        }
        if (*legendre_cmd) {
            const mpz_class p = detail::parse_mpz(arg_p, "p");
            const unsigned long n = detail::parse_ulong(arg_n, "n");
            const unsigned long value = legendre(p, n);
            if (json_mode)
                std::cout << json{{"p", p.get_str()}, {"n", n}, {"value", value}}.dump(2)
                          << "\n";
            else
                std::cout << value << "\n";
            return 0;
        }
        if (*lcm_cmd) {
            const unsigned long n = detail::parse_ulong(arg_n, "n");
            const mpz_class value = lcm_upto(n);
            if (json_mode)
                std::cout << json{{"n", n}, {"value", value.get_str()}}.dump(2) << "\n";
            else
                std::cout << value << "\n";
            return 0;
        }
        if (*sweep_thm_cmd) {
            sweep_config.format = sweep_format_from_string(format_text);
            const TheoremSweepSummary summary = sweep_theorems(sweep_config);
            std::cout << to_json(summary).dump() << "\n";
            return summary.invariant_failures() > 0 ? 1 : 0;
        }
        if (*sweep_grimm_cmd) {
            sweep_config.format = sweep_format_from_string(format_text);
            const GrimmSweepSummary summary = sweep_grimm(sweep_config);
            std::cout << to_json(summary).dump() << "\n";
            return summary.invariant_failures > 0 ? 1 : 0;
        }
    } catch (const precondition_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const invariant_failure& e) {
        std::cerr << "invariant failure (candidate counterexample): " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
    return 2;  // unreachable with require_subcommand(1)
}

}  // namespace apfactor::cli
