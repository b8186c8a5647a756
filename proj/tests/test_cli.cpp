#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "apfactor/cli.hpp"

using namespace apfactor;

namespace {

struct Captured {
    int exit_code = 0;
    std::string out;
    std::string err;
};

Captured run_cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    std::streambuf* old_out = std::cout.rdbuf(out.rdbuf());
    std::streambuf* old_err = std::cerr.rdbuf(err.rdbuf());
    Captured captured;
    try {
        captured.exit_code = cli::run(args);
    } catch (...) {
        std::cout.rdbuf(old_out);
        std::cerr.rdbuf(old_err);
        throw;
    }
    std::cout.rdbuf(old_out);
    std::cerr.rdbuf(old_err);
    captured.out = out.str();
    captured.err = err.str();
    return captured;
}

std::string temp_file(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("apfactor_cli_" + name)).string();
}

}  // namespace

TEST_CASE("factor emits the certificate and exit 0") {
    const Captured r = run_cli({"factor", "2", "5", "3", "--json"});
    CHECK(r.exit_code == 0);
    const json doc = json::parse(r.out);
    REQUIRE(doc.contains("factors"));
    CHECK(doc.at("factors") ==
          json::parse(R"([[1, "7"], [2, "2"], [3, "17"]])"));
}

TEST_CASE("gcd violation exits 2") {
    const Captured r = run_cli({"check-thm1", "2", "2", "3"});
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("gcd") != std::string::npos);
}

TEST_CASE("the ratio-13 witness exits 1") {
    const Captured r = run_cli({"grimm", "12", "13", "7"});
    CHECK(r.exit_code == 1);
    CHECK(r.out.find("12 25 64 90") != std::string::npos);

    const Captured j = run_cli({"grimm", "12", "13", "7", "--json"});
    CHECK(j.exit_code == 1);
    const json doc = json::parse(j.out);
    REQUIRE(doc.contains("witness"));
    CHECK(doc.at("witness").at("prime_union") == json::parse(R"(["2", "3", "5"])"));
    CHECK(doc.at("witness").at("terms") == json::parse(R"(["12", "25", "64", "90"])"));
}

TEST_CASE("every subcommand emits one valid JSON document under --json") {
    const std::string sweep_out = temp_file("json_sweep.jsonl");
    const std::vector<std::vector<std::string>> invocations = {
        {"check-thm1", "2", "5", "3", "--json"},
        {"factor", "2", "5", "3", "--json"},
        {"strict-factor", "2", "5", "3", "--json"},
        {"pq", "1", "2", "3", "--json"},
        {"strict-pq", "2", "5", "3", "--json"},
        {"langevin", "1", "1", "4", "--json"},
        {"grimm", "24", "1", "5", "--json"},
        {"legendre", "2", "10", "--json"},
        {"lcm-upto", "10", "--json"},
        {"sweep-theorems", "--a-max", "2", "--b-max", "2", "--n-max", "2", "--out", sweep_out},
        {"sweep-grimm", "--first-max", "4", "--ratio-max", "2", "--count-max", "2", "--out",
         sweep_out},
    };
    for (const auto& args : invocations) {
        const Captured r = run_cli(args);
        INFO("subcommand: " << args[0]);
        CHECK_NOTHROW(json::parse(r.out));
    }
    std::filesystem::remove(sweep_out);
}

TEST_CASE("condition subcommands use the exit code as the answer") {
    CHECK(run_cli({"langevin", "2", "5", "3"}).exit_code == 0);
    CHECK(run_cli({"langevin", "1", "1", "4"}).exit_code == 1);
    CHECK(run_cli({"langevin", "1", "1", "1"}).exit_code == 2);  // n = 1 rejected
    CHECK(run_cli({"grimm", "24", "1", "5"}).exit_code == 0);
    CHECK(run_cli({"check-thm1", "1", "2", "2"}).exit_code == 0);  // consistent
}

TEST_CASE("known values through the CLI") {
    CHECK(run_cli({"legendre", "2", "10"}).out == "8\n");
    CHECK(run_cli({"lcm-upto", "10"}).out == "2520\n");
    CHECK(run_cli({"legendre", "6", "10"}).exit_code == 2);  // non-prime p
}

TEST_CASE("strict-pq candidate counterexample exits 1 and stays a JSON document") {
    const Captured r = run_cli({"strict-pq", "1", "2", "3", "--json"});
    CHECK(r.exit_code == 1);
    const json doc = json::parse(r.out);
    REQUIRE(doc.contains("invariant_failure"));
    CHECK(doc.at("invariant_failure").at("progression") == "a=1, b=2, n=3");

    const Captured human = run_cli({"strict-pq", "1", "2", "3"});
    CHECK(human.exit_code == 1);
    CHECK(human.err.find("candidate counterexample") != std::string::npos);
}

TEST_CASE("precondition failures exit 2") {
    CHECK(run_cli({"factor", "1", "2", "2"}).exit_code == 2);        // gcd(2!, 2) = 2
    CHECK(run_cli({"strict-factor", "1", "5", "3"}).exit_code == 2); // 6 > 6 fails
    CHECK(run_cli({"pq", "1", "2", "1"}).exit_code == 2);            // n = 1
    CHECK(run_cli({"strict-pq", "1", "1", "4"}).exit_code == 2);     // lcm condition fails
    CHECK(run_cli({"factor", "x", "2", "3"}).exit_code == 2);        // bad integer
    CHECK(run_cli({"grimm", "1", "1", "1"}).exit_code == 2);         // first < 2
}

TEST_CASE("unknown subcommand exits 2 with usage on stderr") {
    const Captured r = run_cli({"no-such-command"});
    CHECK(r.exit_code == 2);
    CHECK_FALSE(r.err.empty());
    CHECK(run_cli({}).exit_code == 2);
}

TEST_CASE("emitted certificates round trip through verify") {
    const std::string factor_path = temp_file("factor_cert.json");
    {
        const Captured produced = run_cli({"factor", "2", "5", "3", "--json"});
        REQUIRE(produced.exit_code == 0);
        std::ofstream(factor_path) << produced.out;
    }
    CHECK(run_cli({"factor", "--verify", factor_path, "2", "5", "3"}).exit_code == 0);
    CHECK(run_cli({"strict-factor", "--verify", factor_path, "2", "5", "3"}).exit_code == 0);
    // the same certificate does not belong to a different progression
    CHECK(run_cli({"factor", "--verify", factor_path, "1", "6", "3"}).exit_code == 1);

    const std::string pq_path = temp_file("pq_cert.json");
    {
        const Captured produced = run_cli({"pq", "1", "2", "3", "--json"});
        REQUIRE(produced.exit_code == 0);
        std::ofstream(pq_path) << produced.out;
    }
    CHECK(run_cli({"pq", "--verify", pq_path, "1", "2", "3"}).exit_code == 0);
    CHECK(run_cli({"strict-pq", "--verify", pq_path, "1", "2", "3"}).exit_code == 1);  // a_1 = 1

    // tampering flips the verdict
    json doc;
    {
        std::ifstream in(factor_path);
        doc = json::parse(in);
    }
    doc["factors"][0][1] = "14";
    std::ofstream(factor_path) << doc.dump();
    CHECK(run_cli({"factor", "--verify", factor_path, "2", "5", "3"}).exit_code == 1);

    std::ofstream(factor_path) << "not json";
    CHECK(run_cli({"factor", "--verify", factor_path, "2", "5", "3"}).exit_code == 2);
    CHECK(run_cli({"factor", "--verify", temp_file("missing.json"), "2", "5", "3"}).exit_code ==
          2);

    std::filesystem::remove(factor_path);
    std::filesystem::remove(pq_path);
}

TEST_CASE("sweep subcommands report summaries and reflect failures in the exit code") {
    const std::string out_path = temp_file("sweep.jsonl");
    const Captured clean = run_cli({"sweep-theorems", "--a-max", "1", "--b-max", "1", "--n-max",
                                    "1", "--out", out_path});
    CHECK(clean.exit_code == 0);
    const json clean_doc = json::parse(clean.out);
    CHECK(clean_doc.at("progressions_checked") == 1);
    CHECK(clean_doc.at("invariant_failures") == 0);

    // a grid containing a=1, b=1, n=2 records a strict P/Q candidate
    const Captured flagged = run_cli({"sweep-theorems", "--a-max", "2", "--b-max", "2",
                                      "--n-max", "2", "--out", out_path});
    CHECK(flagged.exit_code == 1);
    const json flagged_doc = json::parse(flagged.out);
    CHECK(flagged_doc.at("theorem_failures") == 0);
    CHECK(flagged_doc.at("strict_pq").at("candidate_counterexamples").get<int>() > 0);

    const Captured grimm = run_cli({"sweep-grimm", "--first-max", "6", "--ratio-max", "2",
                                    "--count-max", "2", "--out", out_path});
    CHECK(grimm.exit_code == 0);
    CHECK_NOTHROW(json::parse(grimm.out));

    CHECK(run_cli({"sweep-theorems", "--a-max", "1", "--b-max", "1", "--n-max", "1", "--out",
                   "/nonexistent-dir/x.jsonl"})
              .exit_code == 2);
    CHECK(run_cli({"sweep-theorems", "--a-max", "1", "--b-max", "1", "--n-max", "1", "--out",
                   out_path, "--format", "xml"})
              .exit_code == 2);
    std::filesystem::remove(out_path);
}
