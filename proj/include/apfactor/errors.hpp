#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace apfactor {

// An operation was called outside its contract (bad input, unmet hypothesis).
class precondition_error : public std::invalid_argument {
public:
    explicit precondition_error(const std::string& message) : std::invalid_argument(message) {}
};

// A certificate construction violated an invariant it is supposed to
// guarantee. These are candidate counterexamples to the underlying
// divisibility claims: they carry the offending progression (and prime,
// when one is involved) and must be reported, never patched over.
class invariant_failure : public std::runtime_error {
public:
    invariant_failure(std::string detail, std::string progression, std::string prime = "")
        : std::runtime_error(detail + " [" + progression +
                             (prime.empty() ? std::string() : ", prime " + prime) + "]"),
          detail_(std::move(detail)),
          progression_(std::move(progression)),
          prime_(std::move(prime)) {}

    const std::string& detail() const noexcept { return detail_; }
    const std::string& progression() const noexcept { return progression_; }
    const std::string& prime() const noexcept { return prime_; }

private:
    std::string detail_;
    std::string progression_;
    std::string prime_;
};

}  // namespace apfactor
