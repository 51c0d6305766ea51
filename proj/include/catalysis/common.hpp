#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace catalysis {

// Malformed input file (bad JSON, missing keys, wrong types).
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Structurally parseable data that violates model invariants. Carries the
// full list so callers can report every problem at once.
struct ValidationError : std::runtime_error {
    std::vector<std::string> violations;
    explicit ValidationError(std::vector<std::string> v)
        : std::runtime_error(join(v)), violations(std::move(v)) {}

  private:
    static std::string join(const std::vector<std::string>& v) {
        std::string s = "conference validation failed:";
        for (const auto& x : v) {
            s += "\n  - " + x;
        }
        return s;
    }
};

// Argument outside an operation's stated domain.
struct DomainError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Non-finite state or other numerical breakdown mid-computation.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Unordered participant pair, stored with the lexicographically smaller id first.
using PairKey = std::pair<std::string, std::string>;

inline PairKey make_pair_key(std::string a, std::string b) {
    if (b < a) std::swap(a, b);
    return {std::move(a), std::move(b)};
}

inline std::string pair_id(const std::string& a, const std::string& b) {
    return a <= b ? a + "|" + b : b + "|" + a;
}

}  // namespace catalysis
