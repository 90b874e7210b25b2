#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace tdmjls {

inline constexpr const char* kVersion = "0.1.0";

/// Outcome of a single named invariant check.
struct CheckResult {
    std::string name;
    bool passed = false;
    std::string message;
};

/// Collection of pass/fail checks produced by scenario validation.
struct ValidationReport {
    std::vector<CheckResult> checks;

    bool all_passed() const
    {
        for (const auto& c : checks)
            if (!c.passed) return false;
        return true;
    }

    std::vector<CheckResult> failures() const
    {
        std::vector<CheckResult> out;
        for (const auto& c : checks)
            if (!c.passed) out.push_back(c);
        return out;
    }

    std::string to_string() const
    {
        std::string s;
        for (const auto& c : checks) {
            s += c.passed ? "[PASS] " : "[FAIL] ";
            s += c.name;
            if (!c.message.empty()) {
                s += ": ";
                s += c.message;
            }
            s += '\n';
        }
        return s;
    }
};

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed input: dimension mismatch, NaN/Inf entries, unparsable file.
struct StructuralError : Error {
    using Error::Error;
};

/// One or more scenario invariants failed; carries the full report.
struct ValidationError : Error {
    ValidationReport report;

    explicit ValidationError(ValidationReport r)
        : Error(compose(r)), report(std::move(r))
    {
    }

private:
    static std::string compose(const ValidationReport& r)
    {
        std::string s = "scenario validation failed:";
        for (const auto& c : r.failures()) {
            s += ' ';
            s += c.name;
            s += ';';
        }
        return s;
    }
};

/// The chain is reducible or periodic (no unique unit-modulus eigenvalue).
struct ErgodicityError : Error {
    using Error::Error;
};

/// The mean-dynamics matrix is singular or has a nonnegative-real-part eigenvalue.
struct NotHurwitzError : Error {
    using Error::Error;
};

/// Steady state requested while sigma(H22) >= 1 (or fixed point cannot settle).
struct UnstableSystemError : Error {
    double sr_h22;

    explicit UnstableSystemError(const std::string& msg, double sr = 0.0)
        : Error(msg), sr_h22(sr)
    {
    }
};

/// Moment recursion blow-up diagnostic: an entry exceeded the divergence
/// threshold (or turned non-finite) at the reported step.
struct InstabilityError : Error {
    std::int64_t step;
    double sr_h22;  // NaN when the explicit H22 was not assembled

    InstabilityError(const std::string& msg, std::int64_t k, double sr)
        : Error(msg), step(k), sr_h22(sr)
    {
    }
};

/// Explicit matrix assembly was skipped by the size guard but is required.
struct SizeGuardError : Error {
    using Error::Error;
};

/// Not enough usable samples for a fit.
struct InsufficientDataError : Error {
    using Error::Error;
};

/// Exhaustive path enumeration would exceed the path budget.
struct PathBudgetError : Error {
    using Error::Error;
};

}  // namespace tdmjls
