#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace odpcba {

// Validation findings are collected, not thrown: callers get every violation
// in one pass.
enum class ValidationCode {
    NegativeStock,
    CagrOutOfRange,
    CostSharesNotUnit,
    EmptyCountrySet,
    DuplicateCountry,
    SccDecreasing,
    AxisInvalid,
    BadFraction,
    NegativeValue,
    SharesNotUnit,
};

inline const char* to_string(ValidationCode c) {
    switch (c) {
        case ValidationCode::NegativeStock: return "NegativeStock";
        case ValidationCode::CagrOutOfRange: return "CagrOutOfRange";
        case ValidationCode::CostSharesNotUnit: return "CostSharesNotUnit";
        case ValidationCode::EmptyCountrySet: return "EmptyCountrySet";
        case ValidationCode::DuplicateCountry: return "DuplicateCountry";
        case ValidationCode::SccDecreasing: return "SccDecreasing";
        case ValidationCode::AxisInvalid: return "AxisInvalid";
        case ValidationCode::BadFraction: return "BadFraction";
        case ValidationCode::NegativeValue: return "NegativeValue";
        case ValidationCode::SharesNotUnit: return "SharesNotUnit";
    }
    return "?";
}

struct ValidationIssue {
    ValidationCode code;
    std::string country;  // empty when not country-specific
    std::string field;
    std::string detail;

    std::string message() const {
        std::string m = to_string(code);
        if (!country.empty()) m += " [" + country + "]";
        if (!field.empty()) m += " " + field;
        if (!detail.empty()) m += ": " + detail;
        return m;
    }
};

struct ValidationError : std::runtime_error {
    std::vector<ValidationIssue> issues;
    explicit ValidationError(std::vector<ValidationIssue> iss)
        : std::runtime_error(summarize(iss)), issues(std::move(iss)) {}

    static std::string summarize(const std::vector<ValidationIssue>& iss) {
        std::string s = "validation failed:";
        for (const auto& i : iss) s += "\n  - " + i.message();
        return s;
    }
};

// Domain errors named by the operation contracts.
struct YearOutOfAxis : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ZeroBaseStock : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct MixedResolution : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ModeInputMissing : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct EnergyNotConserved : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct MissingPollutantFactor : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct RateOutOfRange : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ZeroCostDivision : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NonPositiveMultiplier : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct EmptyTrialSet : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// IO errors.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct SchemaViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct UnknownKey : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct MissingFixture : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ChecksumMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct MalformedRow : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IoFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace odpcba
