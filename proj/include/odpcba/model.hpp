#pragma once

// Core domain types: countries, the appraisal time axis, per-year series,
// and the per-country assumption records with whole-document validation.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "odpcba/errors.hpp"
#include "odpcba/money.hpp"

namespace odpcba {

struct Country {
    std::string id;    // short code, e.g. "AT"
    std::string name;  // display name

    bool operator==(const Country&) const = default;
};

// Calendar years of the appraisal window plus the discount reference year.
struct TimeAxis {
    int base_year = 2025;   // discount reference (cash flows occur after it)
    int first_year = 2026;
    int last_year = 2035;

    int n_years() const { return last_year - first_year + 1; }
    bool contains(int year) const { return year >= first_year && year <= last_year; }
    int index_of(int year) const {
        if (!contains(year)) throw YearOutOfAxis("year " + std::to_string(year) + " outside axis");
        return year - first_year;
    }
    int year_at(int index) const { return first_year + index; }
    bool valid() const { return base_year < first_year && first_year <= last_year; }

    bool operator==(const TimeAxis&) const = default;
};

// One value per axis year. The unit is carried by context (thousands of
// vehicles, GW, MEUR, ...).
template <typename T = double>
struct YearSeries {
    TimeAxis axis;
    std::vector<T> values;

    YearSeries() = default;
    YearSeries(TimeAxis ax, std::vector<T> v) : axis(ax), values(std::move(v)) {
        if (static_cast<int>(values.size()) != axis.n_years())
            throw std::invalid_argument("YearSeries: value count does not match axis");
    }
    static YearSeries constant(TimeAxis ax, T v) {
        return YearSeries(ax, std::vector<T>(static_cast<std::size_t>(ax.n_years()), v));
    }

    T at_year(int year) const { return values[static_cast<std::size_t>(axis.index_of(year))]; }
    T& at_year(int year) { return values[static_cast<std::size_t>(axis.index_of(year))]; }

    T sum() const {
        T total{};
        for (const T& v : values) total = total + v;
        return total;
    }

    bool operator==(const YearSeries&) const = default;
};

// Country-specific baseline stocks, growth rates, prices and valuations.
// Stocks in thousands of vehicles, RES capacity in GW, additions in MW/yr.
struct CountryAssumptions {
    Country country;
    double ev_stock_0 = 0;            // thousands, first_year
    double ev_cagr = 0;               // fraction/yr
    double et_stock_0 = 0;            // thousands
    double et_cagr = 0;               // fraction/yr
    double res_capacity_0 = 0;        // GW, first_year
    double res_addition = 0;          // MW/yr
    double retail_price_ev = 0;       // EUR/kWh
    double grid_co2_intensity_0 = 0;  // gCO2/kWh
    double voll = 0;                  // EUR/kWh; carried and exposed, no monetization path
    double scc_start = 0;             // EUR/tCO2 at first_year
    double scc_end = 0;               // EUR/tCO2 at last_year
    double cost_share = 0;            // fraction of shared costs

    bool operator==(const CountryAssumptions&) const = default;
};

// Validated, immutable assumption set. Construction is only via
// validate_assumptions; afterwards the model is safe to share read-only.
class Model {
public:
    const TimeAxis& axis() const { return axis_; }
    const std::vector<CountryAssumptions>& countries() const { return countries_; }

    const CountryAssumptions& country(const std::string& id) const {
        for (const auto& c : countries_)
            if (c.country.id == id) return c;
        throw std::out_of_range("unknown country: " + id);
    }
    std::size_t n_countries() const { return countries_.size(); }

private:
    friend std::vector<ValidationIssue> validate_into(const std::vector<CountryAssumptions>&, const TimeAxis&, Model*);
    TimeAxis axis_;
    std::vector<CountryAssumptions> countries_;
};

inline std::vector<ValidationIssue> validate_into(const std::vector<CountryAssumptions>& doc, const TimeAxis& axis,
                                                  Model* out) {
    std::vector<ValidationIssue> issues;
    auto add = [&](ValidationCode code, const std::string& country, const std::string& field, std::string detail) {
        issues.push_back({code, country, field, std::move(detail)});
    };

    if (!axis.valid()) add(ValidationCode::AxisInvalid, "", "axis", "require base_year < first_year <= last_year");
    if (doc.empty()) add(ValidationCode::EmptyCountrySet, "", "countries", "at least one country required");

    std::set<std::string> seen;
    double share_sum = 0;
    for (const auto& a : doc) {
        const std::string& id = a.country.id;
        if (id.empty()) add(ValidationCode::EmptyCountrySet, id, "country.id", "empty id");
        if (!seen.insert(id).second) add(ValidationCode::DuplicateCountry, id, "country.id", "duplicate id");

        if (a.ev_stock_0 < 0) add(ValidationCode::NegativeStock, id, "ev_stock_0", std::to_string(a.ev_stock_0));
        if (a.et_stock_0 < 0) add(ValidationCode::NegativeStock, id, "et_stock_0", std::to_string(a.et_stock_0));
        if (a.res_capacity_0 < 0) add(ValidationCode::NegativeStock, id, "res_capacity_0", std::to_string(a.res_capacity_0));
        if (!(a.ev_cagr > -1.0 && a.ev_cagr < 1.0)) add(ValidationCode::CagrOutOfRange, id, "ev_cagr", std::to_string(a.ev_cagr));
        if (!(a.et_cagr > -1.0 && a.et_cagr < 1.0)) add(ValidationCode::CagrOutOfRange, id, "et_cagr", std::to_string(a.et_cagr));
        if (a.retail_price_ev < 0) add(ValidationCode::NegativeValue, id, "retail_price_ev", std::to_string(a.retail_price_ev));
        if (a.grid_co2_intensity_0 < 0) add(ValidationCode::NegativeValue, id, "grid_co2_intensity_0", std::to_string(a.grid_co2_intensity_0));
        if (a.voll < 0) add(ValidationCode::NegativeValue, id, "voll", std::to_string(a.voll));
        if (a.scc_start > a.scc_end) add(ValidationCode::SccDecreasing, id, "scc_start/scc_end",
                                         std::to_string(a.scc_start) + " > " + std::to_string(a.scc_end));
    }
    if (!doc.empty()) {
        for (const auto& a : doc) share_sum += a.cost_share;
        if (std::abs(share_sum - 1.0) > 1e-9)
            add(ValidationCode::CostSharesNotUnit, "", "cost_share", "sum = " + std::to_string(share_sum));
    }

    if (issues.empty() && out) {
        out->axis_ = axis;
        out->countries_ = doc;
    }
    return issues;
}

// Returns every violation (not just the first). On success `model` holds the
// validated document.
inline std::vector<ValidationIssue> validate_assumptions(const std::vector<CountryAssumptions>& doc,
                                                         const TimeAxis& axis, Model& model) {
    return validate_into(doc, axis, &model);
}

inline Model validate_or_throw(const std::vector<CountryAssumptions>& doc, const TimeAxis& axis) {
    Model m;
    auto issues = validate_into(doc, axis, &m);
    if (!issues.empty()) throw ValidationError(std::move(issues));
    return m;
}

// Linear carbon-price trajectory between the axis endpoints, EUR/tCO2.
// Exact at both endpoints (std::lerp), monotone for scc_start <= scc_end.
inline double interpolate_scc(const CountryAssumptions& a, const TimeAxis& axis, int year) {
    if (!axis.contains(year)) throw YearOutOfAxis("interpolate_scc: year " + std::to_string(year));
    if (axis.first_year == axis.last_year) return a.scc_start;
    double t = static_cast<double>(year - axis.first_year) / static_cast<double>(axis.last_year - axis.first_year);
    return std::lerp(a.scc_start, a.scc_end, t);
}

}  // namespace odpcba
