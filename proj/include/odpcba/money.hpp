#pragma once

// MoneyM: monetary amounts in millions of euros, stored as a fixed-point
// integer count of micro-millions (1 unit = 1e-6 MEUR = 1 euro). Addition,
// subtraction and share splits are exact, which keeps golden-file sums and
// country re-aggregation free of binary-float drift.

#include <cctype>
#include <cmath>
#include <compare>
#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace odpcba {

class MoneyM {
public:
    static constexpr std::int64_t kScale = 1'000'000;  // units per MEUR

    constexpr MoneyM() : units_(0) {}

    static constexpr MoneyM from_units(std::int64_t u) {
        MoneyM m;
        m.units_ = u;
        return m;
    }

    static MoneyM from_meur(double meur) {
        if (!std::isfinite(meur)) {
            throw std::invalid_argument("MoneyM: non-finite value");
        }
        return from_units(std::llround(meur * static_cast<double>(kScale)));
    }

    // Exact conversion from a decimal literal such as "248.5" or "-0.05".
    // Fractional digits beyond six are rejected rather than rounded.
    static MoneyM parse(std::string_view text);

    constexpr std::int64_t units() const { return units_; }
    double meur() const { return static_cast<double>(units_) / kScale; }

    constexpr MoneyM operator+(MoneyM o) const { return from_units(units_ + o.units_); }
    constexpr MoneyM operator-(MoneyM o) const { return from_units(units_ - o.units_); }
    constexpr MoneyM operator-() const { return from_units(-units_); }
    MoneyM& operator+=(MoneyM o) {
        units_ += o.units_;
        return *this;
    }
    MoneyM& operator-=(MoneyM o) {
        units_ -= o.units_;
        return *this;
    }

    MoneyM scaled(double factor) const {
        return from_units(std::llround(static_cast<double>(units_) * factor));
    }

    double ratio(MoneyM denom) const {
        return static_cast<double>(units_) / static_cast<double>(denom.units_);
    }

    constexpr auto operator<=>(const MoneyM&) const = default;

    // Fixed-decimal rendering; digits in [0,6].
    std::string str(int digits = 1) const;

private:
    std::int64_t units_;
};

inline MoneyM MoneyM::parse(std::string_view text) {
    std::size_t i = 0;
    bool neg = false;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
        neg = text[i] == '-';
        ++i;
    }
    std::int64_t whole = 0, frac = 0;
    int frac_digits = 0;
    bool any = false;
    for (; i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])); ++i) {
        whole = whole * 10 + (text[i] - '0');
        any = true;
    }
    if (i < text.size() && text[i] == '.') {
        ++i;
        for (; i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])); ++i) {
            if (++frac_digits > 6) throw std::invalid_argument("MoneyM::parse: more than 6 decimals: " + std::string(text));
            frac = frac * 10 + (text[i] - '0');
            any = true;
        }
    }
    if (!any || i != text.size()) throw std::invalid_argument("MoneyM::parse: bad number: " + std::string(text));
    for (int d = frac_digits; d < 6; ++d) frac *= 10;
    std::int64_t u = whole * kScale + frac;
    return from_units(neg ? -u : u);
}

inline std::string MoneyM::str(int digits) const {
    std::int64_t u = units_;
    bool neg = u < 0;
    if (neg) u = -u;
    std::int64_t div = kScale;
    std::int64_t rounder = 0;
    for (int d = 0; d < digits; ++d) div /= 10;
    rounder = div / 2;
    std::int64_t scaled = (u + rounder) / div;  // round half away from zero
    std::int64_t pow10 = 1;
    for (int d = 0; d < digits; ++d) pow10 *= 10;
    char buf[48];
    if (digits == 0) {
        std::snprintf(buf, sizeof buf, "%s%lld", neg ? "-" : "", static_cast<long long>(scaled));
    } else {
        std::snprintf(buf, sizeof buf, "%s%lld.%0*lld", neg ? "-" : "", static_cast<long long>(scaled / pow10),
                      digits, static_cast<long long>(scaled % pow10));
    }
    return buf;
}

// Splits an amount into parts proportional to `weights` so the parts sum to
// `total` exactly. Remainder units go to the largest fractional carries
// (ties broken by lower index).
inline std::vector<MoneyM> split_exact(MoneyM total, const std::vector<double>& weights) {
    const std::size_t n = weights.size();
    if (n == 0) return {};
    double wsum = 0;
    for (double w : weights) {
        if (!(w >= 0)) throw std::invalid_argument("split_exact: negative weight");
        wsum += w;
    }
    if (wsum <= 0) throw std::invalid_argument("split_exact: zero weight sum");

    std::vector<std::int64_t> base(n);
    std::vector<double> carry(n);
    std::int64_t assigned = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double exact = static_cast<double>(total.units()) * (weights[i] / wsum);
        base[i] = static_cast<std::int64_t>(std::floor(exact));
        carry[i] = exact - static_cast<double>(base[i]);
        assigned += base[i];
    }
    std::int64_t leftover = total.units() - assigned;
    // leftover is small (< n + rounding slack); hand out by largest carry
    while (leftover > 0) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < n; ++i)
            if (carry[i] > carry[best]) best = i;
        base[best] += 1;
        carry[best] = -1.0;
        --leftover;
    }
    while (leftover < 0) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < n; ++i)
            if (carry[i] < carry[best]) best = i;
        base[best] -= 1;
        carry[best] = 2.0;
        ++leftover;
    }
    std::vector<MoneyM> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = MoneyM::from_units(base[i]);
    return out;
}

}  // namespace odpcba
