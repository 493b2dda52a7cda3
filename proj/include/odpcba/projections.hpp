#pragma once

// Annual EV/ET stock and RES capacity trajectories plus the growth-driver
// indices that scale benefit streams year over year. Fleet growth is
// multiplicative (CAGR), RES growth additive (MW/yr). Any generated series
// can be overridden cell-for-cell by a fixture table.

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "odpcba/errors.hpp"
#include "odpcba/model.hpp"

namespace odpcba {

// value(year) = stock_0 * (1 + cagr)^(year - first_year)
inline YearSeries<> project_stock(double stock_0, double cagr, const TimeAxis& axis) {
    if (!(cagr > -1.0 && cagr < 1.0)) throw RateOutOfRange("project_stock: cagr out of (-1,1)");
    if (stock_0 < 0) throw std::invalid_argument("project_stock: negative stock_0");
    std::vector<double> v(static_cast<std::size_t>(axis.n_years()));
    for (int k = 0; k < axis.n_years(); ++k) v[static_cast<std::size_t>(k)] = stock_0 * std::pow(1.0 + cagr, k);
    return YearSeries<>(axis, std::move(v));
}

// value(year) = capacity_0 + addition/1000 * (year - first_year), GW
inline YearSeries<> project_res(double capacity_0, double addition_mw, const TimeAxis& axis) {
    if (capacity_0 < 0) throw std::invalid_argument("project_res: negative capacity_0");
    std::vector<double> v(static_cast<std::size_t>(axis.n_years()));
    for (int k = 0; k < axis.n_years(); ++k) v[static_cast<std::size_t>(k)] = capacity_0 + addition_mw / 1000.0 * k;
    return YearSeries<>(axis, std::move(v));
}

// Per-country trajectory set. ev/et in thousands of vehicles, res in GW.
struct ProjectionSet {
    TimeAxis axis;
    std::map<std::string, YearSeries<>> ev_stock;
    std::map<std::string, YearSeries<>> et_stock;
    std::map<std::string, YearSeries<>> res_capacity;

    static ProjectionSet generate(const Model& m) {
        ProjectionSet p;
        p.axis = m.axis();
        for (const auto& a : m.countries()) {
            p.ev_stock.emplace(a.country.id, project_stock(a.ev_stock_0, a.ev_cagr, m.axis()));
            p.et_stock.emplace(a.country.id, project_stock(a.et_stock_0, a.et_cagr, m.axis()));
            p.res_capacity.emplace(a.country.id, project_res(a.res_capacity_0, a.res_addition, m.axis()));
        }
        return p;
    }

    const YearSeries<>& ev(const std::string& id) const { return ev_stock.at(id); }
    const YearSeries<>& et(const std::string& id) const { return et_stock.at(id); }
    const YearSeries<>& res(const std::string& id) const { return res_capacity.at(id); }

    double total_ev(int year) const { return total_of(ev_stock, year); }
    double total_et(int year) const { return total_of(et_stock, year); }
    double total_res(int year) const { return total_of(res_capacity, year); }

private:
    static double total_of(const std::map<std::string, YearSeries<>>& m, int year) {
        double t = 0;
        for (const auto& [id, s] : m) t += s.at_year(year);
        return t;
    }
};

enum class DriverKind { Fleet, Res, Composite, Flat };

// Year-on-year growth index, normalized to 1.0 at first_year.
struct DriverIndex {
    DriverKind kind = DriverKind::Flat;
    YearSeries<> series;

    double at_year(int year) const { return series.at_year(year); }
};

struct CompositeWeights {
    double fleet = 0.5;
    double res = 0.5;
};

inline DriverIndex build_driver(DriverKind kind, const ProjectionSet& proj, const std::string& country_id,
                                CompositeWeights w = {}) {
    const TimeAxis& axis = proj.axis;
    auto normalized = [&](auto&& value_at) {
        double base = value_at(axis.first_year);
        if (base == 0.0) throw ZeroBaseStock("build_driver: zero first-year base for " + country_id);
        std::vector<double> v(static_cast<std::size_t>(axis.n_years()));
        for (int k = 0; k < axis.n_years(); ++k) {
            int year = axis.year_at(k);
            v[static_cast<std::size_t>(k)] = year == axis.first_year ? 1.0 : value_at(year) / base;
        }
        return YearSeries<>(axis, std::move(v));
    };

    DriverIndex d;
    d.kind = kind;
    switch (kind) {
        case DriverKind::Flat:
            d.series = YearSeries<>::constant(axis, 1.0);
            break;
        case DriverKind::Fleet:
            d.series = normalized([&](int y) { return proj.ev(country_id).at_year(y) + proj.et(country_id).at_year(y); });
            break;
        case DriverKind::Res:
            d.series = normalized([&](int y) { return proj.res(country_id).at_year(y); });
            break;
        case DriverKind::Composite: {
            DriverIndex fleet = build_driver(DriverKind::Fleet, proj, country_id);
            DriverIndex res = build_driver(DriverKind::Res, proj, country_id);
            std::vector<double> v(static_cast<std::size_t>(axis.n_years()));
            for (int k = 0; k < axis.n_years(); ++k) {
                int year = axis.year_at(k);
                double f = fleet.at_year(year), r = res.at_year(year);
                // weighted geometric mean; weight 0/1 short-circuits keep the
                // degenerate cases bit-exact
                double g = 1.0;
                if (w.fleet != 0.0) g *= (w.fleet == 1.0 ? f : std::pow(f, w.fleet));
                if (w.res != 0.0) g *= (w.res == 1.0 ? r : std::pow(r, w.res));
                v[static_cast<std::size_t>(k)] = year == axis.first_year ? 1.0 : g;
            }
            d.series = YearSeries<>(axis, std::move(v));
            break;
        }
    }
    return d;
}

}  // namespace odpcba
