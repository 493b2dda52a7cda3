#pragma once

// Seeded Monte Carlo propagation of input uncertainty to NPV/BCR
// distributions.
//
// Reproducibility contract: trial n draws from its own generator seeded
// deterministically from (master_seed, n), and bindings are sampled in
// sorted parameter order. Results are therefore bit-identical for a given
// (inputs, master_seed, n_trials) regardless of how trials are scheduled.
//
// PRNG: SplitMix64 (Steele, Lea, Flood 2014), 64-bit state, one mix per
// draw; uniforms take the top 53 bits. Triangular and uniform variates use
// inverse-CDF; normals use a Box-Muller transform with rejection for
// truncation bounds.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "odpcba/errors.hpp"
#include "odpcba/money.hpp"
#include "odpcba/scenario.hpp"

namespace odpcba {

struct Rng {
    std::uint64_t state = 0;
};

namespace rng_detail {

inline std::uint64_t splitmix64_next(std::uint64_t& x) {
    x += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

}  // namespace rng_detail

inline std::pair<std::uint64_t, Rng> next_u64(Rng r) {
    std::uint64_t v = rng_detail::splitmix64_next(r.state);
    return {v, r};
}

// uniform in [0, 1)
inline std::pair<double, Rng> next_u01(Rng r) {
    auto [v, nr] = next_u64(r);
    return {static_cast<double>(v >> 11) * 0x1.0p-53, nr};
}

// Per-trial seed derivation; two mix rounds separate trial streams from the
// master sequence.
inline Rng trial_rng(std::uint64_t master_seed, std::uint64_t trial_index) {
    std::uint64_t s = master_seed;
    std::uint64_t a = rng_detail::splitmix64_next(s);
    s = a ^ (0x9E3779B97F4A7C15ull * (trial_index + 1));
    std::uint64_t b = rng_detail::splitmix64_next(s);
    return Rng{b};
}

// --- distributions -----------------------------------------------------------

struct NormalDist {
    double mean = 0;
    double sd = 1;
};
struct TriangularDist {
    double min = 0;
    double mode = 0.5;
    double max = 1;
};
struct UniformDist {
    double lo = 0;
    double hi = 1;
};
struct DegenerateDist {
    double value = 0;
};

struct Distribution {
    std::variant<NormalDist, TriangularDist, UniformDist, DegenerateDist> dist = DegenerateDist{};
    // truncation bounds; for normals the default is +/- 4 sd
    std::optional<double> lower;
    std::optional<double> upper;

    std::vector<ValidationIssue> validate() const {
        std::vector<ValidationIssue> issues;
        if (auto* n = std::get_if<NormalDist>(&dist)) {
            if (n->sd < 0) issues.push_back({ValidationCode::NegativeValue, "", "normal.sd", std::to_string(n->sd)});
        } else if (auto* t = std::get_if<TriangularDist>(&dist)) {
            if (!(t->min <= t->mode && t->mode <= t->max))
                issues.push_back({ValidationCode::BadFraction, "", "triangular", "require min <= mode <= max"});
        } else if (auto* u = std::get_if<UniformDist>(&dist)) {
            if (!(u->lo <= u->hi)) issues.push_back({ValidationCode::BadFraction, "", "uniform", "require lo <= hi"});
        }
        if (lower && upper && !(*lower <= *upper))
            issues.push_back({ValidationCode::BadFraction, "", "truncate", "require lower <= upper"});
        return issues;
    }
};

// One draw; Degenerate returns its value without consuming state.
inline std::pair<double, Rng> sample(const Distribution& d, Rng r) {
    if (auto* deg = std::get_if<DegenerateDist>(&d.dist)) return {deg->value, r};

    if (auto* u = std::get_if<UniformDist>(&d.dist)) {
        auto [x, nr] = next_u01(r);
        double v = u->lo + x * (u->hi - u->lo);
        if (d.lower) v = std::max(v, *d.lower);
        if (d.upper) v = std::min(v, *d.upper);
        return {v, nr};
    }
    if (auto* t = std::get_if<TriangularDist>(&d.dist)) {
        auto [x, nr] = next_u01(r);
        double span = t->max - t->min;
        double v;
        if (span <= 0) {
            v = t->min;
        } else {
            double fc = (t->mode - t->min) / span;
            v = x < fc ? t->min + std::sqrt(x * span * (t->mode - t->min))
                       : t->max - std::sqrt((1.0 - x) * span * (t->max - t->mode));
        }
        if (d.lower) v = std::max(v, *d.lower);
        if (d.upper) v = std::min(v, *d.upper);
        return {v, nr};
    }
    const auto& n = std::get<NormalDist>(d.dist);
    double lo = d.lower ? *d.lower : n.mean - 4.0 * n.sd;
    double hi = d.upper ? *d.upper : n.mean + 4.0 * n.sd;
    if (n.sd == 0) return {std::clamp(n.mean, lo, hi), r};
    for (int attempt = 0; attempt < 1024; ++attempt) {
        auto [u1, r1] = next_u01(r);
        auto [u2, r2] = next_u01(r1);
        r = r2;
        if (u1 <= 0) continue;
        double z = std::sqrt(-2.0 * std::log(1.0 - u1)) * std::cos(2.0 * M_PI * u2);
        double v = n.mean + n.sd * z;
        if (v >= lo && v <= hi) return {v, r};
    }
    // bounds so tight that rejection failed; fall back to the nearest bound
    return {std::clamp(n.mean, lo, hi), r};
}

// --- configuration and summaries ----------------------------------------------

struct McConfig {
    std::uint64_t n_trials = 50'000;
    std::uint64_t master_seed = 0x0DBCBA5EEDULL;
    std::map<std::string, Distribution> bindings;  // parameter -> distribution

    std::vector<ValidationIssue> validate(const ImpactMatrix& matrix) const {
        std::vector<ValidationIssue> issues;
        if (n_trials < 1) issues.push_back({ValidationCode::NegativeValue, "", "n_trials", "must be >= 1"});
        for (const auto& [param, dist] : bindings) {
            if (!matrix.has(param) && param != kDiscountParam)
                issues.push_back({ValidationCode::NegativeValue, "", "bindings", "unknown parameter " + param});
            auto sub = dist.validate();
            issues.insert(issues.end(), sub.begin(), sub.end());
        }
        return issues;
    }
};

struct Histogram {
    double lo = 0;
    double hi = 0;
    std::vector<std::uint64_t> counts;
};

struct McSummary {
    std::uint64_t n_trials = 0;
    double mean_npv = 0, sd_npv = 0;
    MoneyM p5_npv, p50_npv, p95_npv;
    double mean_bcr = 0, sd_bcr = 0;
    double p5_bcr = 0, p50_bcr = 0, p95_bcr = 0;
    double prob_npv_pos = 0;
    double prob_bcr_gt1 = 0;
    Histogram npv_hist;
};

struct TrialRecord {
    MoneyM npv;
    double bcr = 0;
    std::map<std::string, double> sampled;  // kept only when dumping
};

// Nearest-rank percentile over a sorted copy (exact order statistic).
template <typename T>
inline T nearest_rank(std::vector<T> sorted_values, double pct) {
    std::size_t n = sorted_values.size();
    std::size_t rank = static_cast<std::size_t>(std::ceil(pct / 100.0 * static_cast<double>(n)));
    if (rank < 1) rank = 1;
    if (rank > n) rank = n;
    return sorted_values[rank - 1];
}

// Exact order statistics and exact positive counts over the trial list.
inline McSummary summarize(const std::vector<TrialRecord>& trials) {
    if (trials.empty()) throw EmptyTrialSet("summarize: no trials");
    McSummary s;
    s.n_trials = trials.size();

    // integer accumulation keeps the mean independent of summation order
    __int128 npv_sum = 0;
    double bcr_sum = 0;
    std::uint64_t pos = 0, gt1 = 0;
    std::vector<MoneyM> npvs;
    std::vector<double> bcrs;
    npvs.reserve(trials.size());
    bcrs.reserve(trials.size());
    for (const auto& t : trials) {
        npv_sum += t.npv.units();
        bcr_sum += t.bcr;
        if (t.npv.units() > 0) ++pos;
        if (t.bcr > 1.0) ++gt1;
        npvs.push_back(t.npv);
        bcrs.push_back(t.bcr);
    }
    double n = static_cast<double>(trials.size());
    s.mean_npv = static_cast<double>(npv_sum) / MoneyM::kScale / n;
    s.mean_bcr = bcr_sum / n;
    double var_npv = 0, var_bcr = 0;
    for (const auto& t : trials) {
        double dn = t.npv.meur() - s.mean_npv;
        double db = t.bcr - s.mean_bcr;
        var_npv += dn * dn;
        var_bcr += db * db;
    }
    s.sd_npv = trials.size() > 1 ? std::sqrt(var_npv / (n - 1)) : 0.0;
    s.sd_bcr = trials.size() > 1 ? std::sqrt(var_bcr / (n - 1)) : 0.0;
    s.prob_npv_pos = static_cast<double>(pos) / n;
    s.prob_bcr_gt1 = static_cast<double>(gt1) / n;

    std::sort(npvs.begin(), npvs.end());
    std::sort(bcrs.begin(), bcrs.end());
    s.p5_npv = nearest_rank(npvs, 5);
    s.p50_npv = nearest_rank(npvs, 50);
    s.p95_npv = nearest_rank(npvs, 95);
    s.p5_bcr = nearest_rank(bcrs, 5);
    s.p50_bcr = nearest_rank(bcrs, 50);
    s.p95_bcr = nearest_rank(bcrs, 95);

    // fixed 40-bin histogram over the observed range
    s.npv_hist.lo = npvs.front().meur();
    s.npv_hist.hi = npvs.back().meur();
    s.npv_hist.counts.assign(40, 0);
    double width = (s.npv_hist.hi - s.npv_hist.lo) / 40.0;
    for (const auto& v : npvs) {
        std::size_t bin = width > 0 ? static_cast<std::size_t>((v.meur() - s.npv_hist.lo) / width) : 0;
        if (bin >= 40) bin = 39;
        ++s.npv_hist.counts[bin];
    }
    return s;
}

struct McResult {
    McSummary summary;
    std::vector<TrialRecord> trials;  // populated when keep_trials is set
};

// Runs the trial set against the impact matrix. Each trial samples all
// bindings (sorted parameter order), applies them as deviations, and
// re-appraises the anchored aggregates.
inline McResult run_trials(const AppraisalBase& base, const ImpactMatrix& matrix, const McConfig& cfg,
                           bool keep_trials = false) {
    auto issues = cfg.validate(matrix);
    if (!issues.empty()) throw ValidationError(std::move(issues));

    std::vector<std::pair<std::string, const Distribution*>> ordered;
    ordered.reserve(cfg.bindings.size());
    for (const auto& [param, dist] : cfg.bindings) ordered.emplace_back(param, &dist);
    // std::map iterates sorted by key, which is the sampling order contract

    std::vector<TrialRecord> trials;
    trials.reserve(cfg.n_trials);
    for (std::uint64_t i = 0; i < cfg.n_trials; ++i) {
        Rng rng = trial_rng(cfg.master_seed, i);
        std::map<std::string, double> deviations;
        TrialRecord rec;
        for (const auto& [param, dist] : ordered) {
            auto [value, next] = sample(*dist, rng);
            rng = next;
            double base_value = param == kDiscountParam ? base.discount_rate : 1.0;
            deviations[param] = value - base_value;
            if (keep_trials) rec.sampled[param] = value;
        }
        PerturbedAggregates agg = apply_deviations(base, matrix, deviations);
        rec.npv = agg.npv;
        rec.bcr = agg.bcr.value_or(0.0);
        trials.push_back(std::move(rec));
    }

    McResult out;
    out.summary = summarize(trials);
    if (keep_trials) out.trials = std::move(trials);
    return out;
}

}  // namespace odpcba
