#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "spence/generator.hpp"
#include "spence/mu.hpp"

namespace spence {

/// One row of the experiment table: `count` generated formulas for (k, g).
/// Formula i uses permutation seed baseSeed + i (mod 2^64).
struct BatchSpec {
    int k = 3;
    int g = 5;
    std::size_t count = 500;
    std::uint64_t baseSeed = 0;
    SolverBackend backend;
    bool earlyExit = false;
    int parallelism = 1;
    std::optional<std::chrono::milliseconds> timeoutPerSolve;
    /// Keep every MuReport (with witnesses) in BatchStats::reports.
    bool keepReports = false;

    [[nodiscard]] std::uint64_t seedFor(std::size_t index) const { return baseSeed + index; }

    [[nodiscard]] GeneratorParams params(std::size_t index) const { return {k, g, seedFor(index)}; }

    void validate() const {
        GeneratorParams{k, g, 0}.validate();
        if (count < 1)
            throw PreconditionError("count must be >= 1");
        if (parallelism < 1)
            throw PreconditionError("parallelism must be >= 1");
    }
};

struct FormulaSummary {
    std::size_t index = 0;
    std::uint64_t seed = 0;
    std::size_t clauseCount = 0;
    std::size_t satLower = 0;
    std::size_t satUpper = 0;
    std::optional<bool> isMu;
    bool timedOut = false;
    double solveMillis = 0.0;
    PolarityTally positive;
    PolarityTally negative;

    [[nodiscard]] std::optional<std::size_t> satisfiabilityNumber() const {
        if (satLower != satUpper)
            return std::nullopt;
        return satLower;
    }
};

/// Aggregates over the formulas of a batch that finished without timeouts.
struct BatchStats {
    int k = 0;
    int g = 0;
    std::size_t clauseNumber = 0;
    std::size_t count = 0;
    std::size_t completed = 0;
    std::size_t excluded = 0;
    double muPercent = 0.0;
    std::optional<double> meanSatNo; // absent under early exit
    std::optional<double> stdDevSatNo;
    PolarityTally positive;
    PolarityTally negative;
    std::chrono::milliseconds elapsed{0};
    std::vector<FormulaSummary> perFormula;
    std::vector<MuReport> reports; // only with BatchSpec::keepReports
};

/// Sample mean and sample standard deviation (divisor n - 1; 0 when n == 1).
inline std::pair<double, double> meanAndSampleStdDev(const std::vector<double>& xs) {
    if (xs.empty())
        return {0.0, 0.0};
    double sum = 0.0;
    for (double x : xs)
        sum += x;
    const double mean = sum / static_cast<double>(xs.size());
    if (xs.size() == 1)
        return {mean, 0.0};
    double ss = 0.0;
    for (double x : xs)
        ss += (x - mean) * (x - mean);
    return {mean, std::sqrt(ss / static_cast<double>(xs.size() - 1))};
}

/// Recomputes the aggregate fields of `stats` from stats.perFormula.
inline void aggregate(BatchStats& stats) {
    stats.completed = 0;
    stats.positive = {};
    stats.negative = {};
    std::size_t mu = 0;
    bool allExact = true;
    std::vector<double> satNumbers;
    for (const auto& s : stats.perFormula) {
        if (s.timedOut)
            continue;
        ++stats.completed;
        mu += s.isMu.value_or(false) ? 1 : 0;
        stats.positive.tested += s.positive.tested;
        stats.positive.sat += s.positive.sat;
        stats.negative.tested += s.negative.tested;
        stats.negative.sat += s.negative.sat;
        if (auto n = s.satisfiabilityNumber())
            satNumbers.push_back(static_cast<double>(*n));
        else
            allExact = false;
    }
    stats.excluded = stats.perFormula.size() - stats.completed;
    stats.muPercent = stats.completed == 0 ? 0.0 : 100.0 * static_cast<double>(mu) / static_cast<double>(stats.completed);
    stats.meanSatNo.reset();
    stats.stdDevSatNo.reset();
    if (allExact && !satNumbers.empty()) {
        auto [mean, sd] = meanAndSampleStdDev(satNumbers);
        stats.meanSatNo = mean;
        stats.stdDevSatNo = sd;
    }
}

/// Generates and analyzes every formula of the batch. Results are in
/// formula-index order and, apart from timings, depend only on `spec`.
inline BatchStats runBatch(const BatchSpec& spec) {
    spec.validate();
    const auto start = Clock::now();

    BatchStats stats;
    stats.k = spec.k;
    stats.g = spec.g;
    stats.count = spec.count;
    stats.clauseNumber = static_cast<std::size_t>(spec.params(0).numClauses());
    stats.perFormula.resize(spec.count);
    if (spec.keepReports)
        stats.reports.resize(spec.count);

    MuOptions mo;
    mo.backend = spec.backend;
    mo.timeoutPerSolve = spec.timeoutPerSolve;
    mo.earlyExit = spec.earlyExit;
    mo.keepWitnesses = spec.keepReports;

    parallelFor(spec.count, spec.parallelism, [&](std::size_t i) {
        FormulaSummary& s = stats.perFormula[i];
        s.index = i;
        s.seed = spec.seedFor(i);
        const auto t0 = Clock::now();
        const CnfFormula f = generate(spec.params(i));
        s.clauseCount = f.numClauses();
        try {
            MuReport r = analyzeMu(f, mo, std::to_string(s.seed));
            s.satLower = r.satLower;
            s.satUpper = r.satUpper;
            s.isMu = r.isMu;
            s.timedOut = r.timeouts > 0;
            s.positive = r.positive;
            s.negative = r.negative;
            if (spec.keepReports)
                stats.reports[i] = std::move(r);
        } catch (const TimeoutError&) {
            s.timedOut = true;
            s.satUpper = s.clauseCount;
        }
        s.solveMillis = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
    });

    aggregate(stats);
    stats.elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start);
    return stats;
}

/// One batch per g (ascending), all other settings shared with `base`.
inline std::vector<BatchStats> trendStudy(const BatchSpec& base, const std::vector<int>& gValues) {
    if (gValues.empty())
        throw PreconditionError("trend study needs at least one g");
    for (std::size_t i = 1; i < gValues.size(); ++i)
        if (gValues[i] <= gValues[i - 1])
            throw PreconditionError("g values must be strictly ascending");
    std::vector<BatchStats> rows;
    for (int g : gValues) {
        BatchSpec spec = base;
        spec.g = g;
        rows.push_back(runBatch(spec));
    }
    return rows;
}

namespace detail {
inline std::string fixed(double x, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, x);
    return buf;
}
} // namespace detail

// CSV. Per-formula: k,g,seed,clause_count,satisfiability_number,is_mu,solve_millis
// Summary:          k,g,count,completed,mu_percent,mean_sat_no,std_dev_sat_no
// Unknown values are empty fields. solve_millis is empty unless timings are requested.

inline std::string formulaCsvHeader() { return "k,g,seed,clause_count,satisfiability_number,is_mu,solve_millis\n"; }

inline std::string formulaCsvRows(const BatchStats& s, bool withTimings) {
    std::string out;
    for (const auto& f : s.perFormula) {
        auto n = f.satisfiabilityNumber();
        out += std::to_string(s.k) + "," + std::to_string(s.g) + "," + std::to_string(f.seed) + "," +
               std::to_string(f.clauseCount) + "," + (n && !f.timedOut ? std::to_string(*n) : "") + "," +
               (f.isMu && !f.timedOut ? (*f.isMu ? "1" : "0") : "") + "," +
               (withTimings ? detail::fixed(f.solveMillis, 3) : "") + "\n";
    }
    return out;
}

inline std::string summaryCsvHeader() { return "k,g,count,completed,mu_percent,mean_sat_no,std_dev_sat_no\n"; }

inline std::string summaryCsvRow(const BatchStats& s) {
    return std::to_string(s.k) + "," + std::to_string(s.g) + "," + std::to_string(s.count) + "," +
           std::to_string(s.completed) + "," + detail::fixed(s.muPercent, 2) + "," +
           (s.meanSatNo ? detail::fixed(*s.meanSatNo, 4) : "") + "," +
           (s.stdDevSatNo ? detail::fixed(*s.stdDevSatNo, 4) : "") + "\n";
}

/// Complete CSV for a set of batches: the per-formula section, one blank
/// line, then the summary section with one row per batch.
inline std::string batchCsv(const std::vector<BatchStats>& batches, bool withTimings = false) {
    std::string out = formulaCsvHeader();
    for (const auto& b : batches)
        out += formulaCsvRows(b, withTimings);
    out += "\n" + summaryCsvHeader();
    for (const auto& b : batches)
        out += summaryCsvRow(b);
    return out;
}

inline std::string tableHeader() {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%3s %4s %14s %11s %14s %14s %9s\n", "k", "g", "clause number", "MU Percent",
                  "Mean Sat. No.", "Standard Dev.", "excluded");
    return buf;
}

inline std::string tableRow(const BatchStats& s) {
    char buf[200];
    std::snprintf(buf, sizeof buf, "%3d %4d %14zu %11s %14s %14s %9zu\n", s.k, s.g, s.clauseNumber,
                  detail::fixed(s.muPercent, 1).c_str(), s.meanSatNo ? detail::fixed(*s.meanSatNo, 2).c_str() : "n/a",
                  s.stdDevSatNo ? detail::fixed(*s.stdDevSatNo, 2).c_str() : "n/a", s.excluded);
    return buf;
}

} // namespace spence
