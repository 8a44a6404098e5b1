#pragma once

#include <atomic>
#include <chrono>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "spence/backend.hpp"
#include "spence/generator.hpp"
#include "spence/parallel.hpp"

namespace spence {

/// The formula with clause `index` removed; other clauses keep their order.
inline CnfFormula deleteClause(const CnfFormula& f, std::size_t index) {
    if (index >= f.numClauses())
        throw PreconditionError("clause index " + std::to_string(index) + " out of range [0, " +
                                std::to_string(f.numClauses()) + ")");
    std::vector<Clause> rest;
    rest.reserve(f.numClauses() - 1);
    for (std::size_t i = 0; i < f.numClauses(); ++i)
        if (i != index)
            rest.push_back(f[i]);
    return CnfFormula(f.numVariables(), std::move(rest));
}

enum class DeletionOutcome : char {
    Sat = '1',
    Unsat = '0',
    Timeout = 'T',
    Skipped = '-', // not tested because early exit already decided the formula
};

struct DeletionRecord {
    DeletionOutcome outcome = DeletionOutcome::Skipped;
    std::optional<Assignment> witness;

    [[nodiscard]] bool satAfterDeletion() const { return outcome == DeletionOutcome::Sat; }
};

/// How many deletions of one clause polarity were tested and came out SAT.
struct PolarityTally {
    std::size_t tested = 0;
    std::size_t sat = 0;

    [[nodiscard]] double rate() const { return tested == 0 ? 0.0 : static_cast<double>(sat) / static_cast<double>(tested); }
};

struct MuOptions {
    SolverBackend backend;
    std::optional<std::chrono::milliseconds> timeoutPerSolve;
    int bruteForceCap = 24;
    /// Stop at the first deletion that stays UNSAT.
    bool earlyExit = false;
    bool keepWitnesses = false;
    int parallelism = 1;

    [[nodiscard]] SolveOptions solveOptions() const {
        SolveOptions o;
        o.bruteForceCap = bruteForceCap;
        if (timeoutPerSolve)
            o.deadline = Clock::now() + *timeoutPerSolve;
        return o;
    }
};

/// Single-clause deletion analysis of an unsatisfiable formula.
///
/// The satisfiability number is the count of clauses whose removal leaves a
/// satisfiable formula. When deletions time out or are skipped it is only
/// known to lie in [satLower, satUpper], and isMu may be unknown.
struct MuReport {
    std::string formulaId;
    std::size_t clauseCount = 0;
    std::vector<DeletionRecord> deletions;
    std::size_t satLower = 0;
    std::size_t satUpper = 0;
    std::optional<bool> isMu;
    PolarityTally positive; // deletions of all-positive clauses
    PolarityTally negative; // deletions of all-negative clauses
    std::size_t timeouts = 0;

    [[nodiscard]] bool exact() const { return satLower == satUpper; }

    [[nodiscard]] std::optional<std::size_t> satisfiabilityNumber() const {
        if (!exact())
            return std::nullopt;
        return satLower;
    }

    /// One character per clause: 1 sat, 0 unsat, T timeout, - skipped.
    [[nodiscard]] std::string bitmap() const {
        std::string s;
        s.reserve(deletions.size());
        for (const auto& d : deletions)
            s += static_cast<char>(d.outcome);
        return s;
    }

    [[nodiscard]] static std::string csvHeader() { return "formula_id,m,sat_lower,sat_upper,is_mu,bitmap"; }

    [[nodiscard]] std::string csvRecord() const {
        return formulaId + "," + std::to_string(clauseCount) + "," + std::to_string(satLower) + "," +
               std::to_string(satUpper) + "," + (isMu ? (*isMu ? "1" : "0") : "") + "," + bitmap();
    }

    [[nodiscard]] nlohmann::ordered_json toJson() const {
        nlohmann::ordered_json j;
        j["formula_id"] = formulaId;
        j["m"] = clauseCount;
        if (auto n = satisfiabilityNumber())
            j["satisfiability_number"] = *n;
        else
            j["satisfiability_number"] = {satLower, satUpper};
        j["is_mu"] = isMu ? nlohmann::ordered_json(*isMu) : nlohmann::ordered_json(nullptr);
        j["bitmap"] = bitmap();
        j["positive_deletions"] = {{"tested", positive.tested}, {"sat", positive.sat}};
        j["negative_deletions"] = {{"tested", negative.tested}, {"sat", negative.sat}};
        j["timeouts"] = timeouts;
        return j;
    }
};

/// Tests every single-clause deletion of `f` in clause-index order.
///
/// Throws NotUnsatError if `f` itself is satisfiable and TimeoutError if
/// that initial check runs out of time; per-deletion timeouts are recorded.
/// Every SAT model returned by the backend is checked with evaluate() and a
/// failing model raises SolverIntegrityError.
inline MuReport analyzeMu(const CnfFormula& f, const MuOptions& opts = {}, std::string formulaId = {}) {
    if (opts.backend.solve(f, opts.solveOptions()).sat())
        throw NotUnsatError();

    const std::size_t m = f.numClauses();
    MuReport report;
    report.formulaId = std::move(formulaId);
    report.clauseCount = m;
    report.deletions.resize(m);

    constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
    std::atomic<std::size_t> firstUnsat{kNone};

    parallelFor(m, opts.parallelism, [&](std::size_t i) {
        if (opts.earlyExit && i > firstUnsat.load())
            return;
        CnfFormula reduced = deleteClause(f, i);
        DeletionRecord& rec = report.deletions[i];
        try {
            SolveResult r = opts.backend.solve(reduced, opts.solveOptions());
            if (r.sat()) {
                if (!r.model || !evaluate(reduced, *r.model))
                    throw SolverIntegrityError("witness for deletion of clause " + std::to_string(i) +
                                               " does not satisfy the reduced formula");
                rec.outcome = DeletionOutcome::Sat;
                if (opts.keepWitnesses)
                    rec.witness = std::move(r.model);
            } else {
                rec.outcome = DeletionOutcome::Unsat;
                std::size_t cur = firstUnsat.load();
                while (i < cur && !firstUnsat.compare_exchange_weak(cur, i)) {
                }
            }
        } catch (const TimeoutError&) {
            rec.outcome = DeletionOutcome::Timeout;
        }
    });

    if (opts.earlyExit && firstUnsat.load() != kNone)
        for (std::size_t i = firstUnsat.load() + 1; i < m; ++i)
            report.deletions[i] = DeletionRecord{};

    bool anyUnsat = false, anyUnknown = false;
    for (std::size_t i = 0; i < m; ++i) {
        const auto& d = report.deletions[i];
        PolarityTally* tally = f[i].allOfPolarity(Polarity::Positive)   ? &report.positive
                               : f[i].allOfPolarity(Polarity::Negative) ? &report.negative
                                                                        : nullptr;
        switch (d.outcome) {
        case DeletionOutcome::Sat:
            ++report.satLower;
            ++report.satUpper;
            break;
        case DeletionOutcome::Unsat:
            anyUnsat = true;
            break;
        case DeletionOutcome::Timeout:
            ++report.timeouts;
            [[fallthrough]];
        case DeletionOutcome::Skipped:
            ++report.satUpper;
            anyUnknown = true;
            break;
        }
        if (tally && (d.outcome == DeletionOutcome::Sat || d.outcome == DeletionOutcome::Unsat)) {
            ++tally->tested;
            tally->sat += d.outcome == DeletionOutcome::Sat ? 1 : 0;
        }
    }
    if (anyUnsat)
        report.isMu = false;
    else if (!anyUnknown)
        report.isMu = true;
    return report;
}

struct FirstClauseWitness {
    bool found = false;
    std::optional<Assignment> assignment;
};

/// Looks for an assignment satisfying the generated formula minus clause 0,
/// i.e. minus (x1 ∨ ... ∨ xk), of the shape where x1..xk are false and the
/// rest of the first positive cell is true. The remaining cell constraints
/// are left to the solver. Any returned assignment has been verified.
inline FirstClauseWitness firstClauseWitness(const GeneratorParams& params, const SolverBackend& backend = {},
                                             const SolveOptions& opts = {}) {
    const CnfFormula full = generate(params);
    const CnfFormula reduced = deleteClause(full, 0);

    std::vector<Variable> identity(static_cast<std::size_t>(params.numVariables()));
    std::iota(identity.begin(), identity.end(), 1);
    const auto firstCell = partitionInOrder(params, identity).cells.front();

    std::vector<Clause> constrained(reduced.clauses().begin(), reduced.clauses().end());
    for (std::size_t i = 0; i < firstCell.size(); ++i) {
        Variable v = firstCell[i];
        constrained.push_back(Clause{i < static_cast<std::size_t>(params.k) ? Literal::negative(v) : Literal::positive(v)});
    }
    SolveResult r = backend.solve(CnfFormula(reduced.numVariables(), std::move(constrained)), opts);
    if (!r.sat())
        return {};
    if (!evaluate(reduced, *r.model))
        throw SolverIntegrityError("first-clause witness does not satisfy the reduced formula");
    return {true, std::move(r.model)};
}

} // namespace spence
