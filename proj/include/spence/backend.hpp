#pragma once

#include <functional>
#include <string>

#include "spence/external.hpp"
#include "spence/solver.hpp"

namespace spence {

/// Which decision procedure answers satisfiability queries.
struct SolverBackend {
    enum class Kind { Dpll, BruteForce, External, Custom };
    using SolveFn = std::function<SolveResult(const CnfFormula&, const SolveOptions&)>;

    Kind kind = Kind::Dpll;
    std::string command; // External only
    SolveFn custom;      // Custom only

    static SolverBackend dpll() { return {}; }
    static SolverBackend bruteForce() { return {Kind::BruteForce, {}, {}}; }
    static SolverBackend external(std::string cmd) { return {Kind::External, std::move(cmd), {}}; }
    static SolverBackend fromFunction(SolveFn fn) { return {Kind::Custom, {}, std::move(fn)}; }

    [[nodiscard]] SolveResult solve(const CnfFormula& f, const SolveOptions& opts = {}) const {
        switch (kind) {
        case Kind::Dpll: return solveDpll(f, opts);
        case Kind::BruteForce: return solveBruteForce(f, opts);
        case Kind::External: return solveExternal(f, command, opts);
        case Kind::Custom: return custom(f, opts);
        }
        throw PreconditionError("unknown backend");
    }

    [[nodiscard]] std::string name() const {
        switch (kind) {
        case Kind::Dpll: return "dpll";
        case Kind::BruteForce: return "bruteforce";
        case Kind::External: return "external:" + command;
        case Kind::Custom: return "custom";
        }
        return "?";
    }
};

} // namespace spence
