#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "spence/error.hpp"

namespace spence {

using Variable = std::int32_t;

enum class Polarity : std::uint8_t { Positive, Negative };

/// A propositional variable or its negation. Variables are 1-based, matching DIMACS.
class Literal {
public:
    constexpr Literal(Variable var, Polarity polarity) : code_(polarity == Polarity::Positive ? var : -var) {
        if (var < 1)
            throw PreconditionError("literal variable must be >= 1, got " + std::to_string(var));
    }

    static constexpr Literal positive(Variable var) { return {var, Polarity::Positive}; }
    static constexpr Literal negative(Variable var) { return {var, Polarity::Negative}; }

    /// Builds a literal from its signed DIMACS encoding (nonzero).
    static constexpr Literal fromDimacs(std::int32_t code) {
        if (code == 0)
            throw PreconditionError("0 is not a literal");
        return code > 0 ? positive(code) : negative(-code);
    }

    [[nodiscard]] constexpr Variable variable() const { return code_ > 0 ? code_ : -code_; }
    [[nodiscard]] constexpr Polarity polarity() const { return code_ > 0 ? Polarity::Positive : Polarity::Negative; }
    [[nodiscard]] constexpr bool isNegative() const { return code_ < 0; }
    [[nodiscard]] constexpr std::int32_t dimacs() const { return code_; }

    constexpr Literal operator~() const { return fromDimacs(-code_); }

    friend constexpr bool operator==(Literal, Literal) = default;
    friend constexpr auto operator<=>(Literal, Literal) = default;

private:
    std::int32_t code_;
};

/// A disjunction of literals. Literal order is preserved as given; duplicates are rejected.
class Clause {
public:
    Clause() = default;
    Clause(std::initializer_list<Literal> lits) : Clause(std::vector<Literal>(lits)) {}

    explicit Clause(std::vector<Literal> lits) : literals_(std::move(lits)) {
        for (std::size_t i = 0; i < literals_.size(); ++i)
            for (std::size_t j = i + 1; j < literals_.size(); ++j)
                if (literals_[i] == literals_[j])
                    throw PreconditionError("duplicate literal " + std::to_string(literals_[i].dimacs()) +
                                            " in clause");
    }

    [[nodiscard]] std::span<const Literal> literals() const { return literals_; }
    [[nodiscard]] std::size_t size() const { return literals_.size(); }
    [[nodiscard]] bool empty() const { return literals_.empty(); }
    [[nodiscard]] auto begin() const { return literals_.begin(); }
    [[nodiscard]] auto end() const { return literals_.end(); }
    const Literal& operator[](std::size_t i) const { return literals_[i]; }

    /// True when the clause contains some variable together with its negation.
    [[nodiscard]] bool isTautology() const {
        for (std::size_t i = 0; i < literals_.size(); ++i)
            for (std::size_t j = i + 1; j < literals_.size(); ++j)
                if (literals_[i] == ~literals_[j])
                    return true;
        return false;
    }

    [[nodiscard]] bool allOfPolarity(Polarity p) const {
        return !literals_.empty() &&
               std::all_of(literals_.begin(), literals_.end(), [p](Literal l) { return l.polarity() == p; });
    }

    friend bool operator==(const Clause&, const Clause&) = default;

private:
    std::vector<Literal> literals_;
};

/// A conjunction of clauses over variables 1..numVariables. Clause indices are stable identifiers.
class CnfFormula {
public:
    explicit CnfFormula(Variable numVariables, std::vector<Clause> clauses = {})
        : numVariables_(numVariables), clauses_(std::move(clauses)) {
        if (numVariables_ < 1)
            throw PreconditionError("formula must have at least one variable");
        for (std::size_t i = 0; i < clauses_.size(); ++i)
            for (Literal l : clauses_[i])
                if (l.variable() > numVariables_)
                    throw PreconditionError("clause " + std::to_string(i) + " mentions variable " +
                                            std::to_string(l.variable()) + " beyond " +
                                            std::to_string(numVariables_));
    }

    [[nodiscard]] Variable numVariables() const { return numVariables_; }
    [[nodiscard]] std::size_t numClauses() const { return clauses_.size(); }
    [[nodiscard]] std::span<const Clause> clauses() const { return clauses_; }
    const Clause& operator[](std::size_t i) const { return clauses_[i]; }

    /// Returns a copy with literals sorted inside each clause and clauses sorted lexicographically.
    [[nodiscard]] CnfFormula normalized() const {
        std::vector<std::vector<Literal>> raw;
        raw.reserve(clauses_.size());
        for (const Clause& c : clauses_) {
            std::vector<Literal> lits(c.begin(), c.end());
            std::sort(lits.begin(), lits.end(),
                      [](Literal a, Literal b) { return std::pair(a.variable(), a.dimacs()) < std::pair(b.variable(), b.dimacs()); });
            raw.push_back(std::move(lits));
        }
        std::sort(raw.begin(), raw.end(), [](const auto& a, const auto& b) {
            return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(), [](Literal x, Literal y) {
                return std::pair(x.variable(), x.dimacs()) < std::pair(y.variable(), y.dimacs());
            });
        });
        std::vector<Clause> out;
        out.reserve(raw.size());
        for (auto& lits : raw)
            out.emplace_back(std::move(lits));
        return CnfFormula(numVariables_, std::move(out));
    }

    friend bool operator==(const CnfFormula&, const CnfFormula&) = default;

private:
    Variable numVariables_;
    std::vector<Clause> clauses_;
};

/// Possibly partial mapping from variables 1..n to truth values.
class Assignment {
public:
    Assignment() = default;
    explicit Assignment(Variable numVariables) : values_(static_cast<std::size_t>(numVariables), kUnset) {}

    /// Total assignment giving every variable the same value.
    static Assignment uniform(Variable numVariables, bool value) {
        Assignment a(numVariables);
        std::fill(a.values_.begin(), a.values_.end(), value ? kTrue : kFalse);
        return a;
    }

    [[nodiscard]] Variable numVariables() const { return static_cast<Variable>(values_.size()); }

    void set(Variable v, bool value) { values_.at(index(v)) = value ? kTrue : kFalse; }
    void unset(Variable v) { values_.at(index(v)) = kUnset; }

    [[nodiscard]] std::optional<bool> get(Variable v) const {
        auto x = values_.at(index(v));
        if (x == kUnset)
            return std::nullopt;
        return x == kTrue;
    }

    [[nodiscard]] bool isAssigned(Variable v) const { return values_.at(index(v)) != kUnset; }

    /// Value of a literal, or nullopt when its variable is unassigned.
    [[nodiscard]] std::optional<bool> value(Literal l) const {
        auto v = get(l.variable());
        if (!v)
            return std::nullopt;
        return l.isNegative() ? !*v : *v;
    }

    [[nodiscard]] std::optional<Variable> firstUnassigned() const {
        for (std::size_t i = 0; i < values_.size(); ++i)
            if (values_[i] == kUnset)
                return static_cast<Variable>(i + 1);
        return std::nullopt;
    }

    [[nodiscard]] bool isTotal() const { return !firstUnassigned().has_value(); }

    [[nodiscard]] std::size_t countValue(bool value) const {
        return static_cast<std::size_t>(std::count(values_.begin(), values_.end(), value ? kTrue : kFalse));
    }

    /// Signed DIMACS literals for every assigned variable, ascending by variable.
    [[nodiscard]] std::vector<std::int32_t> toDimacs() const {
        std::vector<std::int32_t> out;
        for (std::size_t i = 0; i < values_.size(); ++i)
            if (values_[i] != kUnset)
                out.push_back(values_[i] == kTrue ? static_cast<std::int32_t>(i + 1) : -static_cast<std::int32_t>(i + 1));
        return out;
    }

    friend bool operator==(const Assignment&, const Assignment&) = default;

private:
    static constexpr std::int8_t kUnset = 0;
    static constexpr std::int8_t kTrue = 1;
    static constexpr std::int8_t kFalse = -1;

    std::size_t index(Variable v) const {
        if (v < 1 || static_cast<std::size_t>(v) > values_.size())
            throw PreconditionError("variable " + std::to_string(v) + " outside assignment domain 1.." +
                                    std::to_string(values_.size()));
        return static_cast<std::size_t>(v - 1);
    }

    std::vector<std::int8_t> values_;
};

/// Whether a total assignment makes a clause true.
inline bool satisfies(const Assignment& a, const Clause& c) {
    return std::any_of(c.begin(), c.end(), [&](Literal l) { return a.value(l).value_or(false); });
}

/// Truth-table evaluation of a formula under a total assignment.
///
/// Throws PreconditionError naming the first unassigned variable when the
/// assignment is partial, or when its domain does not match the formula.
inline bool evaluate(const CnfFormula& f, const Assignment& a) {
    if (a.numVariables() != f.numVariables())
        throw PreconditionError("assignment covers " + std::to_string(a.numVariables()) +
                                " variables but formula has " + std::to_string(f.numVariables()));
    if (auto v = a.firstUnassigned())
        throw PreconditionError("assignment is partial: variable " + std::to_string(*v) + " is unassigned");
    for (const Clause& c : f.clauses())
        if (!satisfies(a, c))
            return false;
    return true;
}

} // namespace spence
