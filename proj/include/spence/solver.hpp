#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "spence/cnf.hpp"

namespace spence {

using Clock = std::chrono::steady_clock;

enum class SolveStatus { Sat, Unsat };

inline const char* toString(SolveStatus s) { return s == SolveStatus::Sat ? "SAT" : "UNSAT"; }

struct SolveStats {
    std::uint64_t decisions = 0;
    std::uint64_t propagations = 0;
    std::uint64_t conflicts = 0;
};

struct SolveResult {
    SolveStatus status = SolveStatus::Unsat;
    std::optional<Assignment> model; // total; present iff status == Sat
    SolveStats stats;

    [[nodiscard]] bool sat() const { return status == SolveStatus::Sat; }
};

struct SolveOptions {
    std::optional<Clock::time_point> deadline;
    int bruteForceCap = 24;

    static SolveOptions withTimeout(std::chrono::milliseconds budget) {
        SolveOptions o;
        o.deadline = Clock::now() + budget;
        return o;
    }
};

namespace detail {

inline void checkDeadline(const SolveOptions& opts) {
    if (opts.deadline && Clock::now() > *opts.deadline)
        throw TimeoutError();
}

// Literal index: 2*(v-1) for v, 2*(v-1)+1 for ¬v.
inline std::uint32_t litIndex(Literal l) {
    return 2 * static_cast<std::uint32_t>(l.variable() - 1) + (l.isNegative() ? 1U : 0U);
}

class Dpll {
public:
    explicit Dpll(const CnfFormula& f) : n_(f.numVariables()) {
        const auto nv = static_cast<std::size_t>(n_);
        value_.assign(nv + 1, 0);
        occurs_.resize(2 * nv);
        clauses_.reserve(f.numClauses());
        for (const Clause& c : f.clauses()) {
            std::vector<std::uint32_t> lits;
            for (Literal l : c)
                lits.push_back(litIndex(l));
            const auto id = static_cast<std::uint32_t>(clauses_.size());
            for (auto l : lits)
                occurs_[l].push_back(id);
            clauses_.push_back(std::move(lits));
        }
        satCount_.assign(clauses_.size(), 0);
        falseCount_.assign(clauses_.size(), 0);
        posCount_.assign(nv + 1, 0);
        negCount_.assign(nv + 1, 0);
    }

    SolveResult run(const SolveOptions& opts) {
        SolveResult result;
        for (const auto& c : clauses_)
            if (c.empty())
                return finish(result, false);
        // Initial unit clauses; a tautological or repeated unit is harmless.
        for (const auto& c : clauses_) {
            if (c.size() != 1)
                continue;
            int v = valueOf(c[0]);
            if (v == -1)
                return finish(result, false);
            if (v == 0)
                enqueue(c[0]);
        }

        struct Frame {
            std::size_t trailPos;
            std::uint32_t lit;
            bool flipped;
        };
        std::vector<Frame> frames;

        for (;;) {
            checkDeadline(opts);
            if (!propagate()) {
                ++stats_.conflicts;
                bool resumed = false;
                while (!frames.empty()) {
                    Frame& top = frames.back();
                    undoTo(top.trailPos);
                    if (!top.flipped) {
                        top.flipped = true;
                        enqueue(top.lit ^ 1U);
                        resumed = true;
                        break;
                    }
                    frames.pop_back();
                }
                if (!resumed)
                    return finish(result, false);
                continue;
            }

            auto branch = chooseBranch();
            if (!branch)
                return finish(result, true);
            if (*branch == kPureApplied)
                continue;
            ++stats_.decisions;
            frames.push_back({trail_.size(), *branch, false});
            enqueue(*branch);
        }
    }

private:
    static constexpr std::uint32_t kPureApplied = ~std::uint32_t{0};

    int valueOf(std::uint32_t lit) const {
        int v = value_[(lit >> 1) + 1];
        return (lit & 1U) ? -v : v;
    }

    void enqueue(std::uint32_t lit) {
        value_[(lit >> 1) + 1] = (lit & 1U) ? -1 : 1;
        trail_.push_back(lit);
        for (auto c : occurs_[lit])
            ++satCount_[c];
        for (auto c : occurs_[lit ^ 1U])
            ++falseCount_[c];
    }

    void undoTo(std::size_t pos) {
        while (trail_.size() > pos) {
            auto lit = trail_.back();
            trail_.pop_back();
            value_[(lit >> 1) + 1] = 0;
            for (auto c : occurs_[lit])
                --satCount_[c];
            for (auto c : occurs_[lit ^ 1U])
                --falseCount_[c];
        }
        qhead_ = std::min(qhead_, trail_.size());
    }

    // Unit propagation over the trail. Returns false on conflict.
    bool propagate() {
        while (qhead_ < trail_.size()) {
            auto lit = trail_[qhead_++];
            for (auto c : occurs_[lit ^ 1U]) {
                if (satCount_[c] > 0)
                    continue;
                const auto& cl = clauses_[c];
                if (falseCount_[c] == cl.size()) {
                    qhead_ = trail_.size();
                    return false;
                }
                if (falseCount_[c] + 1 == cl.size()) {
                    for (auto l : cl) {
                        if (valueOf(l) == 0) {
                            ++stats_.propagations;
                            enqueue(l);
                            break;
                        }
                    }
                }
            }
        }
        return true;
    }

    // Scans unresolved clauses. Returns nullopt when none remain (SAT),
    // kPureApplied after assigning pure literals, or the next decision literal:
    // the variable occurring most often in unresolved clauses, lowest index on
    // ties, tried true first.
    std::optional<std::uint32_t> chooseBranch() {
        std::fill(posCount_.begin(), posCount_.end(), 0);
        std::fill(negCount_.begin(), negCount_.end(), 0);
        bool anyOpen = false;
        for (std::size_t c = 0; c < clauses_.size(); ++c) {
            if (satCount_[c] > 0)
                continue;
            anyOpen = true;
            for (auto l : clauses_[c]) {
                if (valueOf(l) != 0)
                    continue;
                auto v = (l >> 1) + 1;
                if (l & 1U)
                    ++negCount_[v];
                else
                    ++posCount_[v];
            }
        }
        if (!anyOpen)
            return std::nullopt;

        bool pure = false;
        Variable best = 0;
        std::uint32_t bestCount = 0;
        for (Variable v = 1; v <= n_; ++v) {
            if (value_[static_cast<std::size_t>(v)] != 0)
                continue;
            auto p = posCount_[static_cast<std::size_t>(v)];
            auto q = negCount_[static_cast<std::size_t>(v)];
            if ((p == 0) != (q == 0)) {
                enqueue(2 * static_cast<std::uint32_t>(v - 1) + (p == 0 ? 1U : 0U));
                pure = true;
            } else if (p + q > bestCount) {
                bestCount = p + q;
                best = v;
            }
        }
        if (pure)
            return kPureApplied;
        // An open clause with no free literal would have been a conflict.
        return 2 * static_cast<std::uint32_t>(best - 1);
    }

    SolveResult& finish(SolveResult& r, bool sat) {
        r.stats = stats_;
        if (!sat) {
            r.status = SolveStatus::Unsat;
            return r;
        }
        r.status = SolveStatus::Sat;
        Assignment model(n_);
        for (Variable v = 1; v <= n_; ++v)
            model.set(v, value_[static_cast<std::size_t>(v)] == 1);
        r.model = std::move(model);
        return r;
    }

    Variable n_;
    std::vector<std::vector<std::uint32_t>> clauses_;
    std::vector<std::vector<std::uint32_t>> occurs_;
    std::vector<std::int8_t> value_;
    std::vector<std::uint32_t> satCount_;
    std::vector<std::uint32_t> falseCount_;
    std::vector<std::uint32_t> posCount_;
    std::vector<std::uint32_t> negCount_;
    std::vector<std::uint32_t> trail_;
    std::size_t qhead_ = 0;
    SolveStats stats_;
};

} // namespace detail

/// Complete DPLL: unit propagation, pure-literal elimination, and
/// chronological backtracking over a most-occurrences branching rule.
/// Unassigned variables in a SAT model are set false.
inline SolveResult solveDpll(const CnfFormula& f, const SolveOptions& opts = {}) {
    detail::checkDeadline(opts);
    return detail::Dpll(f).run(opts);
}

/// Enumerates total assignments in ascending binary order (variable v is bit
/// v-1, so the first candidate is all-false) and returns the first model.
inline SolveResult solveBruteForce(const CnfFormula& f, const SolveOptions& opts = {}) {
    const Variable n = f.numVariables();
    if (n > opts.bruteForceCap || n > 62)
        throw PreconditionError("brute force refuses " + std::to_string(n) + " variables (cap " +
                                std::to_string(std::min(opts.bruteForceCap, 62)) + "); use DPLL");

    struct Masks {
        std::uint64_t pos = 0, neg = 0;
    };
    std::vector<Masks> masks;
    masks.reserve(f.numClauses());
    for (const Clause& c : f.clauses()) {
        Masks m;
        for (Literal l : c)
            (l.isNegative() ? m.neg : m.pos) |= std::uint64_t{1} << (l.variable() - 1);
        masks.push_back(m);
    }

    SolveResult result;
    const std::uint64_t end = std::uint64_t{1} << n;
    for (std::uint64_t x = 0; x < end; ++x) {
        if ((x & 0xFFFFF) == 0)
            detail::checkDeadline(opts);
        bool ok = true;
        for (const auto& m : masks) {
            if (((x & m.pos) | (~x & m.neg)) == 0) {
                ok = false;
                break;
            }
        }
        if (ok) {
            Assignment model(n);
            for (Variable v = 1; v <= n; ++v)
                model.set(v, (x >> (v - 1)) & 1U);
            result.status = SolveStatus::Sat;
            result.model = std::move(model);
            return result;
        }
    }
    result.status = SolveStatus::Unsat;
    return result;
}

} // namespace spence
