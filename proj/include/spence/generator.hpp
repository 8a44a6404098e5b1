#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "spence/cnf.hpp"
#include "spence/random.hpp"

namespace spence {

inline constexpr const char* kToolVersion = "spence-mu 1.0.0";

/// Binomial coefficient C(n, r); zero when r > n.
inline constexpr std::uint64_t binomial(std::uint64_t n, std::uint64_t r) {
    if (r > n)
        return 0;
    r = std::min(r, n - r);
    std::uint64_t acc = 1;
    for (std::uint64_t i = 1; i <= r; ++i)
        acc = acc * (n - r + i) / i; // exact: acc * (n-r+i) is divisible by i at every step
    return acc;
}

/// Parameters of the construction: clause width k, group count g, and the
/// seed of the permutation used for the negative half.
struct GeneratorParams {
    int k = 3;
    int g = 5;
    std::uint64_t seed = 0;

    static constexpr std::uint64_t kMaxClauses = 50'000'000;

    [[nodiscard]] int smallCellSize() const { return 2 * k - 2; }
    [[nodiscard]] int lastCellSize() const { return 2 * k - 1; }
    [[nodiscard]] Variable numVariables() const { return static_cast<Variable>((2 * k - 2) * g + 1); }

    /// 2 * [(g-1) * C(2k-2, k) + C(2k-1, k)]
    [[nodiscard]] std::uint64_t numClauses() const {
        auto kk = static_cast<std::uint64_t>(k);
        return 2 * (static_cast<std::uint64_t>(g - 1) * binomial(2 * kk - 2, kk) + binomial(2 * kk - 1, kk));
    }

    void validate() const {
        if (k < 2)
            throw PreconditionError("k must be >= 2 (got " + std::to_string(k) + ")");
        if (g < 1)
            throw PreconditionError("g must be >= 1 (got " + std::to_string(g) + ")");
        if (k > 32 || static_cast<std::int64_t>(2 * k - 2) * g + 1 > INT32_MAX / 2 || numClauses() > kMaxClauses)
            throw PreconditionError("k=" + std::to_string(k) + ", g=" + std::to_string(g) +
                                    " produces more than " + std::to_string(kMaxClauses) + " clauses");
    }

    friend bool operator==(const GeneratorParams&, const GeneratorParams&) = default;
};

/// Variable cells in partition order: g-1 cells of size 2k-2, then one of size 2k-1.
struct PartitionLayout {
    std::vector<std::vector<Variable>> cells;
};

/// Cuts `order` into consecutive cells. `order` must be a permutation of 1..numVariables.
inline PartitionLayout partitionInOrder(const GeneratorParams& params, std::span<const Variable> order) {
    params.validate();
    const auto n = static_cast<std::size_t>(params.numVariables());
    if (order.size() != n)
        throw PreconditionError("order has " + std::to_string(order.size()) + " entries, expected " +
                                std::to_string(n));
    std::vector<bool> seen(n + 1, false);
    for (Variable v : order) {
        if (v < 1 || static_cast<std::size_t>(v) > n || seen[static_cast<std::size_t>(v)])
            throw PreconditionError("order is not a permutation of 1.." + std::to_string(n));
        seen[static_cast<std::size_t>(v)] = true;
    }

    PartitionLayout layout;
    const auto small = static_cast<std::size_t>(params.smallCellSize());
    std::size_t pos = 0;
    for (int i = 0; i + 1 < params.g; ++i, pos += small)
        layout.cells.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(pos),
                                  order.begin() + static_cast<std::ptrdiff_t>(pos + small));
    layout.cells.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(pos), order.end());
    return layout;
}

/// All k-subsets of `cell` as clauses of one polarity.
///
/// Subsets come in lexicographic order of the sorted cell; literals inside a
/// clause ascend by variable.
inline std::vector<Clause> cellClauses(std::span<const Variable> cell, int k, Polarity polarity) {
    if (k < 1 || cell.size() < static_cast<std::size_t>(k))
        throw PreconditionError("cell of size " + std::to_string(cell.size()) + " has no " + std::to_string(k) +
                                "-subsets");
    std::vector<Variable> sorted(cell.begin(), cell.end());
    std::sort(sorted.begin(), sorted.end());

    const auto n = sorted.size();
    const auto r = static_cast<std::size_t>(k);
    std::vector<std::size_t> idx(r);
    for (std::size_t i = 0; i < r; ++i)
        idx[i] = i;

    std::vector<Clause> out;
    out.reserve(static_cast<std::size_t>(binomial(n, r)));
    for (;;) {
        std::vector<Literal> lits;
        lits.reserve(r);
        for (auto i : idx)
            lits.emplace_back(sorted[i], polarity);
        out.emplace_back(std::move(lits));

        // advance to the next combination
        std::size_t i = r;
        while (i > 0 && idx[i - 1] == n - r + (i - 1))
            --i;
        if (i == 0)
            break;
        ++idx[i - 1];
        for (std::size_t j = i; j < r; ++j)
            idx[j] = idx[j - 1] + 1;
    }
    return out;
}

/// Permutation that defines the negative-half partition for `params`.
inline std::vector<Variable> negativeOrder(const GeneratorParams& params) {
    return permute(params.numVariables(), params.seed);
}

/// Builds C = C1 ∧ C2.
///
/// C1: positive k-clauses of every cell of the identity-order partition.
/// C2: negative k-clauses of every cell of the partition of the seeded permutation.
/// Clauses are cell-major; all of C1 precedes all of C2. Clause 0 is therefore
/// (x1 ∨ ... ∨ xk).
inline CnfFormula generate(const GeneratorParams& params) {
    params.validate();
    const Variable n = params.numVariables();

    std::vector<Variable> identity(static_cast<std::size_t>(n));
    std::iota(identity.begin(), identity.end(), 1);

    std::vector<Clause> clauses;
    clauses.reserve(static_cast<std::size_t>(params.numClauses()));
    for (const auto& cell : partitionInOrder(params, identity).cells)
        for (auto& c : cellClauses(cell, params.k, Polarity::Positive))
            clauses.push_back(std::move(c));
    for (const auto& cell : partitionInOrder(params, negativeOrder(params)).cells)
        for (auto& c : cellClauses(cell, params.k, Polarity::Negative))
            clauses.push_back(std::move(c));
    return CnfFormula(n, std::move(clauses));
}

/// DIMACS comment lines recording how a formula was generated.
inline std::vector<std::string> provenanceComments(const GeneratorParams& params) {
    return {
        "generalized Spence construction",
        "k=" + std::to_string(params.k) + " g=" + std::to_string(params.g) + " seed=" + std::to_string(params.seed),
        "prng=splitmix64 fisher-yates",
        std::string("tool=") + kToolVersion,
    };
}

} // namespace spence
